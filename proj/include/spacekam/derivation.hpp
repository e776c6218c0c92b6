#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spacekam/machine.hpp"
#include "spacekam/space_kam.hpp"
#include "spacekam/types.hpp"

namespace spacekam {

enum class Rule {
  TVar,
  TLamStar,
  TLam1,
  TLam2,
  TMany,
  TNone,
  TApp1,
  TApp2,
  TEnv,
  TCl,
  TSt,
  DC_TVar,
  DC_TLam,
  DC_TLamStar,
  DC_TApp,
};

std::string_view to_string(Rule r);
std::optional<Rule> rule_from_string(std::string_view s);
/// Rules of the unindexed system used for KAM time.
bool is_plain_rule(Rule r);

using Subject = std::variant<TermPtr, Env, ClosurePtr, MachState>;
using Context = std::variant<TypeContext, PlainContext>;
/// Term subjects get a LinearPtr or ClosureMulti (PlainPtr in kam mode),
/// environments a TypeContext, closures a ClosureMulti, states star.
using Assigned = std::variant<LinearPtr, ClosureMulti, TypeContext, PlainPtr>;

struct Judgment {
  Subject subject;
  Context context;
  Assigned assigned;
  std::uint64_t weight = 0;
};

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

struct Derivation {
  Rule rule;
  Judgment conclusion;
  std::vector<DerivPtr> premises;
};

DerivPtr make_derivation(Rule rule, Judgment conclusion, std::vector<DerivPtr> premises = {});

std::string_view subject_kind(const Subject& s);

enum class Mode { Space, Time, Kam };
std::string_view to_string(Mode m);
std::optional<Mode> mode_from_string(std::string_view s);

struct CheckError {
  std::string path;  // "$" is the root, "$.1.0" the first premise of its second premise
  std::string message;
};

struct CheckResult {
  bool ok = true;
  std::vector<CheckError> errors;
  std::uint64_t weight = 0;  // recomputed root weight
};

/// Validates every node bottom-up. Weights are recomputed from the
/// recomputed premise weights, so a forged stored weight is reported only at
/// its own node. Without full_scan checking stops at the first error.
CheckResult check(const DerivPtr& pi, Mode mode, bool full_scan = false);

/// Root weight recomputed from scratch; throws InvalidDerivation if check fails.
std::uint64_t weight_of(const DerivPtr& pi, Mode mode);

/// Weight of one node from its judgment and its premises' weights, no
/// validation. Throws InvalidDerivation on a rule/mode mismatch.
std::uint64_t rule_weight(const Derivation& node, Mode mode,
                          const std::vector<std::uint64_t>& premise_weights);

/// Node count without T-many, T-none, T-cl and T-env.
std::uint64_t size_of(const DerivPtr& pi);

/// Same skeleton with every stored weight recomputed for `mode`.
DerivPtr reweight(const DerivPtr& pi, Mode mode);

std::map<Rule, std::size_t> rule_counts(const DerivPtr& pi);

/// Rule occurrences against transition counts: T-@2/sea_v, T-@1/sea_nv,
/// T-lambda1/beta_nw, T-lambda2/beta_w, T-Var/sub, and one T-lambda*.
bool check_rule_transition_correspondence(const DerivPtr& pi, const SpaceRun& run);

std::string print_judgment(const Judgment& j);
/// Indented inference tree, conclusion first.
std::string print_derivation(const DerivPtr& pi);

// Judgment accessors; nullptr when the alternative does not match.
const TermPtr* subject_term(const Judgment& j);
const TypeContext* indexed_context(const Judgment& j);
const PlainContext* plain_context(const Judgment& j);
const LinearPtr* linear_type(const Judgment& j);
const ClosureMulti* closure_type(const Judgment& j);
const TypeContext* env_type(const Judgment& j);
const PlainPtr* plain_type(const Judgment& j);

}  // namespace spacekam

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "spacekam/derivation.hpp"
#include "spacekam/kam.hpp"
#include "spacekam/space_kam.hpp"

namespace spacekam {

/// Weight-0 typings with every index set to the size of the closure it
/// stands for. dry_type_closure gives T-cl over T-env and T-none.
DerivPtr dry_type_closure(const ClosurePtr& c);
DerivPtr dry_type_env(const Env& e);

/// T-st over T-lambda* and the dry environment typing. Throws NotFinal.
DerivPtr type_final_state(const MachState& s);

/// One step of subject expansion: from a state derivation of the target of
/// the transition `label` taken in `source`, a state derivation of `source`.
/// Throws ShapeMismatch if the derivation does not type that target.
DerivPtr expand(const DerivPtr& target, SpaceLabel label, const MachState& source);

/// Two typings of the same closure combined into one at the union type.
DerivPtr merge_closure_derivations(const DerivPtr& a, const DerivPtr& b);
/// T-env derivations over restrictions of e, combined into one over e.
DerivPtr merge_env_derivations(const Env& e, const DerivPtr& a, const DerivPtr& b);

/// Splits a closure derivation at A+B into derivations at A and at B, where
/// `left` lists the elements of A. Throws BadSplit.
std::pair<DerivPtr, DerivPtr> split_closure_derivation(const DerivPtr& cl,
                                                       const std::vector<LinearPtr>& left);

struct Extraction {
  DerivPtr term;                 // empty context, typed *
  std::vector<DerivPtr> states;  // one state derivation per state of the run
  std::vector<std::string> violations;  // failed step equations, if any
};

/// Types the final state and expands backwards over the whole trace. Stored
/// weights are space weights. Throws IncompleteRun.
Extraction extract_detailed(const SpaceRun& run);
DerivPtr extract(const SpaceRun& run);

/// Unindexed derivation whose kam-mode weight is the run length. Throws
/// IncompleteRun.
DerivPtr extract_kam(const Run& run);

}  // namespace spacekam

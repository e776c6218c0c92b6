#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spacekam/json_io.hpp"
#include "spacekam/term.hpp"

namespace spacekam {

struct GenWeights {
  double app = 0.45;
  double abs = 0.35;
  double var = 0.20;
  /// Chance that a binder reuses a name already in scope.
  double shadow = 0.15;
};

/// Deterministic in (seed, budget, weights), at most max(budget, 2) nodes.
/// Variables are only drawn from enclosing binders, so the result is always
/// closed.
TermPtr random_closed_term(std::uint64_t seed, std::size_t budget, const GenWeights& w = {});

std::uint64_t splitmix64(std::uint64_t x);
/// Seed of the i-th term of a fuzz campaign.
inline std::uint64_t term_seed(std::uint64_t seed, std::uint64_t i) {
  return splitmix64(splitmix64(seed) + i);
}

struct CheckOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
  bool operator==(const CheckOutcome&) const = default;
};

struct VerificationReport {
  TermPtr term;
  std::size_t wh_steps = 0;
  bool wh_exhausted = false;
  struct Kam {
    std::map<std::string, std::size_t> transitions;
    bool complete = false;
    std::uint64_t decarvalho_weight = 0;
    bool operator==(const Kam&) const = default;
  } kam;
  struct Skam {
    std::map<std::string, std::size_t> transitions;
    bool complete = false;
    std::uint64_t space = 0;
    std::uint64_t time = 0;
    std::uint64_t space_weight = 0;
    std::uint64_t time_weight = 0;
    bool operator==(const Skam&) const = default;
  } skam;
  std::vector<CheckOutcome> checks;
  bool complete = false;

  bool passed() const;
  const CheckOutcome* find(const std::string& name) const;
};

bool operator==(const VerificationReport& a, const VerificationReport& b);

/// Runs the reference evaluator and both machines; on completion extracts
/// and checks all three derivations against the measurements. Never throws
/// on check failures, which end up in `checks`.
VerificationReport verify(const TermPtr& t, std::size_t fuel);

json report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const json& j);

struct FuzzSummary {
  std::size_t count = 0;
  std::size_t complete = 0;
  std::size_t incomplete = 0;
  std::size_t failed = 0;
  std::map<std::string, std::size_t> failures_by_check;
  std::vector<std::size_t> failing_indices;
  std::uint64_t max_space = 0;
  std::uint64_t total_transitions = 0;
  std::uint64_t digest = 0;  // fingerprint of the per-term results, in index order

  bool operator==(const FuzzSummary&) const = default;
};

struct FuzzConfig {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::size_t budget = 25;
  std::size_t fuel = 2000;
  GenWeights weights;
};

/// Reference implementation, one term after the other.
FuzzSummary fuzz_serial(const FuzzConfig& cfg);
/// Term indices distributed over OpenMP threads; same summary as fuzz_serial.
FuzzSummary fuzz_parallel(const FuzzConfig& cfg);

json summary_to_json(const FuzzSummary& s);

}  // namespace spacekam

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "spacekam/machine.hpp"

namespace spacekam {

/// Space KAM transitions: unchaining (sea_v) and eager garbage collection
/// (beta_w, plus environment restriction on both sea rules).
enum class SpaceLabel { SeaV, SeaNv, BetaW, BetaNw, Sub };
inline constexpr std::array<SpaceLabel, 5> kAllSpaceLabels{
    SpaceLabel::SeaV, SpaceLabel::SeaNv, SpaceLabel::BetaW, SpaceLabel::BetaNw, SpaceLabel::Sub};

std::string_view to_string(SpaceLabel l);

struct SpaceStep {
  SpaceLabel label;
  MachState state;     // target of the transition
  std::uint64_t size;  // state_size(state)
};

/// Entries of e bound to a variable in vars, order preserved.
Env env_restrict(const Env& e, const VarSet& vars);

/// The unique Space KAM transition, or nullopt on final states. Throws
/// InvariantViolation when dom(env) != fv(code) at the top level.
std::optional<SpaceStep> skam_step(const MachState& s);

/// dom e = fv t for the active closure and, recursively, for every closure
/// reachable from the state.
bool check_env_domain_invariant(const MachState& s);

struct SpaceRun {
  MachState initial;
  std::uint64_t initial_size = 0;
  std::vector<SpaceStep> trace;
  bool final_reached = false;
  std::uint64_t space = 0;  // max state size over the run
  std::uint64_t time = 0;   // sum of state sizes over the run

  std::size_t transitions() const { return trace.size(); }
  std::size_t num_states() const { return trace.size() + 1; }
  std::size_t count(SpaceLabel l) const;
  std::size_t beta_count() const { return count(SpaceLabel::BetaW) + count(SpaceLabel::BetaNw); }
  const MachState& state(std::size_t i) const { return i == 0 ? initial : trace[i - 1].state; }
  std::uint64_t size_at(std::size_t i) const { return i == 0 ? initial_size : trace[i - 1].size; }
  const MachState& final_state() const { return state(trace.size()); }
};

/// Runs at most `fuel` transitions. With `check_invariant`, every reached
/// state is checked with check_env_domain_invariant and a violation throws.
SpaceRun skam_run(MachState s, std::size_t fuel, bool check_invariant = false);

}  // namespace spacekam

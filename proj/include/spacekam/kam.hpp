#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "spacekam/machine.hpp"

namespace spacekam {

enum class KamLabel { Sea, Beta, Sub };
inline constexpr std::array<KamLabel, 3> kAllKamLabels{KamLabel::Sea, KamLabel::Beta,
                                                       KamLabel::Sub};

std::string_view to_string(KamLabel l);

struct KamStep {
  KamLabel label;
  MachState state;  // target of the transition
};

/// (t, e, e) for closed t; throws OpenTerm otherwise.
MachState compile(const TermPtr& t);

/// The unique KAM transition, or nullopt on final states. Throws StuckState
/// when the code is a variable without a binding.
std::optional<KamStep> kam_step(const MachState& s);

struct Run {
  MachState initial;
  std::vector<KamStep> trace;
  bool final_reached = false;

  std::size_t transitions() const { return trace.size(); }
  std::size_t count(KamLabel l) const;
  const MachState& final_state() const { return trace.empty() ? initial : trace.back().state; }
  /// State i of the run, 0 being the initial one.
  const MachState& state(std::size_t i) const { return i == 0 ? initial : trace[i - 1].state; }
};

Run kam_run(MachState s, std::size_t fuel);

}  // namespace spacekam

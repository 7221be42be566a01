#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ophis {

/// Switching history carried by a node (or by the closed loop between
/// re-plans). `run_length` counts consecutive steps of `last_mode` at the
/// end of the history; `ever_switched` records whether any switch happened
/// since the start of the episode. The initial mode is free: the dwell
/// clock only starts binding after the first actual switch.
struct DwellState {
  std::optional<int> last_mode{};
  int run_length{0};
  bool ever_switched{false};

  bool operator==(const DwellState&) const = default;
};

/// A history forbids switching iff some switch already happened and the
/// current run has not yet reached the minimum dwell.
inline bool dwell_constrained(const DwellState& s, int min_dwell) {
  if (min_dwell < 1) throw std::invalid_argument("min dwell must be >= 1");
  return s.ever_switched && s.run_length < min_dwell;
}

/// Modes admissible for the next step, ascending. `max_mode` is the largest
/// mode index (modes are 0..max_mode).
inline std::vector<int> eligible_modes(const DwellState& s, int min_dwell, int max_mode) {
  if (max_mode < 0) throw std::invalid_argument("max mode must be >= 0");
  if (dwell_constrained(s, min_dwell)) return {*s.last_mode};
  std::vector<int> out(static_cast<std::size_t>(max_mode) + 1);
  for (int d = 0; d <= max_mode; ++d) out[static_cast<std::size_t>(d)] = d;
  return out;
}

/// History after committing one more step with mode `mode`. Callers are
/// responsible for only appending eligible modes.
inline DwellState dwell_after_append(const DwellState& s, int mode) {
  if (mode < 0) throw std::invalid_argument("mode must be >= 0");
  DwellState next = s;
  if (!s.last_mode.has_value()) {
    next.last_mode = mode;
    next.run_length = 1;
    return next;
  }
  if (*s.last_mode == mode) {
    next.run_length = s.run_length + 1;
    return next;
  }
  next.last_mode = mode;
  next.run_length = 1;
  next.ever_switched = true;
  return next;
}

/// Standalone check that a full mode sequence respects the minimum dwell,
/// given the switching history that precedes it. Scans for switch positions
/// and verifies every completed run between switches reaches `min_dwell`.
inline bool is_dwell_valid(std::span<const int> modes, int min_dwell,
                           const DwellState& initial = {}) {
  if (min_dwell < 1) throw std::invalid_argument("min dwell must be >= 1");
  std::optional<int> prev = initial.last_mode;
  int run = initial.run_length;
  bool switched = initial.ever_switched;
  for (int mode : modes) {
    if (mode < 0) return false;
    if (prev.has_value() && mode != *prev) {
      if (switched && run < min_dwell) return false;
      switched = true;
      run = 1;
    } else {
      run += 1;
    }
    prev = mode;
  }
  return true;
}

}  // namespace ophis

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pathint/paths.hpp"

namespace pathint {

// Per-index values of the variation functionals on the path's own grid.
struct VariationRunning {
  std::vector<double> tv;
  std::vector<double> utv_c;
  std::vector<double> dtv_c;
  std::vector<double> tv_c;
};

struct VariationReport {
  double c = 0.0;
  double tv = 0.0;
  double utv_c = 0.0;
  double dtv_c = 0.0;
  double tv_c = 0.0;
  std::optional<VariationRunning> running;
};

// Sum of |values[i] - values[i-1]|.
double total_variation(const StepPath& path);

/// Upward, downward and total truncated variation at level c.
///
/// One pass over the path. Once the range of the path first exceeds c the
/// path is split into alternating up and down legs, a leg ending when the
/// path retreats from the leg's extremum by more than c. Each closed leg
/// contributes (leg range - c); the open leg contributes max(range - c, 0).
/// Up legs sum to UTV^c, down legs to DTV^c.
///
/// Throws NegativeC.
VariationReport truncated_variation(const StepPath& path, double c, bool with_running = false);

struct BruteVariation {
  double utv_c = 0.0;
  double dtv_c = 0.0;
  double tv_c = 0.0;
};

inline constexpr std::size_t kBruteMaxLength = 2000;

// O(n^2) dynamic program over index subsequences, straight from the
// supremum-over-partitions definition. Reference oracle for
// truncated_variation. Throws NegativeC, PathTooLong (> kBruteMaxLength).
BruteVariation brute_tv_c(const StepPath& path, double c);

}  // namespace pathint

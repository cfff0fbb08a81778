#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "pathint/paths.hpp"

namespace pathint {

enum class Direction { none, up, down };
enum class PhaseKind { up_phase, down_phase };

struct Epoch {
  PhaseKind kind = PhaseKind::up_phase;
  std::size_t start_index = 0;
  std::size_t end_index = 0;  // inclusive
  // Running max over the phase (up) or running min (down), one entry per index.
  std::vector<double> extremum_trace;
};

// Alternating drawup/drawdown stopping times of width 2c.
struct Ladder {
  Direction initial_direction = Direction::none;
  std::vector<Epoch> epochs;
  double width = 0.0;  // 2c
};

/// Stopping-time ladder of width 2c.
///
/// The first trigger is the earliest index where the running max exceeds
/// X_0 + c (up) or the running min falls below X_0 - c (down). An up phase
/// ends at the first index where its running max exceeds the current value
/// by more than 2c, a down phase symmetrically. All comparisons are strict,
/// so a path that only touches a threshold never triggers. If both first
/// triggers fire at one index (impossible for step paths, kept for
/// completeness) the larger exceedance wins, ties going up.
///
/// Throws NonPositiveC.
Ladder build_ladder(const StepPath& path, double c);

enum class Method { skorohod, tvmin };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view name);  // throws InvalidConfig

// X^c together with its provenance. `path` shares the base grid.
struct TruncatedPath {
  StepPath base;
  double c = 0.0;
  Method method = Method::skorohod;
  StepPath path;
};

// X^c = X_0 before the first trigger, running phase max - c in up phases,
// running phase min + c in down phases. Single O(n) pass.
TruncatedPath truncate_skorohod(const StepPath& path, double c);

// X^c = X_0 + UTV^c(X, .) - DTV^c(X, .): the increments-within-c path of
// least total variation; TV(X^c) = TV^c(X).
TruncatedPath truncate_tvmin(const StepPath& path, double c);

TruncatedPath truncate(const StepPath& path, double c, Method method);

struct ConditionReport {
  double k_measured = 0.0;  // sup |X - X^c| / c
  double l_measured = 0.0;  // max |dX^c| / |dX| over nonzero dX
  bool tv_finite = true;
  bool cadlag_ok = true;
  bool adapted_ok = true;   // prefix causality
};

// Measures the sup-distance constant K, the jump-domination constant L,
// finiteness, cadlag structure and adaptedness. Adaptedness is checked as
// prefix causality: rebuilding X^c from every `prefix_stride`-th prefix of
// the base must reproduce the corresponding prefix of X^c (the final prefix
// is always checked). Throws GridMismatch.
ConditionReport verify_conditions(const StepPath& base, const TruncatedPath& trunc,
                                  std::size_t prefix_stride = 1);

struct Atom {
  std::size_t index = 0;
  double mass = 0.0;  // > 0
};

// Two-sided Skorohod decomposition of X on [-c, c] with X^c = X - phi.
struct SkorohodDecomposition {
  StepPath phi;                  // X - X^c
  std::vector<Atom> eta_l_atoms; // decreases of X^c; carried by {phi = -c}
  std::vector<Atom> eta_u_atoms; // increases of X^c; carried by {phi = +c}
};

// Carrier tolerance: 1e-9 * max(1, sup|X|).
double carrier_tolerance(const StepPath& base);

// Throws MethodMismatch (tvmin input), GridMismatch, PhiOutOfRange,
// CarrierViolation (with the first offending index).
SkorohodDecomposition verify_skorohod(const StepPath& base, const TruncatedPath& trunc);

}  // namespace pathint

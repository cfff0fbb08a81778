#pragma once

#include <cstddef>
#include <vector>

#include "pathint/paths.hpp"

namespace pathint {

// Running value of a pathwise integral on the merged grid of its inputs.
struct IntegralPath {
  Grid grid;
  std::vector<double> running;
  double endpoint = 0.0;

  // Value at time t: running at the last grid time <= t, 0 before the grid.
  double at(double t) const;
};

// Paths on different grids are evaluated on the merged grid with
// last-value carry-forward; before its origin a path holds its initial value.

// sum_{0<s<=t} Y_{s-} dX_s
IntegralPath stieltjes_left(const StepPath& integrand, const StepPath& integrator);

// sum_{0<s<=t} Y_s dX_s
IntegralPath stieltjes_current(const StepPath& integrand, const StepPath& integrator);

// Stopping times of the integrand: tau_0 = 0, tau_i = first grid time after
// tau_{i-1} with |Y - Y_{tau_{i-1}}| >= threshold (non-strict).
struct BichtelerLadder {
  double threshold = 0.0;
  std::vector<std::size_t> tau_indices;  // into the integrand's grid
};

BichtelerLadder bichteler_ladder(const StepPath& integrand, double threshold);

// Y_0 X_0 + sum_i Y_{tau_{i-1} ^ t} (X_{tau_i ^ t} - X_{tau_{i-1} ^ t}).
// Throws NonPositiveThreshold, TimeBeforeOrigin.
double bichteler(const StepPath& integrand, const StepPath& integrator, double threshold,
                 double t);

// The same sum evaluated at every merged grid time, in one pass.
IntegralPath bichteler_path(const StepPath& integrand, const StepPath& integrator,
                            double threshold);

// [X, Y]_t = sum_{0<s<=t} dX_s dY_s
double quadratic_covariation(const StepPath& x, const StepPath& y, double t);
IntegralPath quadratic_covariation_path(const StepPath& x, const StepPath& y);

/// Limit of the integrals of Y_- against X^c as c -> 0:
///   int_0^t Y_- dX + [X^cont, Y^cont]_t.
/// The continuous-part covariation is proxied by the covariation over grid
/// times that neither path marks as a macroscopic jump.
///
/// Throws InconsistentMarks when a path marks a time at which it does not
/// jump.
double corrected_target(const StepPath& x, const StepPath& y, double t);
IntegralPath corrected_target_path(const StepPath& x, const StepPath& y);

// sup over the union grid of |a - b|.
double sup_distance(const IntegralPath& a, const IntegralPath& b);

}  // namespace pathint

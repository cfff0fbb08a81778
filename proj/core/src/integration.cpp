#include "pathint/integration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pathint/error.hpp"

namespace pathint {

namespace {

struct Aligned {
  Grid grid;
  StepPath first;
  StepPath second;
};

Aligned align(const StepPath& a, const StepPath& b) {
  Grid grid = merge_grids(a.grid(), b.grid());
  return {grid, a.resampled(grid), b.resampled(grid)};
}

IntegralPath finish(Grid grid, std::vector<double> running) {
  const double end = running.back();
  return IntegralPath{std::move(grid), std::move(running), end};
}

void check_marks(const StepPath& p, const char* name) {
  for (auto m : p.jump_marks()) {
    if (p.jump(m) == 0.0)
      throw Error(Errc::InconsistentMarks,
                  std::string(name) + " marks index " + std::to_string(m) + " without a jump", m);
  }
}

}  // namespace

double IntegralPath::at(double t) const {
  const auto& g = *grid;
  if (t < g.front()) return 0.0;
  auto it = std::upper_bound(g.begin(), g.end(), t);
  return running[static_cast<std::size_t>(it - g.begin()) - 1];
}

IntegralPath stieltjes_left(const StepPath& integrand, const StepPath& integrator) {
  auto a = align(integrand, integrator);
  auto y = a.first.values();
  auto x = a.second.values();
  std::vector<double> run(x.size());
  double acc = 0.0;
  run[0] = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    acc += y[i - 1] * (x[i] - x[i - 1]);
    run[i] = acc;
  }
  return finish(a.grid, std::move(run));
}

IntegralPath stieltjes_current(const StepPath& integrand, const StepPath& integrator) {
  auto a = align(integrand, integrator);
  auto y = a.first.values();
  auto x = a.second.values();
  std::vector<double> run(x.size());
  double acc = 0.0;
  run[0] = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    acc += y[i] * (x[i] - x[i - 1]);
    run[i] = acc;
  }
  return finish(a.grid, std::move(run));
}

BichtelerLadder bichteler_ladder(const StepPath& integrand, double threshold) {
  if (!(threshold > 0.0))
    throw Error(Errc::NonPositiveThreshold,
                "threshold must be positive, got " + std::to_string(threshold));
  BichtelerLadder ladder{threshold, {0}};
  auto y = integrand.values();
  double anchor = y[0];
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (std::abs(y[i] - anchor) >= threshold) {
      ladder.tau_indices.push_back(i);
      anchor = y[i];
    }
  }
  return ladder;
}

double bichteler(const StepPath& integrand, const StepPath& integrator, double threshold,
                 double t) {
  auto ladder = bichteler_ladder(integrand, threshold);
  auto times = integrand.times();
  auto yv = integrand.values();
  if (t < times[0])
    throw Error(Errc::TimeBeforeOrigin, "t precedes the integrand's origin");
  // Integrator evaluated on the integrand's clock; held at X_0 before its origin.
  auto x_at = [&](double s) {
    return s < integrator.origin() ? integrator.initial() : integrator.value_at(s);
  };
  const double t0 = times[0];
  double sum = yv[0] * x_at(t0);
  for (std::size_t i = 1; i < ladder.tau_indices.size(); ++i) {
    const double prev = times[ladder.tau_indices[i - 1]];
    if (prev > t) break;
    const double cur = std::min(times[ladder.tau_indices[i]], t);
    sum += yv[ladder.tau_indices[i - 1]] * (x_at(cur) - x_at(prev));
  }
  const std::size_t last = ladder.tau_indices.back();
  if (times[last] <= t) sum += yv[last] * (x_at(t) - x_at(times[last]));
  return sum;
}

IntegralPath bichteler_path(const StepPath& integrand, const StepPath& integrator,
                            double threshold) {
  auto ladder = bichteler_ladder(integrand, threshold);
  auto a = align(integrand, integrator);
  const auto& g = *a.grid;
  auto x = a.second.values();
  auto src_times = integrand.times();
  auto yv = integrand.values();

  std::vector<double> run(g.size());
  std::size_t k = 0;
  // Before the integrand's origin the sum is empty: Y_0 X_t.
  for (; g[k] < src_times[0]; ++k) run[k] = yv[0] * x[k];
  const double y0x0 = yv[0] * x[k];
  std::size_t next_tau = 1;  // position in ladder.tau_indices
  double anchor_y = yv[0];
  double anchor_x = x[k];
  double closed = 0.0;
  for (; k < g.size(); ++k) {
    if (next_tau < ladder.tau_indices.size() &&
        g[k] == src_times[ladder.tau_indices[next_tau]]) {
      closed += anchor_y * (x[k] - anchor_x);
      anchor_y = yv[ladder.tau_indices[next_tau]];
      anchor_x = x[k];
      ++next_tau;
    }
    run[k] = y0x0 + closed + anchor_y * (x[k] - anchor_x);
  }
  return finish(a.grid, std::move(run));
}

IntegralPath quadratic_covariation_path(const StepPath& x, const StepPath& y) {
  auto a = align(x, y);
  auto xv = a.first.values();
  auto yv = a.second.values();
  std::vector<double> run(xv.size());
  double acc = 0.0;
  run[0] = 0.0;
  for (std::size_t i = 1; i < xv.size(); ++i) {
    acc += (xv[i] - xv[i - 1]) * (yv[i] - yv[i - 1]);
    run[i] = acc;
  }
  return finish(a.grid, std::move(run));
}

double quadratic_covariation(const StepPath& x, const StepPath& y, double t) {
  return quadratic_covariation_path(x, y).at(t);
}

IntegralPath corrected_target_path(const StepPath& x, const StepPath& y) {
  check_marks(x, "X");
  check_marks(y, "Y");
  auto a = align(x, y);
  auto xv = a.first.values();
  auto yv = a.second.values();
  std::vector<double> run(xv.size());
  double ito = 0.0;
  double cont = 0.0;
  run[0] = 0.0;
  for (std::size_t i = 1; i < xv.size(); ++i) {
    const double dx = xv[i] - xv[i - 1];
    const double dy = yv[i] - yv[i - 1];
    ito += yv[i - 1] * dx;
    if (!a.first.is_marked(i) && !a.second.is_marked(i)) cont += dx * dy;
    run[i] = ito + cont;
  }
  return finish(a.grid, std::move(run));
}

double corrected_target(const StepPath& x, const StepPath& y, double t) {
  return corrected_target_path(x, y).at(t);
}

double sup_distance(const IntegralPath& a, const IntegralPath& b) {
  Grid grid = merge_grids(a.grid, b.grid);
  const auto& g = *grid;
  double sup = 0.0;
  std::size_t ia = 0, ib = 0;
  double va = 0.0, vb = 0.0;
  for (double t : g) {
    while (ia < a.grid->size() && (*a.grid)[ia] <= t) va = a.running[ia++];
    while (ib < b.grid->size() && (*b.grid)[ib] <= t) vb = b.running[ib++];
    sup = std::max(sup, std::abs(va - vb));
  }
  return sup;
}

}  // namespace pathint

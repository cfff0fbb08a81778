#include "pathint/variation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pathint/error.hpp"

namespace pathint {

double total_variation(const StepPath& path) {
  auto x = path.values();
  double tv = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) tv += std::abs(x[i] - x[i - 1]);
  return tv;
}

VariationReport truncated_variation(const StepPath& path, double c, bool with_running) {
  if (!(c >= 0.0)) throw Error(Errc::NegativeC, "c must be >= 0, got " + std::to_string(c));
  auto x = path.values();
  const std::size_t n = x.size();

  VariationReport report;
  report.c = c;
  VariationRunning running;
  if (with_running) {
    running.tv.resize(n);
    running.utv_c.resize(n);
    running.dtv_c.resize(n);
    running.tv_c.resize(n);
  }

  enum class Leg { none, up, down };
  Leg leg = Leg::none;
  double run_min = x[0];
  double run_max = x[0];
  double leg_start = 0.0;  // extremum where the open leg began
  double extremum = 0.0;   // running extremum of the open leg
  double closed_up = 0.0;
  double closed_down = 0.0;
  double tv = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    if (i > 0) tv += std::abs(xi - x[i - 1]);
    switch (leg) {
      case Leg::none:
        run_min = std::min(run_min, xi);
        run_max = std::max(run_max, xi);
        if (xi - run_min > c) {
          leg = Leg::up;
          leg_start = run_min;
          extremum = xi;
        } else if (run_max - xi > c) {
          leg = Leg::down;
          leg_start = run_max;
          extremum = xi;
        }
        break;
      case Leg::up:
        if (xi > extremum) {
          extremum = xi;
        } else if (extremum - xi > c) {
          closed_up += extremum - leg_start - c;
          leg = Leg::down;
          leg_start = extremum;
          extremum = xi;
        }
        break;
      case Leg::down:
        if (xi < extremum) {
          extremum = xi;
        } else if (xi - extremum > c) {
          closed_down += leg_start - extremum - c;
          leg = Leg::up;
          leg_start = extremum;
          extremum = xi;
        }
        break;
    }
    if (with_running) {
      double up = closed_up;
      double down = closed_down;
      if (leg == Leg::up) up += extremum - leg_start - c;
      if (leg == Leg::down) down += leg_start - extremum - c;
      running.tv[i] = tv;
      running.utv_c[i] = up;
      running.dtv_c[i] = down;
      running.tv_c[i] = up + down;
    }
  }

  double up = closed_up;
  double down = closed_down;
  if (leg == Leg::up) up += extremum - leg_start - c;
  if (leg == Leg::down) down += leg_start - extremum - c;
  report.tv = tv;
  report.utv_c = up;
  report.dtv_c = down;
  report.tv_c = up + down;
  if (with_running) report.running = std::move(running);
  return report;
}

BruteVariation brute_tv_c(const StepPath& path, double c) {
  if (!(c >= 0.0)) throw Error(Errc::NegativeC, "c must be >= 0, got " + std::to_string(c));
  if (path.size() > kBruteMaxLength)
    throw Error(Errc::PathTooLong, std::to_string(path.size()) + " points exceed oracle limit " +
                                       std::to_string(kBruteMaxLength));
  auto x = path.values();
  const std::size_t n = x.size();
  // best_*[k]: optimal partition sum over index subsequences ending at k.
  std::vector<double> best_up(n, 0.0), best_down(n, 0.0), best_tv(n, 0.0);
  BruteVariation out;
  for (std::size_t k = 1; k < n; ++k) {
    double up = 0.0, down = 0.0, tv = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      up = std::max(up, best_up[j] + std::max(x[k] - x[j] - c, 0.0));
      down = std::max(down, best_down[j] + std::max(x[j] - x[k] - c, 0.0));
      tv = std::max(tv, best_tv[j] + std::max(std::abs(x[k] - x[j]) - c, 0.0));
    }
    best_up[k] = up;
    best_down[k] = down;
    best_tv[k] = tv;
    out.utv_c = std::max(out.utv_c, up);
    out.dtv_c = std::max(out.dtv_c, down);
    out.tv_c = std::max(out.tv_c, tv);
  }
  return out;
}

}  // namespace pathint

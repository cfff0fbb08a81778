#pragma once

// Slow reference computations used only by the tests. Each one works from
// the definitions directly and shares no code with the library algorithms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "pathint/paths.hpp"

namespace pathint::oracle {

// X^c at every index, recomputed from scratch on each prefix by scanning the
// stopping-time definitions with explicit range maxima. O(n^3).
inline std::vector<double> skorohod_by_definition(const std::vector<double>& x, double c) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  auto range_max = [&](std::size_t a, std::size_t b) {
    return *std::max_element(x.begin() + static_cast<long>(a), x.begin() + static_cast<long>(b) + 1);
  };
  auto range_min = [&](std::size_t a, std::size_t b) {
    return *std::min_element(x.begin() + static_cast<long>(a), x.begin() + static_cast<long>(b) + 1);
  };
  for (std::size_t k = 0; k < n; ++k) {
    // First trigger on [0, k].
    std::size_t start = n;
    bool up = false;
    for (std::size_t i = 0; i <= k; ++i) {
      const double eu = range_max(0, i) - x[0] - c;
      const double ed = x[0] - range_min(0, i) - c;
      if (eu > 0.0 || ed > 0.0) {
        start = i;
        up = eu > 0.0 && (ed <= 0.0 || eu >= ed);
        break;
      }
    }
    if (start == n) {
      out[k] = x[0];
      continue;
    }
    // Alternate phases; each ends at the first index where the move away
    // from the phase extremum exceeds 2c.
    for (;;) {
      std::size_t end = n;
      for (std::size_t i = start + 1; i <= k; ++i) {
        const double move = up ? range_max(start, i) - x[i] : x[i] - range_min(start, i);
        if (move > 2.0 * c) {
          end = i;
          break;
        }
      }
      if (end == n) {
        out[k] = up ? range_max(start, k) - c : range_min(start, k) + c;
        break;
      }
      start = end;
      up = !up;
    }
  }
  return out;
}

struct PartitionVariation {
  double utv_c = 0.0;
  double dtv_c = 0.0;
  double tv_c = 0.0;
};

// Supremum over every subsequence of indices (a partition of the time axis)
// by enumeration. Exponential; keep n <= 16.
inline PartitionVariation partition_variation(const std::vector<double>& x, double c) {
  PartitionVariation best;
  const std::size_t n = x.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double u = 0.0, d = 0.0, t = 0.0;
    long prev = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1u)) continue;
      if (prev >= 0) {
        const double inc = x[i] - x[static_cast<std::size_t>(prev)];
        u += std::max(inc - c, 0.0);
        d += std::max(-inc - c, 0.0);
        t += std::max(std::abs(inc) - c, 0.0);
      }
      prev = static_cast<long>(i);
    }
    best.utv_c = std::max(best.utv_c, u);
    best.dtv_c = std::max(best.dtv_c, d);
    best.tv_c = std::max(best.tv_c, t);
  }
  return best;
}

// Smallest total variation of Y = X - phi over phi taking values on a grid of
// `resolution + 1` points in [0, c] (oscillation of X - Y at most c).
inline double grid_min_tv(const std::vector<double>& x, double c, std::size_t resolution) {
  const std::size_t g = resolution + 1;
  std::vector<double> phi(g);
  for (std::size_t j = 0; j < g; ++j) phi[j] = c * static_cast<double>(j) / static_cast<double>(resolution);
  std::vector<double> cost(g, 0.0), next(g);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double dx = x[i] - x[i - 1];
    for (std::size_t j = 0; j < g; ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t p = 0; p < g; ++p)
        best = std::min(best, cost[p] + std::abs(dx - (phi[j] - phi[p])));
      next[j] = best;
    }
    cost.swap(next);
  }
  return *std::min_element(cost.begin(), cost.end());
}

// sum over the union of both grids of Y(s-) (X(s) - X(s-)), evaluated point
// by point through value_at / left_limit.
inline double left_sum(const StepPath& y, const StepPath& x) {
  std::set<double> times(x.times().begin(), x.times().end());
  times.insert(y.times().begin(), y.times().end());
  auto val = [](const StepPath& p, double t) { return t < p.origin() ? p.initial() : p.value_at(t); };
  auto left = [](const StepPath& p, double t) { return t <= p.origin() ? p.initial() : p.left_limit(t); };
  double sum = 0.0;
  for (double t : times) sum += left(y, t) * (val(x, t) - left(x, t));
  return sum;
}

// Random real-valued path on an irregular grid, values uniform in [lo, hi].
inline StepPath uniform_path(std::mt19937_64& rng, std::size_t len, double lo = -10.0, double hi = 10.0) {
  std::uniform_real_distribution<double> val(lo, hi), gap(0.05, 1.0);
  std::vector<double> t(len), v(len);
  for (std::size_t i = 0; i < len; ++i) {
    t[i] = i == 0 ? 0.0 : t[i - 1] + gap(rng);
    v[i] = val(rng);
  }
  return StepPath::from_samples(std::move(t), std::move(v));
}

}  // namespace pathint::oracle

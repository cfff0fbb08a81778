#include "pathint/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pathint/error.hpp"
#include "pathint/variation.hpp"

namespace pathint {

namespace {

void require_positive_c(double c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw Error(Errc::NonPositiveC, "c must be positive, got " + std::to_string(c));
}

// Streaming form of the width-2c ladder. push() consumes one value and
// leaves the phase state for that index.
class LadderScan {
 public:
  LadderScan(double x0, double c) : x0_(x0), c_(c), run_max_(x0), run_min_(x0) {}

  void push(double x) {
    phase_started_ = false;
    switch (state_) {
      case Direction::none: {
        run_max_ = std::max(run_max_, x);
        run_min_ = std::min(run_min_, x);
        const double up_excess = run_max_ - x0_ - c_;
        const double down_excess = x0_ - run_min_ - c_;
        const bool up = up_excess > 0.0;
        const bool down = down_excess > 0.0;
        if (up && (!down || up_excess >= down_excess)) {
          start(Direction::up, run_max_);
        } else if (down) {
          start(Direction::down, run_min_);
        }
        break;
      }
      case Direction::up:
        extremum_ = std::max(extremum_, x);
        if (extremum_ - x > 2.0 * c_) start(Direction::down, x);
        break;
      case Direction::down:
        extremum_ = std::min(extremum_, x);
        if (x - extremum_ > 2.0 * c_) start(Direction::up, x);
        break;
    }
  }

  Direction state() const { return state_; }
  bool phase_started() const { return phase_started_; }
  double extremum() const { return extremum_; }

  double truncated_value() const {
    switch (state_) {
      case Direction::up: return extremum_ - c_;
      case Direction::down: return extremum_ + c_;
      case Direction::none: break;
    }
    return x0_;
  }

 private:
  void start(Direction d, double extremum) {
    state_ = d;
    extremum_ = extremum;
    phase_started_ = true;
  }

  double x0_;
  double c_;
  double run_max_;
  double run_min_;
  Direction state_ = Direction::none;
  double extremum_ = 0.0;
  bool phase_started_ = false;
};

void require_same_grid(const StepPath& base, const TruncatedPath& trunc) {
  if (!same_grid(base, trunc.path))
    throw Error(Errc::GridMismatch, "truncated path is not on the base grid");
}

}  // namespace

Ladder build_ladder(const StepPath& path, double c) {
  require_positive_c(c);
  Ladder ladder;
  ladder.width = 2.0 * c;
  auto x = path.values();
  LadderScan scan(x[0], c);
  for (std::size_t i = 0; i < x.size(); ++i) {
    scan.push(x[i]);
    if (scan.state() == Direction::none) continue;
    if (scan.phase_started()) {
      if (ladder.epochs.empty()) ladder.initial_direction = scan.state();
      if (!ladder.epochs.empty()) ladder.epochs.back().end_index = i - 1;
      Epoch e;
      e.kind = scan.state() == Direction::up ? PhaseKind::up_phase : PhaseKind::down_phase;
      e.start_index = i;
      ladder.epochs.push_back(std::move(e));
    }
    ladder.epochs.back().extremum_trace.push_back(scan.extremum());
  }
  if (!ladder.epochs.empty()) ladder.epochs.back().end_index = x.size() - 1;
  return ladder;
}

std::string_view to_string(Method m) noexcept {
  return m == Method::skorohod ? "skorohod" : "tvmin";
}

Method parse_method(std::string_view name) {
  if (name == "skorohod") return Method::skorohod;
  if (name == "tvmin") return Method::tvmin;
  throw Error(Errc::InvalidConfig, "unknown method '" + std::string(name) + "'");
}

TruncatedPath truncate_skorohod(const StepPath& path, double c) {
  require_positive_c(c);
  auto x = path.values();
  std::vector<double> out(x.size());
  LadderScan scan(x[0], c);
  for (std::size_t i = 0; i < x.size(); ++i) {
    scan.push(x[i]);
    out[i] = scan.truncated_value();
  }
  return TruncatedPath{path, c, Method::skorohod, StepPath::on_grid(path.grid(), std::move(out))};
}

TruncatedPath truncate_tvmin(const StepPath& path, double c) {
  require_positive_c(c);
  auto report = truncated_variation(path, c, true);
  const auto& r = *report.running;
  const double x0 = path.initial();
  std::vector<double> out(path.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x0 + r.utv_c[i] - r.dtv_c[i];
  return TruncatedPath{path, c, Method::tvmin, StepPath::on_grid(path.grid(), std::move(out))};
}

TruncatedPath truncate(const StepPath& path, double c, Method method) {
  return method == Method::skorohod ? truncate_skorohod(path, c) : truncate_tvmin(path, c);
}

ConditionReport verify_conditions(const StepPath& base, const TruncatedPath& trunc,
                                  std::size_t prefix_stride) {
  require_same_grid(base, trunc);
  auto x = base.values();
  auto xc = trunc.path.values();
  ConditionReport report;

  double dev = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dev = std::max(dev, std::abs(x[i] - xc[i]));
  report.k_measured = dev / trunc.c;

  for (std::size_t i = 1; i < x.size(); ++i) {
    const double dx = std::abs(x[i] - x[i - 1]);
    const double dxc = std::abs(xc[i] - xc[i - 1]);
    if (dx > 0.0) {
      report.l_measured = std::max(report.l_measured, dxc / dx);
    } else if (dxc > 0.0) {
      report.l_measured = std::numeric_limits<double>::infinity();
    }
  }

  double tv = 0.0;
  bool finite = true;
  for (std::size_t i = 0; i < xc.size(); ++i) {
    finite = finite && std::isfinite(xc[i]);
    if (i > 0) tv += std::abs(xc[i] - xc[i - 1]);
  }
  report.tv_finite = std::isfinite(tv);
  report.cadlag_ok = finite;

  const std::size_t stride = std::max<std::size_t>(prefix_stride, 1);
  for (std::size_t n = 1; n <= x.size() && report.adapted_ok; n += stride) {
    const auto rebuilt = truncate(base.prefix(n), trunc.c, trunc.method);
    auto v = rebuilt.path.values();
    report.adapted_ok = std::equal(v.begin(), v.end(), xc.begin());
  }
  if (report.adapted_ok && (x.size() - 1) % stride != 0) {
    const auto rebuilt = truncate(base, trunc.c, trunc.method);
    auto v = rebuilt.path.values();
    report.adapted_ok = std::equal(v.begin(), v.end(), xc.begin());
  }
  return report;
}

double carrier_tolerance(const StepPath& base) { return 1e-9 * std::max(1.0, base.sup_abs()); }

SkorohodDecomposition verify_skorohod(const StepPath& base, const TruncatedPath& trunc) {
  if (trunc.method != Method::skorohod)
    throw Error(Errc::MethodMismatch, "Skorohod decomposition needs the skorohod construction");
  require_same_grid(base, trunc);
  auto x = base.values();
  auto xc = trunc.path.values();
  const double c = trunc.c;
  const double tol = carrier_tolerance(base);

  std::vector<double> phi(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    phi[i] = x[i] - xc[i];
    if (!(std::abs(phi[i]) <= c + tol))
      throw Error(Errc::PhiOutOfRange,
                  "phi=" + std::to_string(phi[i]) + " outside [-c, c] at index " + std::to_string(i),
                  i);
  }

  SkorohodDecomposition out{StepPath::on_grid(base.grid(), std::move(phi)), {}, {}};
  auto p = out.phi.values();
  for (std::size_t i = 1; i < xc.size(); ++i) {
    const double d = xc[i] - xc[i - 1];
    if (d > 0.0) {
      if (!(std::abs(p[i] - c) <= tol))
        throw Error(Errc::CarrierViolation,
                    "increase of X^c at index " + std::to_string(i) + " where phi != c", i);
      out.eta_u_atoms.push_back({i, d});
    } else if (d < 0.0) {
      if (!(std::abs(p[i] + c) <= tol))
        throw Error(Errc::CarrierViolation,
                    "decrease of X^c at index " + std::to_string(i) + " where phi != -c", i);
      out.eta_l_atoms.push_back({i, -d});
    }
  }
  return out;
}

}  // namespace pathint

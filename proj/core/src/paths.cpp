#include "pathint/paths.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "pathint/error.hpp"

namespace pathint {

namespace {

using Values = std::vector<double>;
using Marks = std::vector<std::size_t>;

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw Error(Errc::EmptyPath, "path has no samples");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]))
      throw Error(Errc::NonMonotoneTimes, "non-finite time", i);
    if (i > 0 && !(times[i] > times[i - 1]))
      throw Error(Errc::NonMonotoneTimes,
                  "times must be strictly increasing at index " + std::to_string(i), i);
  }
}

Marks normalize_marks(Marks marks, std::size_t size) {
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  for (auto m : marks) {
    if (m == 0 || m >= size)
      throw Error(Errc::InvalidJumpMark,
                  "jump mark " + std::to_string(m) + " outside [1, " +
                      std::to_string(size - 1) + "]",
                  m);
  }
  return marks;
}

}  // namespace

Grid make_grid(std::vector<double> times) {
  check_times(times);
  return std::make_shared<const std::vector<double>>(std::move(times));
}

Grid uniform_grid(std::size_t steps, double horizon) {
  std::vector<double> t(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i)
    t[i] = static_cast<double>(i) * horizon / static_cast<double>(steps);
  return make_grid(std::move(t));
}

StepPath StepPath::from_samples(std::vector<double> times, std::vector<double> values,
                                std::vector<std::size_t> jump_marks) {
  if (times.empty() && values.empty()) throw Error(Errc::EmptyPath, "path has no samples");
  if (times.size() != values.size())
    throw Error(Errc::LengthMismatch, std::to_string(times.size()) + " times vs " +
                                          std::to_string(values.size()) + " values");
  return on_grid(make_grid(std::move(times)), std::move(values), std::move(jump_marks));
}

StepPath StepPath::on_grid(Grid grid, std::vector<double> values,
                           std::vector<std::size_t> jump_marks) {
  if (!grid || grid->empty()) throw Error(Errc::EmptyPath, "path has no samples");
  if (grid->size() != values.size())
    throw Error(Errc::LengthMismatch, std::to_string(grid->size()) + " times vs " +
                                          std::to_string(values.size()) + " values");
  auto marks = normalize_marks(std::move(jump_marks), values.size());
  return StepPath(std::move(grid), std::make_shared<const Values>(std::move(values)),
                  std::make_shared<const Marks>(std::move(marks)));
}

StepPath StepPath::constant(double value, double origin) {
  return from_samples({origin}, {value});
}

bool StepPath::is_marked(std::size_t index) const noexcept {
  return std::binary_search(marks_->begin(), marks_->end(), index);
}

std::size_t StepPath::index_at(double t) const {
  const auto& g = *grid_;
  if (t < g.front())
    throw Error(Errc::TimeBeforeOrigin,
                "t=" + std::to_string(t) + " precedes origin " + std::to_string(g.front()));
  auto it = std::upper_bound(g.begin(), g.end(), t);
  return static_cast<std::size_t>(it - g.begin()) - 1;
}

double StepPath::value_at(double t) const { return (*values_)[index_at(t)]; }

double StepPath::left_limit(double t) const {
  const auto& g = *grid_;
  if (t < g.front())
    throw Error(Errc::TimeBeforeOrigin,
                "t=" + std::to_string(t) + " precedes origin " + std::to_string(g.front()));
  // Last grid time strictly below t; X_{0-} := X_0.
  auto it = std::lower_bound(g.begin(), g.end(), t);
  if (it == g.begin()) return values_->front();
  return (*values_)[static_cast<std::size_t>(it - g.begin()) - 1];
}

StepPath StepPath::prefix(std::size_t n) const {
  if (n == 0 || n > size()) throw Error(Errc::LengthMismatch, "prefix length out of range");
  if (n == size()) return *this;
  Marks marks;
  for (auto m : *marks_)
    if (m < n) marks.push_back(m);
  return StepPath(std::make_shared<const Values>(grid_->begin(), grid_->begin() + n),
                  std::make_shared<const Values>(values_->begin(), values_->begin() + n),
                  std::make_shared<const Marks>(std::move(marks)));
}

StepPath StepPath::negated() const {
  Values v(values_->size());
  std::transform(values_->begin(), values_->end(), v.begin(), [](double x) { return -x; });
  return StepPath(grid_, std::make_shared<const Values>(std::move(v)), marks_);
}

StepPath StepPath::resampled(const Grid& finer) const {
  if (same_grid(grid_, finer)) return *this;
  const auto& src = *grid_;
  const auto& dst = *finer;
  Values v(dst.size());
  Marks marks;
  std::size_t j = 0;  // next source index not yet reached
  double current = values_->front();
  for (std::size_t k = 0; k < dst.size(); ++k) {
    if (j < src.size() && src[j] <= dst[k]) {
      if (src[j] != dst[k])
        throw Error(Errc::GridMismatch, "target grid does not contain source time");
      current = (*values_)[j];
      if (is_marked(j)) marks.push_back(k);
      ++j;
    }
    v[k] = current;
  }
  if (j != src.size()) throw Error(Errc::GridMismatch, "target grid does not contain source grid");
  return StepPath(finer, std::make_shared<const Values>(std::move(v)),
                  std::make_shared<const Marks>(std::move(marks)));
}

double StepPath::sup_abs() const noexcept {
  double s = 0.0;
  for (double x : *values_) s = std::max(s, std::abs(x));
  return s;
}

double StepPath::min_value() const noexcept {
  return *std::min_element(values_->begin(), values_->end());
}

double StepPath::max_value() const noexcept {
  return *std::max_element(values_->begin(), values_->end());
}

bool operator==(const StepPath& a, const StepPath& b) {
  return same_grid(a, b) && *a.values_ == *b.values_ && *a.marks_ == *b.marks_;
}

bool same_grid(const Grid& a, const Grid& b) noexcept {
  return a == b || *a == *b;
}

bool same_grid(const StepPath& a, const StepPath& b) noexcept {
  return same_grid(a.grid(), b.grid());
}

Grid merge_grids(const Grid& a, const Grid& b) {
  if (same_grid(a, b)) return a;
  std::vector<double> merged;
  merged.reserve(a->size() + b->size());
  std::set_union(a->begin(), a->end(), b->begin(), b->end(), std::back_inserter(merged));
  if (merged.size() == a->size()) return a;
  if (merged.size() == b->size()) return b;
  return std::make_shared<const std::vector<double>>(std::move(merged));
}

StepPath combine(double a, const StepPath& x, double b, const StepPath& y) {
  Grid grid = merge_grids(x.grid(), y.grid());
  StepPath xs = x.resampled(grid);
  StepPath ys = y.resampled(grid);
  Values v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * xs.values()[i] + b * ys.values()[i];
  Marks marks(xs.jump_marks().begin(), xs.jump_marks().end());
  marks.insert(marks.end(), ys.jump_marks().begin(), ys.jump_marks().end());
  return StepPath::on_grid(std::move(grid), std::move(v), std::move(marks));
}

StepPath gen_path(const PathGenSpec& spec) {
  if (spec.kind == PathKind::explicit_samples)
    throw Error(Errc::InvalidSpec, "explicit paths are read from samples, not generated");
  if (spec.steps < 1) throw Error(Errc::InvalidSpec, "steps must be >= 1");
  if (!(spec.horizon > 0.0) || !std::isfinite(spec.horizon))
    throw Error(Errc::InvalidSpec, "horizon must be positive");
  if (!(spec.sigma >= 0.0) || !(spec.jump_rate >= 0.0) || !(spec.jump_sigma >= 0.0) ||
      !std::isfinite(spec.sigma) || !std::isfinite(spec.jump_rate) ||
      !std::isfinite(spec.jump_sigma) || !std::isfinite(spec.drift))
    throw Error(Errc::InvalidSpec, "sigma, jump_rate and jump_sigma must be finite and >= 0");

  const double dt = spec.horizon / static_cast<double>(spec.steps);
  const double sd = spec.sigma * std::sqrt(dt);
  const double mu = spec.drift * dt;

  std::mt19937_64 diffusion(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Values v(spec.steps + 1);
  Marks marks;
  v[0] = 0.0;

  if (spec.kind == PathKind::jump_diffusion && spec.jump_rate > 0.0) {
    std::mt19937_64 jumps(spec.seed ^ 0x9e3779b97f4a7c15ULL);
    std::poisson_distribution<int> arrivals(spec.jump_rate * dt);
    std::normal_distribution<double> jump_size(0.0, spec.jump_sigma);
    for (std::size_t i = 1; i <= spec.steps; ++i) {
      double inc = mu + sd * normal(diffusion);
      const int n = arrivals(jumps);
      double jump = 0.0;
      for (int k = 0; k < n; ++k) jump += jump_size(jumps);
      v[i] = v[i - 1] + (inc + jump);
      if (n > 0 && v[i] != v[i - 1]) marks.push_back(i);
    }
  } else {
    for (std::size_t i = 1; i <= spec.steps; ++i) v[i] = v[i - 1] + (mu + sd * normal(diffusion));
  }
  return StepPath::on_grid(uniform_grid(spec.steps, spec.horizon), std::move(v), std::move(marks));
}

}  // namespace pathint

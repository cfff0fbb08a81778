#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace pathint {

// Shared, immutable time grid. Paths built on the same grid share the
// allocation, so "same grid" is usually a pointer comparison.
using Grid = std::shared_ptr<const std::vector<double>>;

Grid make_grid(std::vector<double> times);
Grid uniform_grid(std::size_t steps, double horizon);

// Cadlag step function: X_t = values[i] for t in [times[i], times[i+1]),
// constant after the last time. X_{0-} := X_0.
//
// Instances are immutable handles; copying is cheap and safe across threads.
class StepPath {
 public:
  // Validates: non-empty, equal lengths, strictly increasing times, marks in
  // {1, ..., size-1}. Marks are sorted and deduplicated.
  static StepPath from_samples(std::vector<double> times,
                               std::vector<double> values,
                               std::vector<std::size_t> jump_marks = {});
  static StepPath on_grid(Grid grid, std::vector<double> values,
                          std::vector<std::size_t> jump_marks = {});
  static StepPath constant(double value, double origin = 0.0);

  std::size_t size() const noexcept { return values_->size(); }
  std::span<const double> times() const noexcept { return *grid_; }
  std::span<const double> values() const noexcept { return *values_; }
  std::span<const std::size_t> jump_marks() const noexcept { return *marks_; }
  const Grid& grid() const noexcept { return grid_; }

  double origin() const noexcept { return grid_->front(); }
  double horizon() const noexcept { return grid_->back(); }
  double initial() const noexcept { return values_->front(); }
  double terminal() const noexcept { return values_->back(); }
  bool is_marked(std::size_t index) const noexcept;

  // Index of the last grid time <= t. Throws TimeBeforeOrigin.
  std::size_t index_at(double t) const;
  double value_at(double t) const;
  double left_limit(double t) const;

  // Jump at grid index i (0 at i = 0).
  double jump(std::size_t i) const noexcept {
    return i == 0 ? 0.0 : (*values_)[i] - (*values_)[i - 1];
  }

  // First n grid points (1 <= n <= size()).
  StepPath prefix(std::size_t n) const;
  StepPath negated() const;
  // Same values carried forward onto a grid that contains this path's grid.
  // Grid points before origin() hold initial().
  StepPath resampled(const Grid& finer) const;

  double sup_abs() const noexcept;
  double min_value() const noexcept;
  double max_value() const noexcept;

  friend bool operator==(const StepPath& a, const StepPath& b);

 private:
  StepPath(Grid grid, std::shared_ptr<const std::vector<double>> values,
           std::shared_ptr<const std::vector<std::size_t>> marks)
      : grid_(std::move(grid)), values_(std::move(values)), marks_(std::move(marks)) {}

  Grid grid_;
  std::shared_ptr<const std::vector<double>> values_;
  std::shared_ptr<const std::vector<std::size_t>> marks_;
};

bool same_grid(const StepPath& a, const StepPath& b) noexcept;
bool same_grid(const Grid& a, const Grid& b) noexcept;

// Sorted union of two grids. Returns one of the inputs when it already
// contains the other.
Grid merge_grids(const Grid& a, const Grid& b);

// a*X + b*Y on the merged grid, last-value carry-forward, marks merged.
StepPath combine(double a, const StepPath& x, double b, const StepPath& y);

enum class PathKind { brownian, jump_diffusion, explicit_samples };

struct PathGenSpec {
  PathKind kind = PathKind::brownian;
  std::size_t steps = 1;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  double sigma = 1.0;
  double drift = 0.0;
  double jump_rate = 0.0;
  double jump_sigma = 0.0;
};

// Uniform grid times[i] = i*T/steps, X_0 = 0.
//
// Diffusive increments come from std::mt19937_64 seeded with `seed` and
// std::normal_distribution<double>. Jump arrivals use a second
// std::mt19937_64 seeded with `seed ^ 0x9e3779b97f4a7c15` feeding
// std::poisson_distribution and std::normal_distribution, so a zero jump
// rate reproduces the Brownian path bit for bit. Output is deterministic for
// a given build; it is not portable across standard libraries.
//
// Throws InvalidSpec.
StepPath gen_path(const PathGenSpec& spec);

}  // namespace pathint

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pathint/paths.hpp"
#include "pathint/truncation.hpp"

namespace pathint {

enum class ExperimentId {
  identity_suite,
  step_convergence,
  bm_convergence,
  as_convergence,
  tv_limit,
  cx_z,
  cx_y,
};

std::string_view to_string(ExperimentId id) noexcept;
// Accepts both "bm_convergence" and "run_bm_convergence". Throws InvalidConfig.
ExperimentId parse_experiment_id(std::string_view name);

// Closed-form (alpha(n), gamma(n)) pair for the non-semimartingale integrand
// Y = sum_n alpha(n) (B - B^{gamma(n)}).
struct Schedule {
  enum class Kind {
    geometric,   // gamma(n) = gamma_ratio^n
    beta_recursion,  // beta(1) = 1, beta(n) = n^2 beta(n-1)^6, gamma = 1/beta
  };
  Kind kind = Kind::geometric;
  double gamma_ratio = 0.25;
  double alpha_scale = 1.0;   // alpha(n) = alpha_scale * gamma(n)^alpha_power
  double alpha_power = -0.5;

  double gamma(int n) const;
  double alpha(int n) const;
  std::string label() const;
};

struct ExperimentConfig {
  ExperimentId id = ExperimentId::identity_suite;
  std::vector<std::uint64_t> seeds;
  std::size_t steps = 0;
  double horizon = 1.0;
  std::vector<double> c_grid;
  std::vector<int> n_range;
  std::optional<Schedule> schedule;
  Method method = Method::skorohod;
};

// Shipped configuration for each experiment.
ExperimentConfig default_config(ExperimentId id);

// JSON document with keys experiment, seeds, steps, horizon, c_grid,
// n_range, schedule, method. Missing keys fall back to default_config;
// unknown keys are rejected. Throws InvalidConfig.
ExperimentConfig parse_config(std::string_view json_text);
std::string config_to_json(const ExperimentConfig& config);

// Throws InvalidConfig.
void validate(const ExperimentConfig& config);

struct ReportRow {
  // Per-seed rows carry the seed; aggregate rows carry a label such as "median".
  std::string seed;
  double param = 0.0;
  std::string statistic;
  double value = 0.0;
  double target = 0.0;
  double abs_error = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;
  double wall_seconds = 0.0;

  // First row matching (seed, param, statistic).
  const ReportRow* find(std::string_view seed, double param, std::string_view statistic) const;
  std::vector<const ReportRow*> select(std::string_view statistic) const;
};

struct RunOptions {
  unsigned workers = 1;
};

// Hardware concurrency, capped by PATHINT_THREADS when that is a positive integer.
unsigned workers_from_env();

// Relative tolerance of every exact identity.
inline constexpr double kIdentityTolerance = 1e-9;

/// Exact invariant suite on random step paths. One row per (seed, c,
/// statistic), value = worst relative violation. Throws IdentityViolation
/// with a CSV dump of the offending path.
ExperimentReport run_identity_suite(const ExperimentConfig& config, RunOptions options = {});

/// Error of the integral against X^c versus the left Stieltjes integral on
/// random step paths, checked against c (|Y_0| + sup|Y| + 3 TV(Y)).
/// Throws BoundViolation.
ExperimentReport run_step_convergence(const ExperimentConfig& config, RunOptions options = {});

/// |int B_- dB^c - (B_1^2 + Q)/2| per (seed, c) plus medians over seeds.
ExperimentReport run_bm_convergence(const ExperimentConfig& config, RunOptions options = {});

/// sup_t deviation from the corrected target along c(n) = 1/n.
ExperimentReport run_as_convergence(const ExperimentConfig& config, RunOptions options = {});

/// c * TV^c(B, 1) per (seed, c), target 1.
ExperimentReport run_tv_limit(const ExperimentConfig& config, RunOptions options = {});

/// Divergent integrals of Z^{1/n} = 2B^{1/n^2} + n (B^{1/(2n^2)} - B^{1/n^2})
/// against B^{1/n^2}. Throws BoundViolation if the pathwise lower bound fails.
ExperimentReport run_cx_z(const ExperimentConfig& config, RunOptions options = {});

/// Integrals of the truncated series Y_n against B^{gamma(n)}, with the cross
/// and diagonal split. Throws IdentityViolation if the diagonal identity fails.
ExperimentReport run_cx_y(const ExperimentConfig& config, RunOptions options = {});

ExperimentReport run_experiment(const ExperimentConfig& config, RunOptions options = {});

// CSV `seed,param,statistic,value,target,abs_error` preceded by a `# `
// comment block echoing the config.
void write_report_csv(std::ostream& out, const ExperimentReport& report);

// Random step path for the exact suites: Brownian grids, jump diffusions,
// crafted real-valued paths on irregular grids, integer lattice paths (which
// hit thresholds exactly) and constants. At most max_points points.
StepPath sample_step_path(std::mt19937_64& rng, std::size_t max_points);

// sqrt(T/steps) <= c/10, with a 1e-9 relative allowance for rounding.
bool grid_adequate(double horizon, std::size_t steps, double c);

double median(std::vector<double> values);

}  // namespace pathint

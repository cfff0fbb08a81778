// Acceptance checks. Prints one PASS/FAIL line per criterion.
//
//   acceptance                 run all criteria
//   acceptance --criterion 5   run one (repeatable)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pathint/error.hpp"
#include "pathint/experiments.hpp"
#include "pathint/integration.hpp"
#include "pathint/variation.hpp"

using namespace pathint;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

RunOptions options() { return RunOptions{workers_from_env()}; }

double median_of(const ExperimentReport& r, const std::string& statistic, double param) {
  const auto* row = r.find("median", param, statistic);
  return row ? row->value : std::nan("");
}

Outcome identity_suite() {
  const auto report = run_identity_suite(default_config(ExperimentId::identity_suite), options());
  double worst = 0.0;
  for (const auto& r : report.rows) worst = std::max(worst, r.value);
  return {worst <= kIdentityTolerance,
          "1000 paths x c in {1, 0.2, 0.05}, worst relative violation " + fmt(worst)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240607);
  std::uniform_int_distribution<std::size_t> len(1, 60);
  const double cs[] = {0.0, 0.1, 0.5, 1.0, 3.0};
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const auto x = oracle::uniform_path(rng, len(rng));
    for (double c : cs) {
      const auto fast = truncated_variation(x, c);
      const auto brute = brute_tv_c(x, c);
      worst = std::max({worst, std::abs(fast.tv_c - brute.tv_c), std::abs(fast.utv_c - brute.utv_c),
                        std::abs(fast.dtv_c - brute.dtv_c)});
    }
  }
  return {worst <= 1e-12, "500 paths x 5 levels, max |fast - DP| = " + fmt(worst)};
}

Outcome step_bound() {
  const auto report = run_step_convergence(default_config(ExperimentId::step_convergence), options());
  std::size_t paths = 0, improved = 0;
  for (const auto seed : report.config.seeds) {
    const auto* fine = report.find(std::to_string(seed), 0.05, "error");
    const auto* coarse = report.find(std::to_string(seed), 0.4, "error");
    if (!fine || !coarse) continue;
    ++paths;
    if (fine->value < coarse->value) ++improved;
  }
  const double frac = paths ? static_cast<double>(improved) / static_cast<double>(paths) : 0.0;
  return {frac >= 0.95, "bound held on every cell; error(0.05) < error(0.4) on " +
                            std::to_string(improved) + "/" + std::to_string(paths) + " paths"};
}

Outcome bichteler_equivalence() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const auto y = sample_step_path(rng, 200);
    const auto x = sample_step_path(rng, 200);
    double min_jump = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < y.size(); ++i)
      if (y.jump(i) != 0.0) min_jump = std::min(min_jump, std::abs(y.jump(i)));
    const double threshold = std::isfinite(min_jump) ? 0.5 * min_jump : 1.0;

    const auto b = bichteler_path(y, x, threshold);
    const auto s = stieltjes_left(y, x);
    // Both sums start at the integrand's origin.
    const double y0x0 = y.initial() * (x.origin() <= y.origin() ? x.value_at(y.origin()) : x.initial());
    const double s0 = s.at(y.origin());
    double scale = 1.0;
    for (double v : s.running) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < b.running.size(); ++i) {
      const double t = (*b.grid)[i];
      if (t < y.origin()) continue;
      worst = std::max(worst, std::abs(b.running[i] - (y0x0 + s.running[i] - s0)) / scale);
    }
    const double endpoint = bichteler(y, x, threshold, b.grid->back());
    worst = std::max(worst, std::abs(endpoint - (y0x0 + s.endpoint - s0)) / scale);
  }
  return {worst <= 1e-12, "500 path pairs, max relative deviation " + fmt(worst)};
}

Outcome bm_correction() {
  const auto report = run_bm_convergence(default_config(ExperimentId::bm_convergence), options());
  const double fine = median_of(report, "median_abs_error", 0.02);
  const double coarse = median_of(report, "median_abs_error", 0.2);
  return {fine <= 0.05 && fine < coarse,
          "median D(0.02) = " + fmt(fine) + ", median D(0.2) = " + fmt(coarse)};
}

Outcome tv_limit() {
  const auto report = run_tv_limit(default_config(ExperimentId::tv_limit), options());
  const double m = median_of(report, "median_c_tv_c", 0.01);
  return {m >= 0.9 && m <= 1.1, "median c TV^c(B) at c = 0.01: " + fmt(m)};
}

Outcome as_trend() {
  const auto report = run_as_convergence(default_config(ExperimentId::as_convergence), options());
  int ok = 0;
  for (const auto* r : report.select("envelope_ok")) ok += r->value == 1.0;
  return {ok >= 8, "late envelope <= early envelope on " + std::to_string(ok) + "/10 seeds"};
}

Outcome cx_z() {
  const auto report = run_cx_z(default_config(ExperimentId::cx_z), options());
  std::string medians;
  bool increasing = true;
  double prev = -std::numeric_limits<double>::infinity();
  for (int n : report.config.n_range) {
    const double m = median_of(report, "median_I_n", n);
    medians += (medians.empty() ? "" : ", ") + fmt(m);
    increasing = increasing && m > prev;
    prev = m;
  }
  return {increasing, "lower bound held on every cell; median I_n = [" + medians + "]"};
}

Outcome cx_y() {
  const auto report = run_cx_y(default_config(ExperimentId::cx_y), options());
  std::string ratios;
  bool grows = true;
  for (const auto* r : report.select("growth_ratio")) {
    ratios += (ratios.empty() ? "" : ", ") + std::to_string(static_cast<int>(r->param - 1)) + "->" +
              std::to_string(static_cast<int>(r->param)) + ": " + fmt(r->value);
    if (r->param >= 5) grows = grows && r->value >= 1.5;
  }
  return {grows, "diagonal identity held on every cell; median J ratios [" + ratios + "]"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "identity suite", 30, identity_suite},
      {2, "TV^c oracle equivalence", 10, oracle_equivalence},
      {3, "step-path error bound", 30, step_bound},
      {4, "Bichteler equivalence", 10, bichteler_equivalence},
      {5, "Brownian correction term", 120, bm_correction},
      {6, "TV limit", 240, tv_limit},
      {7, "a.s. convergence trend", 300, as_trend},
      {8, "counterexample Z", 180, cx_z},
      {9, "counterexample Y (adapted schedule)", 360, cx_y},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end())
      continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, "threw: " + first_line(e.what())};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = out.pass && in_time;
    failures += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << out.detail
              << " (" << fmt(secs) << " s of " << fmt(c.budget_seconds) << " s"
              << (in_time ? "" : ", over budget") << ")" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}

#include "pathint_cli/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pathint/error.hpp"
#include "pathint/experiments.hpp"
#include "pathint/integration.hpp"
#include "pathint/path_csv.hpp"
#include "pathint/paths.hpp"
#include "pathint/truncation.hpp"
#include "pathint/variation.hpp"

namespace pathint::cli {

namespace {

struct Parser {
  CLI::App app{"Pathwise integration against truncated variation approximations", "pathint"};
  std::map<CLI::App*, Subcommand> subs;

  CLI::App* sub(const char* name, const char* help, Subcommand kind) {
    auto* s = app.add_subcommand(name, help);
    subs[s] = kind;
    return s;
  }

  Parser() {
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    auto* gen = sub("generate", "Generate a random path", Subcommand::generate);
    gen->add_option("--kind", "brownian | jump_diffusion")
        ->check(CLI::IsMember({"brownian", "jump_diffusion"}))
        ->default_str("brownian");
    gen->add_option("--steps", "Number of increments")->required()->check(CLI::PositiveNumber);
    gen->add_option("--horizon", "Time horizon T")->check(CLI::PositiveNumber);
    gen->add_option("--seed", "RNG seed")->check(CLI::NonNegativeNumber);
    gen->add_option("--sigma", "Diffusion coefficient")->check(CLI::Number);
    gen->add_option("--drift", "Drift")->check(CLI::Number);
    gen->add_option("--jump-rate", "Poisson jump intensity")->check(CLI::NonNegativeNumber);
    gen->add_option("--jump-sigma", "Jump size standard deviation")->check(CLI::NonNegativeNumber);
    gen->add_option("--out", "Output CSV (default stdout)");

    auto* tr = sub("truncate", "Truncated path X^c of a path CSV", Subcommand::truncate);
    tr->add_option("--c", "Truncation level, > 0")->required()->check(CLI::PositiveNumber);
    tr->add_option("--method", "skorohod | tvmin")->check(CLI::IsMember({"skorohod", "tvmin"}));
    tr->add_option("--in", "Input path CSV")->required();
    tr->add_option("--out", "Output CSV (default stdout)");

    auto* var = sub("variation", "Running TV, UTV^c, DTV^c, TV^c of a path CSV",
                    Subcommand::variation);
    var->add_option("--c", "Truncation level, >= 0")->required()->check(CLI::NonNegativeNumber);
    var->add_option("--in", "Input path CSV")->required();
    var->add_option("--out", "Output CSV (default stdout)");

    auto* in = sub("integrate", "Pathwise integral of two path CSVs", Subcommand::integrate);
    in->add_option("--integrand", "Integrand path CSV")->required();
    in->add_option("--integrator", "Integrator path CSV")->required();
    in->add_option("--convention", "left | current | bichteler")
        ->check(CLI::IsMember({"left", "current", "bichteler"}));
    in->add_option("--threshold", "Bichteler threshold, > 0")->check(CLI::PositiveNumber);
    in->add_option("--out", "Output CSV (default stdout)");

    auto* ex = sub("experiment", "Run an experiment", Subcommand::experiment);
    auto* cfg = ex->add_option("--config", "JSON config file");
    auto* def = ex->add_option("--default", "Shipped config for the named experiment");
    cfg->excludes(def);
    ex->add_option("--out", "Report CSV (default stdout)");
  }
};

double number(const Command& cmd, const std::string& key, double fallback) {
  auto it = cmd.flags.find(key);
  if (it == cmd.flags.end()) return fallback;
  return std::stod(it->second);
}

std::uint64_t unsigned_number(const Command& cmd, const std::string& key, std::uint64_t fallback) {
  auto it = cmd.flags.find(key);
  if (it == cmd.flags.end()) return fallback;
  std::uint64_t v = 0;
  const auto& s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw UsageError("--" + key + " must be a non-negative integer, got '" + s + "'");
  return v;
}

std::string text(const Command& cmd, const std::string& key, const std::string& fallback) {
  auto it = cmd.flags.find(key);
  return it == cmd.flags.end() ? fallback : it->second;
}

std::string read_file(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open '" + filename + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string do_generate(const Command& cmd) {
  PathGenSpec spec;
  spec.kind = text(cmd, "kind", "brownian") == "jump_diffusion" ? PathKind::jump_diffusion
                                                                 : PathKind::brownian;
  spec.steps = static_cast<std::size_t>(unsigned_number(cmd, "steps", 0));
  spec.horizon = number(cmd, "horizon", spec.horizon);
  spec.seed = unsigned_number(cmd, "seed", spec.seed);
  spec.sigma = number(cmd, "sigma", spec.sigma);
  spec.drift = number(cmd, "drift", spec.drift);
  spec.jump_rate = number(cmd, "jump-rate", spec.jump_rate);
  spec.jump_sigma = number(cmd, "jump-sigma", spec.jump_sigma);
  std::ostringstream os;
  write_path_csv(os, gen_path(spec),
                 {"kind=" + text(cmd, "kind", "brownian") + " steps=" + std::to_string(spec.steps) +
                  " seed=" + std::to_string(spec.seed)});
  return os.str();
}

std::string do_truncate(const Command& cmd) {
  const double c = number(cmd, "c", 0.0);
  const Method method = parse_method(text(cmd, "method", "skorohod"));
  const auto in = read_path_csv_file(text(cmd, "in", ""));
  const auto xc = truncate(in.path, c, method);
  std::ostringstream os;
  write_path_csv(os, xc.path,
                 {"method=" + std::string(to_string(method)) + " c=" + text(cmd, "c", "")});
  return os.str();
}

std::string do_variation(const Command& cmd) {
  const double c = number(cmd, "c", 0.0);
  const auto in = read_path_csv_file(text(cmd, "in", ""));
  const auto report = truncated_variation(in.path, c, true);
  const auto& r = *report.running;
  auto t = in.path.times();
  std::ostringstream os;
  os << "# c=" << format_number(c) << '\n' << "t,tv,utv_c,dtv_c,tv_c\n";
  for (std::size_t i = 0; i < t.size(); ++i)
    os << format_number(t[i]) << ',' << format_number(r.tv[i]) << ',' << format_number(r.utv_c[i])
       << ',' << format_number(r.dtv_c[i]) << ',' << format_number(r.tv_c[i]) << '\n';
  return os.str();
}

std::string do_integrate(const Command& cmd) {
  const auto y = read_path_csv_file(text(cmd, "integrand", "")).path;
  const auto x = read_path_csv_file(text(cmd, "integrator", "")).path;
  const std::string convention = text(cmd, "convention", "left");
  IntegralPath result;
  if (convention == "bichteler") {
    if (!cmd.has("threshold")) throw UsageError("--convention bichteler requires --threshold");
    result = bichteler_path(y, x, number(cmd, "threshold", 0.0));
  } else if (cmd.has("threshold")) {
    throw UsageError("--threshold only applies to --convention bichteler");
  } else if (convention == "current") {
    result = stieltjes_current(y, x);
  } else {
    result = stieltjes_left(y, x);
  }
  std::ostringstream os;
  os << "# convention=" << convention << '\n' << "t,value\n";
  for (std::size_t i = 0; i < result.running.size(); ++i)
    os << format_number((*result.grid)[i]) << ',' << format_number(result.running[i]) << '\n';
  return os.str();
}

std::string do_experiment(const Command& cmd) {
  ExperimentConfig cfg;
  if (cmd.has("config")) {
    cfg = parse_config(read_file(text(cmd, "config", "")));
  } else if (cmd.has("default")) {
    cfg = default_config(parse_experiment_id(text(cmd, "default", "")));
  } else {
    throw UsageError("experiment requires --config or --default");
  }
  const auto report = run_experiment(cfg, RunOptions{workers_from_env()});
  std::ostringstream os;
  write_report_csv(os, report);
  return os.str();
}

Command build_command(const Parser& p) {
  Command cmd;
  for (const auto& [app, kind] : p.subs) {
    if (!app->parsed()) continue;
    cmd.subcommand = kind;
    for (const auto* opt : app->get_options()) {
      if (opt->count() == 0 || opt->get_lnames().empty()) continue;
      if (opt->get_lnames().front() == "help") continue;
      cmd.flags[opt->get_lnames().front()] = opt->as<std::string>();
    }
  }
  return cmd;
}

}  // namespace

Command parse(const std::vector<std::string>& args) {
  Parser p;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    p.app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  return build_command(p);
}

int execute(const Command& cmd, std::ostream& out, std::ostream& err) {
  try {
    std::string output;
    switch (cmd.subcommand) {
      case Subcommand::generate: output = do_generate(cmd); break;
      case Subcommand::truncate: output = do_truncate(cmd); break;
      case Subcommand::variation: output = do_variation(cmd); break;
      case Subcommand::integrate: output = do_integrate(cmd); break;
      case Subcommand::experiment: output = do_experiment(cmd); break;
    }
    if (cmd.has("out")) {
      write_file_atomically(cmd.flags.at("out"), output);
    } else {
      out << output;
      out.flush();
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "pathint: " << e.what() << '\n';
    return is_violation(e.code()) ? kExitViolation : kExitUsage;
  } catch (const UsageError& e) {
    err << "pathint: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "pathint: " << e.what() << '\n';
    return kExitUsage;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Parser p;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    p.app.parse(reversed);
  } catch (const CLI::Success& e) {
    return p.app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "pathint: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }
  return execute(build_command(p), out, err);
}

}  // namespace pathint::cli

#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pathint::cli {

enum class Subcommand { generate, truncate, variation, integrate, experiment };

struct Command {
  Subcommand subcommand = Subcommand::generate;
  // Long flag name without dashes -> value as given on the command line.
  std::map<std::string, std::string> flags;

  bool has(const std::string& key) const { return flags.count(key) != 0; }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name. Throws UsageError.
Command parse(const std::vector<std::string>& args);

// Runs the command. Output goes to --out (written atomically) or to `out`;
// diagnostics go to `err`. Returns an exit code.
int execute(const Command& cmd, std::ostream& out, std::ostream& err);

// parse + execute; `--help` prints usage and returns 0.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pathint::cli

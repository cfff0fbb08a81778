#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pathint/paths.hpp"

namespace pathint {

// Path CSV: optional `# ...` comment lines, then header `t,x` or `t,x,jump`,
// one row per grid point. Numbers are written with 17 significant digits;
// the jump column is emitted only when the path carries marks.
struct PathCsv {
  StepPath path;
  std::vector<std::string> comments;  // without the leading "# "
};

// %.17g-style formatting; parses back to the identical double.
std::string format_number(double value);

void write_path_csv(std::ostream& out, const StepPath& path,
                    const std::vector<std::string>& comments = {});
PathCsv read_path_csv(std::istream& in);

PathCsv read_path_csv_file(const std::string& filename);

// Writes to `filename.tmp` and renames on success.
void write_file_atomically(const std::string& filename, const std::string& contents);

}  // namespace pathint

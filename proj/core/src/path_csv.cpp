#include "pathint/path_csv.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pathint/error.hpp"

namespace pathint {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

double parse_double(std::string_view field, std::size_t line_no) {
  field = trim(field);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw Error(Errc::ParseError,
                "line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error(Errc::IoError, "number formatting failed");
  return std::string(buf, ptr);
}

void write_path_csv(std::ostream& out, const StepPath& path,
                    const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  const bool with_jumps = !path.jump_marks().empty();
  out << (with_jumps ? "t,x,jump\n" : "t,x\n");
  auto t = path.times();
  auto x = path.values();
  auto marks = path.jump_marks();
  std::size_t next_mark = 0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    out << format_number(t[i]) << ',' << format_number(x[i]);
    if (with_jumps) {
      bool marked = next_mark < marks.size() && marks[next_mark] == i;
      if (marked) ++next_mark;
      out << (marked ? ",1" : ",0");
    }
    out << '\n';
  }
}

PathCsv read_path_csv(std::istream& in) {
  std::vector<std::string> comments;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<std::size_t> marks;
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  bool with_jumps = false;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(1);
      if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      comments.emplace_back(line);
      continue;
    }
    if (!have_header) {
      if (line == "t,x") {
        with_jumps = false;
      } else if (line == "t,x,jump") {
        with_jumps = true;
      } else {
        throw Error(Errc::ParseError, "expected header 't,x' or 't,x,jump', got '" +
                                          std::string(line) + "'");
      }
      have_header = true;
      continue;
    }
    auto fields = split(line);
    if (fields.size() != (with_jumps ? 3u : 2u))
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": wrong field count");
    times.push_back(parse_double(fields[0], line_no));
    values.push_back(parse_double(fields[1], line_no));
    if (with_jumps) {
      auto flag = trim(fields[2]);
      if (flag == "1") {
        marks.push_back(times.size() - 1);
      } else if (flag != "0") {
        throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": jump must be 0 or 1");
      }
    }
  }
  if (!have_header) throw Error(Errc::ParseError, "missing CSV header");
  if (!marks.empty() && marks.front() == 0)
    throw Error(Errc::InvalidJumpMark, "the first row cannot be a jump", 0);
  return PathCsv{StepPath::from_samples(std::move(times), std::move(values), std::move(marks)),
                 std::move(comments)};
}

PathCsv read_path_csv_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw Error(Errc::IoError, "cannot open '" + filename + "'");
  return read_path_csv(in);
}

void write_file_atomically(const std::string& filename, const std::string& contents) {
  const std::string tmp = filename + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write '" + tmp + "'");
    out << contents;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw Error(Errc::IoError, "write to '" + tmp + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, filename, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw Error(Errc::IoError, "cannot rename '" + tmp + "' to '" + filename + "': " + ec.message());
  }
}

}  // namespace pathint

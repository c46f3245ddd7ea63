#include "mde/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace mde::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view field, std::size_t line) {
  field = trim(field);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "line " + std::to_string(line) + ": cannot parse number '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof(buf), "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

void write_measure_csv(std::ostream& out, const DiscreteMeasure& mu) {
  out << "position,mass\n";
  for (const auto& a : mu.atoms()) {
    out << format_double(a.position) << ',' << format_double(a.mass) << '\n';
  }
}

void write_measure_csv(const std::filesystem::path& path, const DiscreteMeasure& mu) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot open " + path.string() + " for writing");
  write_measure_csv(out, mu);
}

DiscreteMeasure read_measure_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "position,mass") {
    throw Error(ErrorKind::kInvalidArgument, "measure csv must start with header 'position,mass'");
  }
  std::vector<Atom> atoms;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw Error(ErrorKind::kInvalidArgument, "line " + std::to_string(line_no) + ": expected 2 columns");
    }
    atoms.push_back({parse_double(row.substr(0, comma), line_no),
                     parse_double(row.substr(comma + 1), line_no)});
  }
  return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure read_measure_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kInvalidArgument, "cannot open " + path.string());
  return read_measure_csv(in);
}

}  // namespace mde::io

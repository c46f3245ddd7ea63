#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mde/measure.hpp"

namespace mde::io {

/// Shortest-safe round-trip text for a double: 17 significant digits.
std::string format_double(double value);

/// Snapshot format: header `position,mass`, one atom per row, ascending.
void write_measure_csv(std::ostream& out, const DiscreteMeasure& mu);
void write_measure_csv(const std::filesystem::path& path, const DiscreteMeasure& mu);

/// Throws kInvalidArgument on a malformed file (bad header, wrong column
/// count, unparsable numbers).
DiscreteMeasure read_measure_csv(std::istream& in);
DiscreteMeasure read_measure_csv(const std::filesystem::path& path);

}  // namespace mde::io

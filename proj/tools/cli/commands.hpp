#pragma once

#include <iosfwd>

#include "cli/config.hpp"

namespace mde::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalError = 3;

/// Runs one mode and writes its artifacts under cfg.output. Returns an exit
/// code; numerical and config errors are reported on `err`, never thrown.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line: `--config`, `--mode`, `--out`, `--seed`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mde::cli

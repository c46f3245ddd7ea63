#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "mde/measure.hpp"
#include "mde/pvf.hpp"
#include "mde/sir.hpp"

namespace mde::cli {

/// Invalid configuration. `field()` is the JSON path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Mode { kSimulate, kDistance, kConvergence, kValidate };

Mode parse_mode(const std::string& name);
std::string to_string(Mode mode);

struct SirModel {
  sir::EpidemicParams params;
  sir::EpidemicState initial;
};

struct MdeModel {
  DiscreteMeasure mu0 = DiscreteMeasure::dirac(0.0);
  PvfSpec pvf = PvfSpec::barycenter_split();
};

using Model = std::variant<MdeModel, SirModel>;

struct DistanceOptions {
  std::filesystem::path first;
  std::filesystem::path second;
  bool generalized = true;
  bool write_plan = true;
};

enum class Experiment { kSplitting, kSelfSimilar, kClassicalSir };

struct ConvergenceOptions {
  Experiment experiment = Experiment::kSplitting;
};

struct ValidateOptions {
  std::vector<std::string> checks{"splitting", "self_similar", "classical_sir", "gw_bruteforce"};
  int gw_pairs = 200;
  int gw_resolution = 200;
};

struct RunConfig {
  Mode mode = Mode::kSimulate;
  Model model;
  std::vector<std::int64_t> grids{100};
  double horizon = 1.0;
  std::filesystem::path output = "out";
  std::uint64_t seed = 1;
  std::size_t snapshot_stride = 1;
  DistanceOptions distance;
  ConvergenceOptions convergence;
  ValidateOptions validate;
};

/// Builds a RunConfig from parsed JSON. Relative input paths resolve against
/// `base_dir`. A present `mode_override` replaces the config's "mode".
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                       const std::optional<std::string>& mode_override = std::nullopt);

/// Reads and parses a JSON file; syntax errors become ConfigError.
RunConfig load_config(const std::filesystem::path& path,
                      const std::optional<std::string>& mode_override = std::nullopt);

}  // namespace mde::cli

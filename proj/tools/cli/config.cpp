#include "cli/config.hpp"

#include <cmath>
#include <fstream>

namespace mde::cli {

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(path + key, "missing required field");
  return obj.at(key);
}

double number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ConfigError(path, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& path) {
  return obj.contains(key) ? number(obj.at(key), path + key) : fallback;
}

std::vector<std::pair<double, double>> pairs(const json& value, const std::string& path) {
  if (!value.is_array()) throw ConfigError(path, "expected an array of [x, y] pairs");
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < value.size(); ++k) {
    const std::string item = path + "[" + std::to_string(k) + "]";
    const json& p = value[k];
    if (!p.is_array() || p.size() != 2) throw ConfigError(item, "expected [x, y]");
    out.emplace_back(number(p[0], item + "[0]"), number(p[1], item + "[1]"));
  }
  return out;
}

DiscreteMeasure measure(const json& value, const std::string& path) {
  std::vector<Atom> atoms;
  for (const auto& [x, m] : pairs(value, path)) atoms.push_back({x, m});
  try {
    return DiscreteMeasure(std::move(atoms));
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

// A number is a constant function; an array of pairs is a table.
PiecewiseLinearFn function(const json& value, const std::string& path) {
  if (value.is_number()) return PiecewiseLinearFn::constant(number(value, path));
  std::vector<Breakpoint> bps;
  for (const auto& [x, y] : pairs(value, path)) bps.push_back({x, y});
  if (bps.empty()) throw ConfigError(path, "table must not be empty");
  try {
    return PiecewiseLinearFn(std::move(bps));
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

PvfSpec pvf(const json& value, const std::string& path) {
  const std::string kind = require(value, "kind", path + ".").get<std::string>();
  std::optional<double> c;
  if (value.contains("C")) c = number(value.at("C"), path + ".C");
  try {
    if (kind == "barycenter_split") return PvfSpec::barycenter_split(c.value_or(1.0));
    if (kind == "cumulative_phi") {
      return PvfSpec::cumulative_phi(function(require(value, "phi", path + "."), path + ".phi"), c);
    }
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path + ".kind", "unknown PVF kind '" + kind + "'");
}

SirModel sir_model(const json& m) {
  SirModel out;
  auto& p = out.params;
  p.total_population = number(require(m, "N_pop", "model."), "model.N_pop");
  if (!(p.total_population > 0.0)) throw ConfigError("model.N_pop", "must be positive");
  p.beta = function(require(m, "beta", "model."), "model.beta");
  p.nu = function(require(m, "nu", "model."), "model.nu");
  if (m.contains("pvf")) {
    p.pvf = pvf(m.at("pvf"), "model.pvf");
  } else if (m.contains("phi")) {
    try {
      p.pvf = PvfSpec::cumulative_phi(function(m.at("phi"), "model.phi"));
    } catch (const Error& e) {
      throw ConfigError("model.phi", e.what());
    }
  }
  if (m.contains("alpha_box")) {
    const auto& box = m.at("alpha_box");
    if (!box.is_array() || box.size() != 2) throw ConfigError("model.alpha_box", "expected [lower, upper]");
    p.alpha_box = {number(box[0], "model.alpha_box[0]"), number(box[1], "model.alpha_box[1]")};
    if (!(p.alpha_box.lower <= p.alpha_box.upper)) throw ConfigError("model.alpha_box", "lower > upper");
  }
  out.initial.S = number(require(m, "S0", "model."), "model.S0");
  out.initial.R = number_or(m, "R0", 0.0, "model.");
  out.initial.I = measure(require(m, "I0", "model."), "model.I0");
  try {
    sir::validate(p, out.initial);
  } catch (const Error& e) {
    throw ConfigError("model", e.what());
  }
  return out;
}

MdeModel mde_model(const json& m) {
  MdeModel out;
  if (m.contains("mu0")) out.mu0 = measure(m.at("mu0"), "model.mu0");
  if (m.contains("pvf")) out.pvf = pvf(m.at("pvf"), "model.pvf");
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  return p.is_absolute() ? p : base / p;
}

}  // namespace

Mode parse_mode(const std::string& name) {
  if (name == "simulate") return Mode::kSimulate;
  if (name == "distance") return Mode::kDistance;
  if (name == "convergence") return Mode::kConvergence;
  if (name == "validate") return Mode::kValidate;
  throw ConfigError("mode", "unknown mode '" + name + "'");
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kSimulate: return "simulate";
    case Mode::kDistance: return "distance";
    case Mode::kConvergence: return "convergence";
    case Mode::kValidate: return "validate";
  }
  return "unknown";
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir,
                       const std::optional<std::string>& mode_override) {
  if (!doc.is_object()) throw ConfigError("$", "config must be a JSON object");
  RunConfig cfg;
  try {
    if (mode_override) {
      cfg.mode = parse_mode(*mode_override);
    } else {
      cfg.mode = parse_mode(require(doc, "mode", "").get<std::string>());
    }
    if (doc.contains("output")) cfg.output = doc.at("output").get<std::string>();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("snapshot_stride")) {
      const auto stride = doc.at("snapshot_stride").get<std::int64_t>();
      if (stride < 1) throw ConfigError("snapshot_stride", "must be at least 1");
      cfg.snapshot_stride = static_cast<std::size_t>(stride);
    }
    if (doc.contains("T")) cfg.horizon = number(doc.at("T"), "T");
    if (!(cfg.horizon > 0.0)) throw ConfigError("T", "must be positive");

    if (doc.contains("N_grid")) {
      const json& g = doc.at("N_grid");
      cfg.grids.clear();
      if (g.is_array()) {
        for (const auto& n : g) cfg.grids.push_back(n.get<std::int64_t>());
      } else {
        cfg.grids.push_back(g.get<std::int64_t>());
      }
      if (cfg.grids.empty()) throw ConfigError("N_grid", "must list at least one grid");
      for (auto n : cfg.grids) {
        if (n < 2 || n > 100000) throw ConfigError("N_grid", "grid N must lie in [2, 100000]");
      }
    }

    if (doc.contains("model")) {
      const json& m = doc.at("model");
      const std::string type = m.value("type", "mde");
      if (type == "sir") {
        cfg.model = sir_model(m);
      } else if (type == "mde") {
        cfg.model = mde_model(m);
      } else {
        throw ConfigError("model.type", "unknown model type '" + type + "'");
      }
    }

    if (doc.contains("distance")) {
      const json& d = doc.at("distance");
      cfg.distance.first = resolve(require(d, "first", "distance.").get<std::string>(), base_dir);
      cfg.distance.second = resolve(require(d, "second", "distance.").get<std::string>(), base_dir);
      const std::string metric = d.value("metric", "generalized");
      if (metric != "generalized" && metric != "wasserstein") {
        throw ConfigError("distance.metric", "expected 'generalized' or 'wasserstein'");
      }
      cfg.distance.generalized = metric == "generalized";
      cfg.distance.write_plan = d.value("plan", true);
    } else if (cfg.mode == Mode::kDistance) {
      throw ConfigError("distance", "missing required block for distance mode");
    }

    if (doc.contains("convergence")) {
      const std::string e = require(doc.at("convergence"), "experiment", "convergence.").get<std::string>();
      if (e == "splitting") {
        cfg.convergence.experiment = Experiment::kSplitting;
      } else if (e == "self_similar") {
        cfg.convergence.experiment = Experiment::kSelfSimilar;
      } else if (e == "classical_sir") {
        cfg.convergence.experiment = Experiment::kClassicalSir;
      } else {
        throw ConfigError("convergence.experiment", "unknown experiment '" + e + "'");
      }
    }
    if (cfg.mode == Mode::kConvergence && cfg.grids.size() < 3) {
      throw ConfigError("N_grid", "convergence needs at least three grids");
    }

    if (doc.contains("validate")) {
      const json& v = doc.at("validate");
      if (v.contains("checks")) cfg.validate.checks = v.at("checks").get<std::vector<std::string>>();
      cfg.validate.gw_pairs = v.value("gw_pairs", cfg.validate.gw_pairs);
      cfg.validate.gw_resolution = v.value("gw_resolution", cfg.validate.gw_resolution);
      if (cfg.validate.gw_pairs < 1) throw ConfigError("validate.gw_pairs", "must be positive");
      if (cfg.validate.gw_resolution < 1) throw ConfigError("validate.gw_resolution", "must be positive");
      for (const auto& c : cfg.validate.checks) {
        if (c != "splitting" && c != "self_similar" && c != "classical_sir" && c != "gw_bruteforce") {
          throw ConfigError("validate.checks", "unknown check '" + c + "'");
        }
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError("$", std::string("type error: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const std::optional<std::string>& mode_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc, path.parent_path(), mode_override);
}

}  // namespace mde::cli

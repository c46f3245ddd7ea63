#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cli/experiments.hpp"
#include "mde/io.hpp"
#include "mde/oracles.hpp"
#include "mde/transport.hpp"

namespace mde::cli {

namespace {

namespace fs = std::filesystem;
using io::format_double;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("--out", "cannot write " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
}

bool numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kGridOverflow:
    case ErrorKind::kOffGrid:
    case ErrorKind::kPositivityViolation:
    case ErrorKind::kBoundViolation:
    case ErrorKind::kInvalidTau:
      return true;
    default:
      return false;
  }
}

double abs_moment(const DiscreteMeasure& mu) {
  double s = 0.0;
  for (const auto& a : mu.atoms()) s += std::abs(a.position) * a.mass;
  return s;
}

SirModel default_sir_model() {
  SirModel m;
  m.params.total_population = 1.0;
  m.params.beta = PiecewiseLinearFn::constant(0.3);
  m.params.nu = PiecewiseLinearFn::constant(0.1);
  m.params.pvf = PvfSpec::barycenter_split();
  m.initial = {0.99, DiscreteMeasure::dirac(0.0, 0.01), 0.0};
  return m;
}

const PiecewiseLinearFn& centered_phi() {
  static const PiecewiseLinearFn phi = PiecewiseLinearFn::linear(0.0, -0.5, 1.0, 0.5);
  return phi;
}

// ---------------------------------------------------------------- simulate

int simulate(const RunConfig& cfg, std::ostream& out) {
  const GridSpec grid(cfg.grids.front());
  Trajectory traj;
  std::ostringstream csv;
  if (const auto* m = std::get_if<SirModel>(&cfg.model)) {
    traj = sir::simulate(m->params, m->initial, grid, cfg.horizon);
    csv << "t,S,I_total,R,conserved\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      const auto s = sir::state_at(traj, k);
      csv << format_double(traj.times[k]) << ',' << format_double(s.S) << ',' << format_double(s.I.total_mass())
          << ',' << format_double(s.R) << ',' << format_double(sir::conserved_total(s)) << '\n';
    }
  } else {
    const auto& mde_model = std::get<MdeModel>(cfg.model);
    traj = las_trajectory(mde_model.mu0, mde_model.pvf, grid, cfg.horizon);
    csv << "t,total_mass,support_lower,support_upper\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      const auto& mu = traj.states[k].measure;
      const Interval box = mu.empty() ? Interval{0.0, 0.0} : support_bounds(mu);
      csv << format_double(traj.times[k]) << ',' << format_double(mu.total_mass()) << ','
          << format_double(box.lower) << ',' << format_double(box.upper) << '\n';
    }
  }

  fs::create_directories(cfg.output);
  write_text(cfg.output / "trajectory.csv", csv.str());

  nlohmann::ordered_json manifest;
  manifest["mode"] = "simulate";
  manifest["N_grid"] = grid.n();
  manifest["T"] = cfg.horizon;
  manifest["trajectory"] = "trajectory.csv";
  auto snapshots = nlohmann::ordered_json::array();
  const std::size_t count = traj.states.size();
  for (std::size_t k = 0; k < count; ++k) {
    if (k % cfg.snapshot_stride != 0 && k + 1 != count) continue;
    const std::string name = "measure_" + std::to_string(k) + ".csv";
    io::write_measure_csv(cfg.output / name, traj.states[k].measure);
    snapshots.push_back({{"index", k}, {"t", traj.times[k]}, {"file", name}});
  }
  manifest["snapshots"] = std::move(snapshots);
  write_text(cfg.output / "manifest.json", manifest.dump(2) + "\n");
  out << "simulate: " << count << " snapshots, N = " << grid.n() << ", written to " << cfg.output.string()
      << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- distance

int distance(const RunConfig& cfg, std::ostream& out) {
  const auto mu = io::read_measure_csv(cfg.distance.first);
  const auto nu = io::read_measure_csv(cfg.distance.second);
  TransportPlan plan;
  double value = 0.0;
  if (cfg.distance.generalized) {
    auto r = generalized_wasserstein(mu, nu);
    value = r.value;
    plan = std::move(r.plan);
  } else {
    value = wasserstein_1d(mu, nu);
    plan.matched = monotone_coupling(mu, nu);
  }

  fs::create_directories(cfg.output);
  std::ostringstream csv;
  csv << "metric,value,transport_cost,removed_mass,added_mass\n"
      << (cfg.distance.generalized ? "generalized" : "wasserstein") << ',' << format_double(value) << ','
      << format_double(plan.transport_cost()) << ',' << format_double(plan.removed_mass()) << ','
      << format_double(plan.added_mass()) << '\n';
  write_text(cfg.output / "distance.csv", csv.str());
  if (cfg.distance.write_plan) {
    std::ostringstream p;
    p << "src,dst,mass\n";
    for (const auto& e : plan.matched) {
      p << format_double(e.source) << ',' << format_double(e.target) << ',' << format_double(e.mass) << '\n';
    }
    write_text(cfg.output / "plan.csv", p.str());
  }
  out << format_double(value) << '\n';
  return kExitOk;
}

// ------------------------------------------------------------- convergence

double convergence_error(const RunConfig& cfg, std::int64_t n) {
  const GridSpec grid(n);
  switch (cfg.convergence.experiment) {
    case Experiment::kSplitting: {
      const auto* m = std::get_if<MdeModel>(&cfg.model);
      return splitting_error(m ? m->mu0 : DiscreteMeasure::dirac(0.0), grid, cfg.horizon);
    }
    case Experiment::kSelfSimilar: {
      const auto* m = std::get_if<MdeModel>(&cfg.model);
      const PiecewiseLinearFn& phi =
          (m && m->pvf.kind == PvfKind::kCumulativePhi) ? *m->pvf.phi : centered_phi();
      return self_similar_error(phi, grid, cfg.horizon);
    }
    case Experiment::kClassicalSir: {
      const auto* m = std::get_if<SirModel>(&cfg.model);
      return classical_sir_comparison(m ? *m : default_sir_model(), grid, cfg.horizon).max_gap;
    }
  }
  return 0.0;
}

int convergence(const RunConfig& cfg, std::ostream& out) {
  // One trajectory per grid, run concurrently; results are gathered in the
  // order of cfg.grids so the output does not depend on scheduling.
  std::vector<std::future<double>> jobs;
  jobs.reserve(cfg.grids.size());
  for (auto n : cfg.grids) {
    jobs.push_back(std::async(std::launch::async, [&cfg, n] { return convergence_error(cfg, n); }));
  }
  std::vector<ConvergencePoint> points;
  for (std::size_t k = 0; k < jobs.size(); ++k) points.push_back({cfg.grids[k], jobs[k].get()});
  const SlopeFit fit = fit_log_log_slope(points);

  fs::create_directories(cfg.output);
  std::ostringstream table;
  table << "N,error\n";
  for (const auto& p : points) table << p.n << ',' << format_double(p.error) << '\n';
  write_text(cfg.output / "convergence.csv", table.str());

  std::ostringstream summary;
  summary << "slope,points_fitted,all_errors_zero\n"
          << (fit.slope ? format_double(*fit.slope) : std::string("nan")) << ',' << fit.points << ','
          << (fit.all_zero ? "true" : "false") << '\n';
  write_text(cfg.output / "convergence_fit.csv", summary.str());

  for (const auto& p : points) out << "N = " << p.n << "  error = " << format_double(p.error) << '\n';
  if (fit.slope) {
    out << "fitted slope (smallest N excluded) = " << format_double(*fit.slope) << '\n';
  } else if (fit.all_zero) {
    out << "errors are identically zero; slope undefined\n";
  } else {
    out << "slope undefined (zero error on some grid)\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- validate

struct CheckRow {
  std::string id;
  double oracle;
  double scheme;
  double gap;
  double tolerance;
};

struct CheckResult {
  std::string name;
  std::vector<CheckRow> rows;
};

CheckResult check_splitting() {
  CheckResult r{"splitting", {}};
  const auto mu0 = DiscreteMeasure::dirac(0.0);
  const auto exact = oracles::splitting_solution(mu0, 1.0);
  for (std::int64_t n : {10, 20, 40, 80}) {
    const GridSpec grid(n);
    const auto mu = las_trajectory(mu0, PvfSpec::barycenter_split(), grid, 1.0).final_state().measure;
    r.rows.push_back({"N=" + std::to_string(n), abs_moment(exact), abs_moment(mu), wasserstein_1d(mu, exact),
                      3.0 / static_cast<double>(n)});
  }
  return r;
}

CheckResult check_self_similar() {
  CheckResult r{"self_similar", {}};
  const GridSpec grid(80);
  const auto& phi = centered_phi();
  const auto mu = las_trajectory(DiscreteMeasure::dirac(0.0), PvfSpec::cumulative_phi(phi), grid, 1.0)
                      .final_state()
                      .measure;
  const double total = mu.total_mass();
  for (const auto& a : mu.atoms()) {
    const double f = oracles::self_similar_cdf(phi, 1.0, a.position);
    const double g = cdf(mu, a.position) / total;
    const double gap = std::max(std::abs(g - f), std::abs(cdf_left(mu, a.position) / total - f));
    r.rows.push_back({"N=80,x=" + format_double(a.position), f, g, gap, 5.0 / 80.0});
  }
  return r;
}

CheckResult check_classical_sir(const RunConfig& cfg) {
  CheckResult r{"classical_sir", {}};
  const auto* m = std::get_if<SirModel>(&cfg.model);
  const SirModel model = m ? *m : default_sir_model();
  const double horizon = m ? cfg.horizon : 50.0;
  const auto cmp = classical_sir_comparison(model, GridSpec(m ? cfg.grids.front() : 100), horizon);
  const double tol = 0.01 * model.params.total_population;
  for (std::size_t k = 0; k < cmp.times.size(); ++k) {
    r.rows.push_back({"t=" + format_double(cmp.times[k]), cmp.oracle_infected[k], cmp.scheme_infected[k],
                      cmp.gaps[k], tol});
  }
  return r;
}

CheckResult check_gw(const RunConfig& cfg) {
  CheckResult r{"gw_bruteforce", {}};
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> pos(-3.0, 3.0);
  std::uniform_real_distribution<double> mass(0.0, 2.0);
  auto draw = [&] {
    std::vector<Atom> atoms;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) atoms.push_back({pos(rng), mass(rng)});
    return DiscreteMeasure(std::move(atoms));
  };
  for (int p = 0; p < cfg.validate.gw_pairs; ++p) {
    const auto mu = draw();
    const auto nu = draw();
    const double brute = oracles::gw_bruteforce(mu, nu, cfg.validate.gw_resolution);
    const double flow = generalized_wasserstein(mu, nu).value;
    r.rows.push_back({"pair-" + std::to_string(p), brute, flow, std::abs(brute - flow), 0.05});
  }
  return r;
}

int validate(const RunConfig& cfg, std::ostream& out) {
  std::vector<CheckResult> results;
  for (const auto& name : cfg.validate.checks) {
    if (name == "splitting") results.push_back(check_splitting());
    if (name == "self_similar") results.push_back(check_self_similar());
    if (name == "classical_sir") results.push_back(check_classical_sir(cfg));
    if (name == "gw_bruteforce") results.push_back(check_gw(cfg));
  }

  fs::create_directories(cfg.output);
  std::ostringstream summary;
  summary << "check,max_gap,tolerance,pass\n";
  bool all_pass = true;
  for (const auto& res : results) {
    std::ostringstream csv;
    csv << "input-id,oracle-value,scheme-value,gap\n";
    double max_gap = 0.0;
    double tol_at_max = 0.0;
    bool pass = true;
    for (const auto& row : res.rows) {
      csv << row.id << ',' << format_double(row.oracle) << ',' << format_double(row.scheme) << ','
          << format_double(row.gap) << '\n';
      if (row.gap > row.tolerance) pass = false;
      if (row.gap >= max_gap) {
        max_gap = row.gap;
        tol_at_max = row.tolerance;
      }
    }
    write_text(cfg.output / ("validate_" + res.name + ".csv"), csv.str());
    summary << res.name << ',' << format_double(max_gap) << ',' << format_double(tol_at_max) << ','
            << (pass ? "true" : "false") << '\n';
    out << (pass ? "PASS " : "FAIL ") << res.name << "  max gap " << format_double(max_gap) << '\n';
    all_pass = all_pass && pass;
  }
  write_text(cfg.output / "validate.csv", summary.str());
  return all_pass ? kExitOk : kExitValidationFailed;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.mode) {
      case Mode::kSimulate: return simulate(cfg, out);
      case Mode::kDistance: return distance(cfg, out);
      case Mode::kConvergence: return convergence(cfg, out);
      case Mode::kValidate: return validate(cfg, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    err << (numerical(e.kind()) ? "numerical error: " : "input error: ") << e.what() << '\n';
    return numerical(e.kind()) ? kExitNumericalError : kExitConfigError;
  } catch (const fs::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Measure differential equations: lattice schemes, transport distances, SIR over variants"};
  std::string config_path;
  std::optional<std::string> mode;
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--mode", mode, "simulate | distance | convergence | validate (overrides config)");
  app.add_option("--out", output, "output directory (overrides config)");
  app.add_option("--seed", seed, "seed for randomized suites (overrides config)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  RunConfig cfg;
  try {
    cfg = load_config(config_path, mode);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  if (output) cfg.output = *output;
  if (seed) cfg.seed = *seed;
  return run(cfg, out, err);
}

}  // namespace mde::cli

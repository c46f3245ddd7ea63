#include "cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mde/oracles.hpp"
#include "mde/transport.hpp"

namespace mde::cli {

double sup_cdf_distance(const DiscreteMeasure& mu, const std::function<double(double)>& cdf) {
  const double total = mu.total_mass();
  double gap = 0.0;
  for (const auto& a : mu.atoms()) {
    const double f = cdf(a.position);
    gap = std::max(gap, std::abs(cdf_left(mu, a.position) / total - f));
    gap = std::max(gap, std::abs(mde::cdf(mu, a.position) / total - f));
  }
  return gap;
}

double splitting_error(const DiscreteMeasure& mu0, const GridSpec& grid, double horizon) {
  const auto traj = las_trajectory(mu0, PvfSpec::barycenter_split(), grid, horizon);
  return wasserstein_1d(traj.final_state().measure, oracles::splitting_solution(mu0, horizon));
}

double self_similar_error(const PiecewiseLinearFn& phi, const GridSpec& grid, double horizon) {
  const auto traj = las_trajectory(DiscreteMeasure::dirac(0.0), PvfSpec::cumulative_phi(phi), grid, horizon);
  return sup_cdf_distance(traj.final_state().measure,
                          [&](double x) { return oracles::self_similar_cdf(phi, horizon, x); });
}

SirComparison classical_sir_comparison(const SirModel& model, const GridSpec& grid, double horizon) {
  const auto& p = model.params;
  if (p.beta.breakpoints().size() != 1 || p.nu.breakpoints().size() != 1) {
    throw ConfigError("model", "classical SIR comparison needs constant beta and nu");
  }
  const auto traj = sir::simulate(p, model.initial, grid, horizon);
  const double h = std::min(1e-3, grid.time_step() / 10.0);
  const auto ref = oracles::classical_sir_rk4(model.initial.S, model.initial.I.total_mass(), model.initial.R,
                                              p.beta(0.0), p.nu(0.0), p.total_population, horizon, h);
  SirComparison out;
  const double total0 = sir::conserved_total(model.initial);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto s = sir::state_at(traj, k);
    const auto r = oracles::sample_at(ref, traj.times[k]);
    const double infected = s.I.total_mass();
    const double gap = std::abs(s.S - r.S) + std::abs(infected - r.I) + std::abs(s.R - r.R);
    out.times.push_back(traj.times[k]);
    out.oracle_infected.push_back(r.I);
    out.scheme_infected.push_back(infected);
    out.gaps.push_back(gap);
    out.max_gap = std::max(out.max_gap, gap);
    out.max_conservation_drift = std::max(out.max_conservation_drift, std::abs(sir::conserved_total(s) - total0));
  }
  return out;
}

SlopeFit fit_log_log_slope(std::vector<ConvergencePoint> points) {
  std::sort(points.begin(), points.end(),
            [](const ConvergencePoint& a, const ConvergencePoint& b) { return a.n < b.n; });
  if (!points.empty()) points.erase(points.begin());
  SlopeFit fit;
  fit.points = points.size();
  fit.all_zero = std::all_of(points.begin(), points.end(), [](const auto& p) { return p.error == 0.0; });
  if (points.size() < 2) return fit;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    if (!(p.error > 0.0)) return fit;
    const double x = std::log(static_cast<double>(p.n));
    const double y = std::log(p.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(points.size());
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return fit;
}

}  // namespace mde::cli

#include "mde/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mde/transport.hpp"

namespace mde {

namespace {

// Rate for every atom of `vd`, matched by position against the source's
// per-atom list (both sorted by position).
std::vector<double> rates_for(const VelocityMeasure& vd, const DiscreteMeasure& mu,
                              const SignedSourceRates* source) {
  std::vector<double> out(vd.size(), 0.0);
  if (source == nullptr) return out;
  const auto& per_atom = source->per_atom;
  if (per_atom.size() != mu.size()) {
    throw Error(ErrorKind::kInvalidArgument, "source rates are not aligned with the measure atoms");
  }
  for (std::size_t k = 0; k < per_atom.size(); ++k) {
    if (per_atom[k].position != mu.atoms()[k].position) {
      throw Error(ErrorKind::kInvalidArgument, "source rate position does not match measure atom");
    }
  }
  std::size_t k = 0;
  for (std::size_t a = 0; a < vd.size(); ++a) {
    while (k < per_atom.size() && per_atom[k].position < vd.atoms()[a].position) ++k;
    out[a] = per_atom[k].rate;
  }
  return out;
}

void check_positivity(const SignedSourceRates& source, double dt) {
  for (const auto& r : source.per_atom) {
    if (dt * (-r.rate) >= 1.0) {
      throw Error(ErrorKind::kPositivityViolation,
                  "step " + std::to_string(dt) + " times decay rate " + std::to_string(-r.rate) +
                      " reaches 1; refine the grid");
    }
  }
}

// Moves every atom of the snapped velocity measure: lattice exact when
// `lattice_step` is set (τ = Δ_N), by x + τ v otherwise. Each mass is scaled
// by 1 + τ·rate.
std::vector<Atom> move_atoms(const VelocityMeasure& vd, const GridSpec& grid, double tau,
                             bool lattice_step, const std::vector<double>& rates) {
  std::vector<Atom> out;
  out.reserve(vd.size());
  const std::int64_t limit = grid.max_space_index();
  for (std::size_t a = 0; a < vd.size(); ++a) {
    const VelocityAtom& atom = vd.atoms()[a];
    const double mass = atom.mass * (1.0 + tau * rates[a]);
    if (lattice_step) {
      const std::int64_t i = grid.node_index(atom.position);
      const std::int64_t j = grid.velocity_cell(atom.velocity);
      const std::int64_t target = i + j;  // Δx = Δt·Δv
      if (target < -limit || target > limit) {
        throw Error(ErrorKind::kGridOverflow,
                    "atom left the box [-" + std::to_string(grid.n()) + ", " + std::to_string(grid.n()) +
                        "]; refine the grid");
      }
      out.push_back({grid.space_node(target), mass});
    } else {
      out.push_back({atom.position + tau * atom.velocity, mass});
    }
  }
  return out;
}

void check_tau(double tau, const GridSpec& grid) {
  if (!(tau >= 0.0 && tau <= grid.time_step())) {
    throw Error(ErrorKind::kInvalidTau, "tau " + std::to_string(tau) + " outside [0, Δ_N]");
  }
}

SystemState advance(const SystemState& state, const CoupledSystem& system, const GridSpec& grid,
                    double tau, bool lattice_step) {
  SystemState next;
  next.x = state.x;
  if (system.ode_rhs) {
    const OdeState g = system.ode_rhs(state.x, state.measure);
    if (g.size() != state.x.size()) {
      throw Error(ErrorKind::kInvalidArgument, "ode right-hand side has the wrong dimension");
    }
    for (std::size_t k = 0; k < g.size(); ++k) next.x[k] += tau * g[k];
  }

  std::optional<SignedSourceRates> source;
  if (system.source) {
    source = system.source(state.measure, state.x);
    check_positivity(*source, grid.time_step());
  }

  std::vector<Atom> atoms;
  if (!state.measure.empty()) {
    const VelocityMeasure vd = evaluate_discretized_pvf(system.pvf, state.measure, grid);
    const auto rates = rates_for(vd, state.measure, source ? &*source : nullptr);
    atoms = move_atoms(vd, grid, tau, lattice_step, rates);
  }
  if (source && !source->inflow.empty()) {
    const DiscreteMeasure inflow = discretize_space(source->inflow, grid);
    for (const auto& a : inflow.atoms()) {
      atoms.push_back({a.position, tau * a.mass});
    }
  }
  next.measure = DiscreteMeasure(std::move(atoms));
  return next;
}

struct TimeLattice {
  std::int64_t full_steps;
  double remainder;
};

TimeLattice split_horizon(double horizon, const GridSpec& grid) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorKind::kInvalidArgument, "horizon must be finite and nonnegative");
  }
  const double steps = horizon * static_cast<double>(grid.n());
  auto full = static_cast<std::int64_t>(std::floor(steps + 1e-9));
  double remainder = horizon - static_cast<double>(full) * grid.time_step();
  if (remainder <= 1e-12 * std::max(1.0, horizon)) remainder = 0.0;
  return {full, remainder};
}

double lattice_time(std::int64_t step, const GridSpec& grid) {
  return static_cast<double>(step) / static_cast<double>(grid.n());
}

double max_positive_rate(const SignedSourceRates& s) {
  double m = 0.0;
  for (const auto& r : s.per_atom) m = std::max(m, r.rate);
  return m;
}

}  // namespace

double support_growth_bound(double radius, double c, std::int64_t n, double horizon) {
  const double nd = static_cast<double>(n);
  const double c_n = c + 1.0 / nd;
  const double r_n = radius + 1.0 / (nd * nd);
  return std::exp(c_n * horizon) * (r_n + 1.0) - 1.0;
}

double bounded_speed_radius(double radius, double speed, std::int64_t n, double horizon) {
  const double nd = static_cast<double>(n);
  return radius + 1.0 / (nd * nd) + (speed + 1.0 / nd) * horizon;
}

DiscreteMeasure las_step(const DiscreteMeasure& mu, const PvfSpec& pvf, const GridSpec& grid) {
  if (mu.empty()) return mu;
  const VelocityMeasure vd = evaluate_discretized_pvf(pvf, mu, grid);
  return DiscreteMeasure(move_atoms(vd, grid, grid.time_step(), true, std::vector<double>(vd.size(), 0.0)));
}

DiscreteMeasure las_interpolate(const DiscreteMeasure& mu, const PvfSpec& pvf, const GridSpec& grid,
                                double tau) {
  check_tau(tau, grid);
  if (tau == 0.0 || mu.empty()) return mu;
  if (tau == grid.time_step()) return las_step(mu, pvf, grid);
  const VelocityMeasure vd = evaluate_discretized_pvf(pvf, mu, grid);
  return DiscreteMeasure(move_atoms(vd, grid, tau, false, std::vector<double>(vd.size(), 0.0)));
}

Trajectory las_trajectory(const DiscreteMeasure& mu0, const PvfSpec& pvf, const GridSpec& grid,
                          double horizon) {
  CoupledSystem system{nullptr, pvf, nullptr};
  Trajectory traj = euler_las_trajectory({}, mu0, system, grid, horizon);
  if (!mu0.empty() && support_bound_violations(traj, support_bounds(mu0).radius(),
                                               pvf.support_growth_constant) > 0) {
    throw Error(ErrorKind::kBoundViolation, "lattice solution left the support growth bound");
  }
  return traj;
}

SystemState euler_las_step(const SystemState& state, const CoupledSystem& system, const GridSpec& grid) {
  return advance(state, system, grid, grid.time_step(), true);
}

SystemState euler_las_interpolate(const SystemState& state, const CoupledSystem& system,
                                  const GridSpec& grid, double tau) {
  check_tau(tau, grid);
  if (tau == 0.0) return state;
  if (tau == grid.time_step()) return euler_las_step(state, system, grid);
  return advance(state, system, grid, tau, false);
}

Trajectory euler_las_trajectory(const OdeState& x0, const DiscreteMeasure& mu0,
                                const CoupledSystem& system, const GridSpec& grid, double horizon) {
  const TimeLattice lattice = split_horizon(horizon, grid);
  Trajectory traj;
  traj.grid = grid;
  traj.times.reserve(static_cast<std::size_t>(lattice.full_steps) + 2);
  traj.states.reserve(static_cast<std::size_t>(lattice.full_steps) + 2);
  traj.times.push_back(0.0);
  traj.states.push_back({x0, discretize_space(mu0, grid)});

  const double dt = grid.time_step();
  for (std::int64_t step = 1; step <= lattice.full_steps; ++step) {
    const SystemState& current = traj.states.back();
    SystemState next = euler_las_step(current, system, grid);

    double growth = 1.0;
    double inflow = 0.0;
    if (system.source) {
      const auto s = system.source(current.measure, current.x);
      growth += dt * max_positive_rate(s);
      inflow = dt * s.inflow.total_mass();
    }
    const double bound = current.measure.total_mass() * growth + inflow;
    if (next.measure.total_mass() > bound * (1.0 + 1e-12) + 1e-300) {
      throw Error(ErrorKind::kBoundViolation, "discrete mass bound failed at step " + std::to_string(step));
    }
    traj.times.push_back(lattice_time(step, grid));
    traj.states.push_back(std::move(next));
  }
  if (lattice.remainder > 0.0) {
    traj.times.push_back(horizon);
    traj.states.push_back(euler_las_interpolate(traj.states.back(), system, grid, lattice.remainder));
  }
  return traj;
}

std::size_t support_bound_violations(const Trajectory& trajectory, double initial_radius, double c) {
  const std::int64_t n = trajectory.grid.n();
  std::size_t violations = 0;
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    const DiscreteMeasure& mu = trajectory.states[k].measure;
    if (mu.empty()) continue;
    // Interpolated snapshots sit between two lattice times; use the later one.
    const double t = std::ceil(trajectory.times[k] * static_cast<double>(n) - 1e-9) / static_cast<double>(n);
    if (support_bounds(mu).radius() > support_growth_bound(initial_radius, c, n, t)) ++violations;
  }
  return violations;
}

DependenceReport lipschitz_dependence_probe(const OdeState& x0, const DiscreteMeasure& mu0,
                                            const OdeState& y0, const DiscreteMeasure& nu0,
                                            const CoupledSystem& system, const GridSpec& grid,
                                            double horizon, std::size_t stride) {
  if (x0.size() != y0.size()) {
    throw Error(ErrorKind::kInvalidArgument, "ode states of different dimension");
  }
  stride = std::max<std::size_t>(stride, 1);
  const Trajectory a = euler_las_trajectory(x0, mu0, system, grid, horizon);
  const Trajectory b = euler_las_trajectory(y0, nu0, system, grid, horizon);

  DependenceReport report;
  const std::size_t count = a.states.size();
  for (std::size_t k = 0; k < count; ++k) {
    if (k % stride != 0 && k + 1 != count) continue;
    double dx = 0.0;
    for (std::size_t d = 0; d < a.states[k].x.size(); ++d) {
      const double diff = a.states[k].x[d] - b.states[k].x[d];
      dx += diff * diff;
    }
    report.times.push_back(a.times[k]);
    report.distances.push_back(std::sqrt(dx) +
                               generalized_wasserstein(a.states[k].measure, b.states[k].measure).value);
  }

  const double initial = report.distances.front();
  if (initial == 0.0) {
    report.degenerate = true;
    return report;
  }
  double rate = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    const double ratio = report.distances[k] / initial;
    report.ratios.push_back(ratio);
    if (report.times[k] > 0.0 && ratio > 0.0) rate = std::max(rate, std::log(ratio) / report.times[k]);
  }
  report.empirical_rate = std::isfinite(rate) ? rate : 0.0;
  return report;
}

}  // namespace mde

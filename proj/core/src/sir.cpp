#include "mde/sir.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mde::sir {

namespace {

// Range covering the α-box and every breakpoint; outside it f is constant.
double min_everywhere(const PiecewiseLinearFn& f, const Interval& box) {
  const double lo = std::min(box.lower, f.breakpoints().front().input);
  const double hi = std::max(box.upper, f.breakpoints().back().input);
  return f.min_on(lo, hi);
}

double max_everywhere(const PiecewiseLinearFn& f, const Interval& box) {
  const double lo = std::min(box.lower, f.breakpoints().front().input);
  const double hi = std::max(box.upper, f.breakpoints().back().input);
  return f.max_on(lo, hi);
}

}  // namespace

double infection_pressure(double S, const DiscreteMeasure& I, const EpidemicParams& params) {
  double integral = 0.0;
  for (const auto& a : I.atoms()) integral += params.beta(a.position) * a.mass;
  return S / params.total_population * integral;
}

double recovery_flux(const DiscreteMeasure& I, const EpidemicParams& params) {
  double integral = 0.0;
  for (const auto& a : I.atoms()) integral += params.nu(a.position) * a.mass;
  return integral;
}

SignedSourceRates sir_source(const EpidemicState& state, const EpidemicParams& params) {
  SignedSourceRates out;
  out.per_atom.reserve(state.I.size());
  const double susceptible_fraction = state.S / params.total_population;
  for (const auto& a : state.I.atoms()) {
    out.per_atom.push_back({a.position, susceptible_fraction * params.beta(a.position) - params.nu(a.position)});
  }
  return out;
}

CoupledSystem assemble_system(const EpidemicParams& params) {
  CoupledSystem system;
  system.pvf = params.pvf;
  system.ode_rhs = [params](const OdeState& x, const DiscreteMeasure& I) -> OdeState {
    return {-infection_pressure(x[0], I, params), recovery_flux(I, params)};
  };
  system.source = [params](const DiscreteMeasure& I, const OdeState& x) {
    return sir_source(EpidemicState{x[0], I, x[1]}, params);
  };
  return system;
}

double conserved_total(const EpidemicState& state) { return state.S + state.I.total_mass() + state.R; }

void validate(const EpidemicParams& params, const EpidemicState& initial) {
  if (!(params.total_population > 0.0) || !std::isfinite(params.total_population)) {
    throw Error(ErrorKind::kInvalidArgument, "N_pop must be positive");
  }
  if (!(params.alpha_box.lower <= params.alpha_box.upper)) {
    throw Error(ErrorKind::kInvalidArgument, "alpha box must satisfy lower <= upper");
  }
  if (min_everywhere(params.beta, params.alpha_box) < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "beta must be nonnegative");
  }
  if (min_everywhere(params.nu, params.alpha_box) < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "nu must be nonnegative");
  }
  if (!(initial.S >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "S0 must be nonnegative");
  if (!(initial.R >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "R0 must be nonnegative");
  const double total = conserved_total(initial);
  if (total > params.total_population * (1.0 + 1e-12)) {
    throw Error(ErrorKind::kInvalidArgument,
                "N_pop " + std::to_string(params.total_population) + " is below S0 + |I0| + R0 = " +
                    std::to_string(total));
  }
}

double reachable_radius(const EpidemicParams& params, const EpidemicState& initial, std::int64_t n,
                        double horizon) {
  const double r0 = initial.I.empty() ? 0.0 : support_bounds(initial.I).radius();
  // The growth lemma bound is exponential in C·T; for these fields the speed
  // is uniformly bounded, which gives a linear radius as well.
  const double lemma = support_growth_bound(r0, params.pvf.support_growth_constant, n, horizon);
  const double linear = bounded_speed_radius(r0, params.pvf.speed_bound(), n, horizon);
  return std::max(params.alpha_box.radius(), std::min(lemma, linear));
}

std::int64_t minimal_admissible_grid(const EpidemicParams& params, const EpidemicState& initial,
                                     double horizon) {
  // Δ_N max ν < 1 keeps atoms nonnegative; Δ_N max β < 1 keeps S nonnegative
  // because |I| <= N_pop.
  const double rate = std::max(max_everywhere(params.nu, params.alpha_box),
                               max_everywhere(params.beta, params.alpha_box));
  std::int64_t n = std::max<std::int64_t>(2, static_cast<std::int64_t>(std::floor(rate)) + 1);
  while (reachable_radius(params, initial, n, horizon) > static_cast<double>(n)) {
    ++n;
    if (n > 100000) throw Error(ErrorKind::kGridOverflow, "no admissible grid below N = 100000");
  }
  return n;
}

Trajectory simulate(const EpidemicParams& params, const EpidemicState& initial, const GridSpec& grid,
                    double horizon) {
  validate(params, initial);
  const std::int64_t n_min = minimal_admissible_grid(params, initial, horizon);
  if (grid.n() < n_min) {
    throw Error(ErrorKind::kGridOverflow,
                "grid N = " + std::to_string(grid.n()) + " too small; minimal admissible N = " +
                    std::to_string(n_min));
  }
  Trajectory traj = euler_las_trajectory({initial.S, initial.R}, initial.I, assemble_system(params), grid,
                                         horizon);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto& x = traj.states[k].x;
    if (x[0] < 0.0 || x[1] < 0.0) {
      throw Error(ErrorKind::kPositivityViolation, "S or R became negative at t = " +
                                                       std::to_string(traj.times[k]));
    }
  }
  return traj;
}

EpidemicState state_at(const Trajectory& trajectory, std::size_t index) {
  const SystemState& s = trajectory.states.at(index);
  return {s.x.at(0), s.measure, s.x.at(1)};
}

}  // namespace mde::sir

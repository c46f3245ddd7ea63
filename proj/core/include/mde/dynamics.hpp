#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mde/measure.hpp"
#include "mde/pvf.hpp"

namespace mde {

using OdeState = std::vector<double>;

struct AtomRate {
  double position;
  double rate;  // per unit time, per unit mass
};

/// Source term of the coupled scheme: a signed multiplicative rate per atom
/// of the current measure plus a nonnegative absolute inflow.
struct SignedSourceRates {
  std::vector<AtomRate> per_atom;
  DiscreteMeasure inflow;
};

struct CoupledSystem {
  std::function<OdeState(const OdeState&, const DiscreteMeasure&)> ode_rhs;
  PvfSpec pvf;
  /// May be empty, meaning no source.
  std::function<SignedSourceRates(const DiscreteMeasure&, const OdeState&)> source;
};

struct SystemState {
  OdeState x;
  DiscreteMeasure measure;
};

struct Trajectory {
  GridSpec grid{1};
  std::vector<double> times;
  std::vector<SystemState> states;

  const SystemState& final_state() const { return states.back(); }
};

/// Radius e^{C_N T}(R_N + 1) - 1 with C_N = C + 1/N and R_N = R + 1/N².
double support_growth_bound(double radius, double c, std::int64_t n, double horizon);

/// Radius for fields whose speed is bounded by `speed` independently of the
/// support: R_N + (speed + 1/N) T. Never larger than support_growth_bound
/// when speed <= C.
double bounded_speed_radius(double radius, double speed, std::int64_t n, double horizon);

/// One step of the lattice scheme: V[μ], snap velocities, move every
/// (x_i, v_j) atom to x_i + Δ_N v_j. μ must be supported on lattice nodes.
DiscreteMeasure las_step(const DiscreteMeasure& mu, const PvfSpec& pvf, const GridSpec& grid);

/// μ at time ℓΔ_N + τ: atoms at x_i + τ v_j, 0 <= τ <= Δ_N (kInvalidTau).
DiscreteMeasure las_interpolate(const DiscreteMeasure& mu, const PvfSpec& pvf, const GridSpec& grid,
                                double tau);

/// Snapshots at every ℓΔ_N <= T, plus T itself when it is not on the time
/// lattice. Throws kBoundViolation if a snapshot leaves support_growth_bound.
Trajectory las_trajectory(const DiscreteMeasure& mu0, const PvfSpec& pvf, const GridSpec& grid,
                          double horizon);

SystemState euler_las_step(const SystemState& state, const CoupledSystem& system, const GridSpec& grid);

/// Step-3 interpolation between lattice times, 0 <= τ <= Δ_N.
SystemState euler_las_interpolate(const SystemState& state, const CoupledSystem& system,
                                  const GridSpec& grid, double tau);

/// μ₀ is discretized with A^x_N first. Throws kBoundViolation if the discrete
/// mass bound |μ_{ℓ+1}| <= |μ_ℓ|(1 + Δ max rate) + Δ|inflow| fails.
Trajectory euler_las_trajectory(const OdeState& x0, const DiscreteMeasure& mu0,
                                const CoupledSystem& system, const GridSpec& grid, double horizon);

/// Number of snapshots whose support radius exceeds support_growth_bound(R, C, N, t_final).
std::size_t support_bound_violations(const Trajectory& trajectory, double initial_radius, double c);

struct DependenceReport {
  std::vector<double> times;
  std::vector<double> distances;  // |x - y| + W^g(μ, ν) at each probed time
  std::vector<double> ratios;     // distances / distances[0]
  bool degenerate = false;        // identical initial data: 0/0
  double empirical_rate = 0.0;    // sup_t log(ratio(t)) / t over t > 0
};

/// Runs both trajectories and measures how the distance between them evolves.
/// Every `stride`-th snapshot (and the last one) is probed.
DependenceReport lipschitz_dependence_probe(const OdeState& x0, const DiscreteMeasure& mu0,
                                            const OdeState& y0, const DiscreteMeasure& nu0,
                                            const CoupledSystem& system, const GridSpec& grid,
                                            double horizon, std::size_t stride = 1);

}  // namespace mde

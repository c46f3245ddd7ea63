#pragma once

#include <functional>
#include <vector>

#include "mde/measure.hpp"
#include "mde/piecewise_linear.hpp"

namespace mde::oracles {

/// Closed-form solution of the barycenter-splitting field: mass left of the
/// barycenter B translates by -t, mass right of it by +t, and the B atom
/// splits so that each side carries |μ₀|/2. Throws kZeroMass.
DiscreteMeasure splitting_solution(const DiscreteMeasure& mu0, double t);

/// Self-similar density (φ⁻¹)'(x/t)/t of the cumulative field started from
/// δ₀, zero outside [tφ(0), tφ(1)]. Throws kNonInvertiblePhi unless φ is
/// strictly increasing on [0, 1].
double self_similar_density(const PiecewiseLinearFn& phi, double t, double x);

/// Cdf of the self-similar solution: φ⁻¹(x/t) clamped to [0, 1].
double self_similar_cdf(const PiecewiseLinearFn& phi, double t, double x);

struct SirSample {
  double t;
  double S;
  double I;
  double R;
};

using RateOfTime = std::function<double(double)>;

/// Classical SIR with time-dependent rates, fixed-step RK4:
///   S' = -(S/N) β(t) I,  I' = (S/N) β(t) I - ν(t) I,  R' = ν(t) I.
/// Samples at every multiple of h up to T (and at T).
std::vector<SirSample> classical_sir_rk4(double S0, double I0, double R0, const RateOfTime& beta,
                                         const RateOfTime& nu, double total_population, double horizon,
                                         double h);

std::vector<SirSample> classical_sir_rk4(double S0, double I0, double R0, double beta, double nu,
                                         double total_population, double horizon, double h);

/// Linear interpolation of an RK4 sample path at time t.
SirSample sample_at(const std::vector<SirSample>& path, double t);

/// Exhaustive search for the generalized Wasserstein value over submeasures
/// of μ and ν (at most 4 atoms each). Kept masses are quantized to multiples
/// q = 1/resolution², except that an atom may also be kept whole, in which
/// case its sub-q remainder travels with its last unit. For each choice the
/// cost is ∫|F̃_μ - F̃_ν| plus removed and created mass. The search is a
/// dynamic program over the running flux F̃_μ - F̃_ν along the line, which
/// visits every quantized choice implicitly. The result is within
/// q·(atoms)·(2 + spread) of the exact value. Throws kTooManyAtoms.
double gw_bruteforce(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int resolution);

}  // namespace mde::oracles

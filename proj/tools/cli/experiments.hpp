#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mde/dynamics.hpp"
#include "mde/measure.hpp"
#include "mde/piecewise_linear.hpp"
#include "cli/config.hpp"

namespace mde::cli {

/// sup_x |G_μ(x) - F(x)| for the normalized cdf of an atomic μ against a
/// continuous nondecreasing F, checked on both sides of every jump.
double sup_cdf_distance(const DiscreteMeasure& mu, const std::function<double(double)>& cdf);

/// W¹ at time T between the lattice solution under the barycenter field and
/// the closed-form splitting solution from the same μ₀.
double splitting_error(const DiscreteMeasure& mu0, const GridSpec& grid, double horizon);

/// Sup cdf distance at time T between the lattice solution from δ₀ under the
/// cumulative field and the self-similar profile.
double self_similar_error(const PiecewiseLinearFn& phi, const GridSpec& grid, double horizon);

struct SirComparison {
  std::vector<double> times;
  std::vector<double> oracle_infected;
  std::vector<double> scheme_infected;
  std::vector<double> gaps;  // |S - S_ref| + ||I| - I_ref| + |R - R_ref|
  double max_gap = 0.0;
  double max_conservation_drift = 0.0;
};

/// Runs the SIR scheme and RK4 (step min(1e-3, Δ_N/10)) side by side. β and ν
/// must be constant.
SirComparison classical_sir_comparison(const SirModel& model, const GridSpec& grid, double horizon);

struct ConvergencePoint {
  std::int64_t n;
  double error;
};

struct SlopeFit {
  std::optional<double> slope;  // empty when some fitted error is zero
  std::size_t points = 0;
  bool all_zero = false;
};

/// Least-squares slope of log(error) against log(N), dropping the smallest N.
SlopeFit fit_log_log_slope(std::vector<ConvergencePoint> points);

}  // namespace mde::cli

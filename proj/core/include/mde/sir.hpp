#pragma once

#include "mde/dynamics.hpp"
#include "mde/measure.hpp"
#include "mde/piecewise_linear.hpp"
#include "mde/pvf.hpp"

namespace mde::sir {

/// Parameters of the SIR model with a measure of infected over the variant
/// parameter α.
struct EpidemicParams {
  double total_population = 1.0;
  PiecewiseLinearFn beta = PiecewiseLinearFn::constant(0.0);  // infectivity β(α)
  PiecewiseLinearFn nu = PiecewiseLinearFn::constant(0.0);    // recovery ν(α)
  PvfSpec pvf = PvfSpec::barycenter_split();                  // mutation drift of I
  Interval alpha_box{-1.0, 1.0};
};

struct EpidemicState {
  double S = 0.0;
  DiscreteMeasure I;
  double R = 0.0;
};

/// (S / N_pop) Σ β(α_i) m_i: both -dS/dt and the total positive source of I.
double infection_pressure(double S, const DiscreteMeasure& I, const EpidemicParams& params);

/// Σ ν(α_i) m_i = dR/dt.
double recovery_flux(const DiscreteMeasure& I, const EpidemicParams& params);

/// Per-atom rate (S / N_pop) β(α_i) - ν(α_i); no inflow.
SignedSourceRates sir_source(const EpidemicState& state, const EpidemicParams& params);

/// Coupled system with ODE state x = (S, R) and measure I. The ODE and the
/// source share the same atomic sums, so S + |I| + R telescopes per step.
CoupledSystem assemble_system(const EpidemicParams& params);

double conserved_total(const EpidemicState& state);

/// Checks β, ν >= 0 on the α-box and N_pop >= S + |I| + R. Throws
/// kInvalidArgument naming the failing field.
void validate(const EpidemicParams& params, const EpidemicState& initial);

/// Support radius the variant distribution can reach by `horizon`.
double reachable_radius(const EpidemicParams& params, const EpidemicState& initial,
                        std::int64_t n, double horizon);

/// Smallest N whose box contains the reachable support and whose time step
/// keeps every mass nonnegative.
std::int64_t minimal_admissible_grid(const EpidemicParams& params, const EpidemicState& initial,
                                     double horizon);

/// Validates, rejects grids below minimal_admissible_grid (kGridOverflow) and
/// runs the Euler-LAS scheme. The ODE part of each snapshot is (S, R).
Trajectory simulate(const EpidemicParams& params, const EpidemicState& initial, const GridSpec& grid,
                    double horizon);

EpidemicState state_at(const Trajectory& trajectory, std::size_t index);

}  // namespace mde::sir

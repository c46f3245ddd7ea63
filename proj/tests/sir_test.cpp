#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mde/oracles.hpp"
#include "mde/sir.hpp"
#include "mde/transport.hpp"
#include "support/generators.hpp"

namespace mde::sir {
namespace {

EpidemicParams constant_rates(double beta, double nu) {
  EpidemicParams p;
  p.total_population = 1.0;
  p.beta = PiecewiseLinearFn::constant(beta);
  p.nu = PiecewiseLinearFn::constant(nu);
  p.pvf = PvfSpec::cumulative_phi(PiecewiseLinearFn::linear(0.0, -0.05, 1.0, 0.05));
  return p;
}

TEST(InfectionPressure, Examples) {
  EpidemicParams p = constant_rates(0.0, 0.1);
  EXPECT_EQ(infection_pressure(0.5, DiscreteMeasure::dirac(0.0, 0.3), p), 0.0);

  p = constant_rates(0.4, 0.1);
  p.total_population = 2.0;
  EXPECT_DOUBLE_EQ(infection_pressure(2.0, DiscreteMeasure::dirac(0.0, 0.3), p), 0.4 * 0.3);

  p.beta = PiecewiseLinearFn::linear(0.0, 0.0, 1.0, 1.0);
  p.total_population = 4.0;
  EXPECT_DOUBLE_EQ(infection_pressure(2.0, DiscreteMeasure::dirac(0.5, 2.0), p), 0.5);
}

TEST(RecoveryFlux, Examples) {
  EXPECT_EQ(recovery_flux(DiscreteMeasure::dirac(0.2, 0.7), constant_rates(0.3, 0.0)), 0.0);
  EXPECT_DOUBLE_EQ(recovery_flux(DiscreteMeasure({{-1.0, 0.2}, {1.0, 0.5}}), constant_rates(0.3, 0.25)),
                   0.25 * 0.7);
  EpidemicParams p = constant_rates(0.3, 0.0);
  p.nu = PiecewiseLinearFn({{-1.0, 0.3}, {0.0, 0.1}, {1.0, 0.3}});
  EXPECT_DOUBLE_EQ(recovery_flux(DiscreteMeasure({{-0.5, 0.25}, {0.5, 0.25}}), p), 0.2 * 0.5);
}

TEST(SirSource, Examples) {
  const auto p = constant_rates(0.3, 0.1);
  const DiscreteMeasure I({{-0.5, 0.01}, {0.5, 0.02}});
  for (const auto& r : sir_source({0.0, I, 0.0}, p).per_atom) EXPECT_DOUBLE_EQ(r.rate, -0.1);
  for (const auto& r : sir_source({1.0, I, 0.0}, constant_rates(0.2, 0.2)).per_atom) EXPECT_EQ(r.rate, 0.0);
  EXPECT_TRUE(sir_source({0.5, I, 0.0}, p).inflow.empty());
}

TEST(SirSource, RatesBalanceTheOdeFluxes) {
  std::mt19937_64 rng(83);
  EpidemicParams p = constant_rates(0.0, 0.0);
  p.beta = PiecewiseLinearFn({{-2.0, 0.5}, {0.0, 0.1}, {3.0, 0.9}});
  p.nu = PiecewiseLinearFn({{-2.0, 0.05}, {1.0, 0.4}});
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto I = testing::random_measure(rng, testing::random_int(rng, 1, 10), -3.0, 3.0, 0.0, 0.1);
    const double S = frac(rng);
    const auto rates = sir_source({S, I, 0.0}, p);
    double net = 0.0;
    for (std::size_t k = 0; k < I.size(); ++k) net += rates.per_atom[k].rate * I.atoms()[k].mass;
    EXPECT_NEAR(net, infection_pressure(S, I, p) - recovery_flux(I, p), 1e-12);
  }
}

TEST(ConservedTotal, InitialState) {
  EXPECT_DOUBLE_EQ(conserved_total({99.0, DiscreteMeasure::dirac(0.0), 0.0}), 100.0);
}

TEST(Simulate, ConservedPerStepAndOverTheRun) {
  EpidemicParams p = constant_rates(0.0, 0.0);
  p.beta = PiecewiseLinearFn({{-1.0, 0.6}, {0.0, 0.3}, {1.0, 0.5}});
  p.nu = PiecewiseLinearFn({{-1.0, 0.2}, {1.0, 0.05}});
  const EpidemicState initial{0.95, DiscreteMeasure({{-0.1, 0.03}, {0.2, 0.02}}), 0.0};
  const GridSpec grid(20);
  const auto traj = simulate(p, initial, grid, 10.0);
  const double total = conserved_total(initial);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto state = state_at(traj, k);
    EXPECT_NEAR(conserved_total(state), total, 1e-10 * total);
    if (k > 0) EXPECT_NEAR(conserved_total(state), conserved_total(state_at(traj, k - 1)), 1e-12 * total);
    EXPECT_GE(state.S, 0.0);
    EXPECT_GE(state.R, 0.0);
  }
}

TEST(Simulate, NoInfectionMeansPureDecay) {
  const auto p = constant_rates(0.0, 0.2);
  const EpidemicState initial{0.9, DiscreteMeasure::dirac(0.0, 0.1), 0.0};
  const auto traj = simulate(p, initial, GridSpec(100), 5.0);
  const auto last = state_at(traj, traj.states.size() - 1);
  EXPECT_EQ(last.S, 0.9);
  EXPECT_NEAR(last.I.total_mass(), 0.1 * std::exp(-0.2 * 5.0), 1e-3 * 0.1);
  EXPECT_NEAR(last.R, 0.1 - last.I.total_mass(), 1e-14);
}

TEST(Simulate, ConstantRatesTrackClassicalSir) {
  const auto p = constant_rates(0.3, 0.1);
  const EpidemicState initial{0.99, DiscreteMeasure::dirac(0.0, 0.01), 0.0};
  const auto traj = simulate(p, initial, GridSpec(50), 20.0);
  const auto ref = oracles::classical_sir_rk4(0.99, 0.01, 0.0, 0.3, 0.1, 1.0, 20.0, 1e-3);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto s = state_at(traj, k);
    const auto r = oracles::sample_at(ref, traj.times[k]);
    EXPECT_NEAR(s.S, r.S, 0.01);
    EXPECT_NEAR(s.I.total_mass(), r.I, 0.01);
  }
}

EpidemicParams symmetric_params(PvfSpec pvf) {
  EpidemicParams p;
  p.total_population = 1.0;
  p.beta = PiecewiseLinearFn({{-2.0, 0.1}, {0.0, 0.4}, {2.0, 0.1}});
  p.nu = PiecewiseLinearFn({{-2.0, 0.3}, {0.0, 0.1}, {2.0, 0.3}});
  p.pvf = std::move(pvf);
  return p;
}

TEST(Simulate, SymmetryIsPreservedUnderTheSplittingField) {
  const auto p = symmetric_params(PvfSpec::barycenter_split());
  const EpidemicState initial{0.97, DiscreteMeasure({{-0.5, 0.01}, {0.0, 0.01}, {0.5, 0.01}}), 0.0};
  const auto traj = simulate(p, initial, GridSpec(20), 5.0);
  for (const auto& s : traj.states) {
    EXPECT_LE(tv_distance(s.measure, reflect(s.measure)), 1e-9 * s.measure.total_mass());
  }
}

TEST(Simulate, CumulativeFieldSymmetryBrokenOnlyByLeftSnapping) {
  // Velocities snap to the left end of their cell, which shifts the mean
  // velocity by half a cell; the reflected solution stays within that drift.
  const auto p = symmetric_params(
      PvfSpec::cumulative_phi(PiecewiseLinearFn({{0.0, -0.3}, {0.25, -0.05}, {0.75, 0.05}, {1.0, 0.3}})));
  const EpidemicState initial{0.97, DiscreteMeasure({{-0.5, 0.01}, {0.0, 0.01}, {0.5, 0.01}}), 0.0};
  for (std::int64_t n : {20, 40}) {
    const GridSpec grid(n);
    const auto traj = simulate(p, initial, grid, 5.0);
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      const auto& mu = traj.states[k].measure;
      const double drift = traj.times[k] * grid.velocity_step() + grid.space_step();
      EXPECT_LE(wasserstein_1d(mu, reflect(mu)), 2.0 * drift * mu.total_mass());
    }
  }
}

TEST(Simulate, RejectsTooCoarseGrid) {
  const auto p = constant_rates(0.3, 0.1);
  const EpidemicState initial{0.99, DiscreteMeasure::dirac(0.0, 0.01), 0.0};
  EpidemicParams wide = p;
  wide.alpha_box = {-4.0, 4.0};
  const auto n_min = minimal_admissible_grid(wide, initial, 10.0);
  EXPECT_GE(n_min, 4);
  try {
    simulate(wide, initial, GridSpec(n_min - 1), 10.0);
    FAIL() << "expected GridOverflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGridOverflow);
    EXPECT_NE(std::string(e.what()).find(std::to_string(n_min)), std::string::npos);
  }
  EXPECT_NO_THROW(simulate(wide, initial, GridSpec(n_min), 10.0));
}

TEST(Validate, RejectsBadParameters) {
  const EpidemicState initial{0.99, DiscreteMeasure::dirac(0.0, 0.01), 0.0};
  EpidemicParams p = constant_rates(0.3, 0.1);
  p.beta = PiecewiseLinearFn::linear(-1.0, -0.1, 1.0, 0.3);
  EXPECT_THROW(validate(p, initial), Error);
  p = constant_rates(0.3, 0.1);
  p.total_population = 0.5;
  EXPECT_THROW(validate(p, initial), Error);
  EXPECT_NO_THROW(validate(constant_rates(0.3, 0.1), initial));
}

}  // namespace
}  // namespace mde::sir

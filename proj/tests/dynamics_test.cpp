#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mde/dynamics.hpp"
#include "mde/oracles.hpp"
#include "mde/transport.hpp"
#include "support/generators.hpp"

namespace mde {
namespace {

const PvfSpec kSplit = PvfSpec::barycenter_split();
const PvfSpec kStill = PvfSpec::cumulative_phi(PiecewiseLinearFn::constant(0.0));
const PvfSpec kSpread = PvfSpec::cumulative_phi(PiecewiseLinearFn::linear(0.0, -0.5, 1.0, 0.5));

CoupledSystem decay_system(double nu) {
  CoupledSystem system{nullptr, kStill, nullptr};
  system.source = [nu](const DiscreteMeasure& mu, const OdeState&) {
    SignedSourceRates s;
    for (const auto& a : mu.atoms()) s.per_atom.push_back({a.position, -nu});
    return s;
  };
  return system;
}

TEST(LasStep, DiracSplitsIntoTwoHalves) {
  for (std::int64_t n : {2, 3, 10, 64}) {
    GridSpec grid(n);
    const auto next = las_step(DiscreteMeasure::dirac(0.0), kSplit, grid);
    const double dt = grid.time_step();
    EXPECT_EQ(next, DiscreteMeasure({{-dt, 0.5}, {dt, 0.5}})) << "N = " << n;
  }
}

TEST(LasStep, ZeroFieldIsIdentity) {
  std::mt19937_64 rng(67);
  GridSpec grid(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto mu = testing::random_lattice_measure(rng, grid, testing::random_int(rng, 1, 10), -432, 432);
    EXPECT_EQ(las_step(mu, kStill, grid), mu);
  }
}

TEST(LasStep, ConservesMassAndStaysOnLattice) {
  std::mt19937_64 rng(71);
  for (std::int64_t n : {4, 10, 25}) {
    GridSpec grid(n);
    for (int trial = 0; trial < 30; ++trial) {
      auto mu = testing::random_lattice_measure(rng, grid, testing::random_int(rng, 1, 10), -2 * n * n, 2 * n * n);
      for (const auto& pvf : {kSplit, kSpread}) {
        const auto next = las_step(mu, pvf, grid);
        EXPECT_NEAR(next.total_mass(), mu.total_mass(), 1e-12 * mu.total_mass());
        for (const auto& a : next.atoms()) {
          const std::int64_t i = grid.node_index(a.position);
          EXPECT_EQ(a.position, static_cast<double>(i) / static_cast<double>(n * n));
        }
      }
    }
  }
}

TEST(LasStep, OutOfBoxOverflows) {
  GridSpec grid(2);
  try {
    las_step(DiscreteMeasure::dirac(2.0), PvfSpec::cumulative_phi(PiecewiseLinearFn::constant(1.0)), grid);
    FAIL() << "expected GridOverflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGridOverflow);
  }
}

TEST(LasInterpolate, EndpointsAndMidpoint) {
  GridSpec grid(10);
  const auto mu = DiscreteMeasure::dirac(0.0);
  EXPECT_EQ(las_interpolate(mu, kSplit, grid, 0.0), mu);
  EXPECT_EQ(las_interpolate(mu, kSplit, grid, grid.time_step()), las_step(mu, kSplit, grid));
  EXPECT_EQ(las_interpolate(mu, kSplit, grid, 0.05), DiscreteMeasure({{-0.05, 0.5}, {0.05, 0.5}}));
  try {
    las_interpolate(mu, kSplit, grid, 0.2);
    FAIL() << "expected InvalidTau";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidTau);
  }
  EXPECT_THROW(las_interpolate(mu, kSplit, grid, -1e-9), Error);
}

TEST(LasTrajectory, SplittingReachesTheClosedForm) {
  for (std::int64_t n : {10, 20, 40}) {
    GridSpec grid(n);
    const auto traj = las_trajectory(DiscreteMeasure::dirac(0.0), kSplit, grid, 1.0);
    EXPECT_EQ(traj.times.size(), static_cast<std::size_t>(n) + 1);
    EXPECT_EQ(traj.times.back(), 1.0);
    const auto exact = oracles::splitting_solution(DiscreteMeasure::dirac(0.0), 1.0);
    EXPECT_LE(wasserstein_1d(traj.final_state().measure, exact), 2.0 / static_cast<double>(n));
    EXPECT_EQ(support_bound_violations(traj, 0.0, 1.0), 0u);
  }
}

TEST(LasTrajectory, SelfSimilarSpreadingFromDirac) {
  const auto phi = PiecewiseLinearFn::linear(0.0, -0.5, 1.0, 0.5);
  for (std::int64_t n : {10, 20, 40}) {
    GridSpec grid(n);
    const auto mu = las_trajectory(DiscreteMeasure::dirac(0.0), kSpread, grid, 1.0).final_state().measure;
    double gap = 0.0;
    for (const auto& a : mu.atoms()) {
      const double exact = oracles::self_similar_cdf(phi, 1.0, a.position);
      gap = std::max({gap, std::abs(normalized_cdf(mu, a.position) - exact),
                      std::abs(cdf_left(mu, a.position) / mu.total_mass() - exact)});
    }
    EXPECT_LE(gap, 5.0 / static_cast<double>(n)) << "N = " << n;
  }
}

TEST(LasTrajectory, ZeroHorizonReturnsDiscretizedStart) {
  GridSpec grid(10);
  const auto traj = las_trajectory(DiscreteMeasure::dirac(0.015), kSplit, grid, 0.0);
  ASSERT_EQ(traj.states.size(), 1u);
  EXPECT_EQ(traj.states[0].measure, DiscreteMeasure::dirac(0.01));
}

TEST(LasTrajectory, PartialFinalStepInterpolates) {
  GridSpec grid(10);
  const auto traj = las_trajectory(DiscreteMeasure::dirac(0.0), kSplit, grid, 0.25);
  ASSERT_EQ(traj.times.size(), 4u);
  EXPECT_EQ(traj.times.back(), 0.25);
  const auto& last = traj.final_state().measure;
  ASSERT_EQ(last.size(), 2u);
  EXPECT_NEAR(last.atoms()[0].position, -0.25, 1e-12);
  EXPECT_NEAR(last.atoms()[1].position, 0.25, 1e-12);
  for (std::size_t k = 1; k < traj.times.size(); ++k) EXPECT_LT(traj.times[k - 1], traj.times[k]);
}

TEST(EulerLas, NoSourceNoOdeMatchesLas) {
  GridSpec grid(8);
  std::mt19937_64 rng(73);
  const auto mu = testing::random_lattice_measure(rng, grid, 6, -64, 64);
  const CoupledSystem system{nullptr, kSplit, nullptr};
  const SystemState next = euler_las_step({{1.5, -2.0}, mu}, system, grid);
  EXPECT_EQ(next.measure, las_step(mu, kSplit, grid));
  EXPECT_EQ(next.x, (OdeState{1.5, -2.0}));

  const CoupledSystem still{nullptr, kStill, nullptr};
  const auto traj = euler_las_trajectory({3.0}, mu, still, grid, 2.0);
  for (const auto& s : traj.states) {
    EXPECT_EQ(s.measure, mu);
    EXPECT_EQ(s.x, OdeState{3.0});
  }
}

TEST(EulerLas, UniformDecayFollowsScalarEuler) {
  const double nu = 0.7;
  for (std::int64_t n : {10, 40, 160}) {
    GridSpec grid(n);
    const DiscreteMeasure mu0({{-0.5, 0.4}, {0.25, 0.6}});
    const auto traj = euler_las_trajectory({}, mu0, decay_system(nu), grid, 2.0);
    for (std::size_t l = 0; l < traj.states.size(); ++l) {
      const double factor = std::pow(1.0 - grid.time_step() * nu, static_cast<double>(l));
      EXPECT_NEAR(traj.states[l].measure.total_mass(), factor, 1e-12);
      EXPECT_NEAR(traj.states[l].measure.atoms()[0].mass, 0.4 * factor, 1e-12);
    }
    const double gap = std::abs(traj.final_state().measure.total_mass() - std::exp(-nu * 2.0));
    EXPECT_LE(gap, 2.0 * nu * nu / static_cast<double>(n));
  }
}

TEST(EulerLas, InterpolationWeightsSourceByTau) {
  GridSpec grid(10);
  const auto system = decay_system(2.0);
  const SystemState start{{}, DiscreteMeasure::dirac(0.0)};
  const auto mid = euler_las_interpolate(start, system, grid, 0.04);
  EXPECT_NEAR(mid.measure.total_mass(), 1.0 - 0.04 * 2.0, 1e-15);
  EXPECT_EQ(euler_las_interpolate(start, system, grid, 0.0).measure, start.measure);
  EXPECT_EQ(euler_las_interpolate(start, system, grid, 0.1).measure,
            euler_las_step(start, system, grid).measure);
}

TEST(EulerLas, InflowIsDiscretizedAndScaled) {
  GridSpec grid(10);
  CoupledSystem system{nullptr, kStill, nullptr};
  system.source = [](const DiscreteMeasure& mu, const OdeState&) {
    SignedSourceRates s;
    for (const auto& a : mu.atoms()) s.per_atom.push_back({a.position, 0.0});
    s.inflow = DiscreteMeasure::dirac(0.015, 3.0);
    return s;
  };
  const auto next = euler_las_step({{}, DiscreteMeasure::dirac(0.0)}, system, grid);
  EXPECT_EQ(next.measure, DiscreteMeasure({{0.0, 1.0}, {0.01, 0.1 * 3.0}}));
}

TEST(EulerLas, ExplicitEulerForTheOde) {
  GridSpec grid(4);
  CoupledSystem system{nullptr, kStill, nullptr};
  system.ode_rhs = [](const OdeState& x, const DiscreteMeasure& mu) {
    return OdeState{-x[0] * mu.total_mass()};
  };
  const auto traj = euler_las_trajectory({1.0}, DiscreteMeasure::dirac(0.0, 2.0), system, grid, 1.0);
  EXPECT_DOUBLE_EQ(traj.final_state().x[0], std::pow(1.0 - 0.25 * 2.0, 4));
}

TEST(EulerLas, PositivityGuard) {
  GridSpec grid(2);
  try {
    euler_las_step({{}, DiscreteMeasure::dirac(0.0)}, decay_system(2.0), grid);
    FAIL() << "expected PositivityViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPositivityViolation);
  }
  EXPECT_NO_THROW(euler_las_step({{}, DiscreteMeasure::dirac(0.0)}, decay_system(1.9), grid));
}

TEST(EulerLas, MisalignedSourceRejected) {
  GridSpec grid(10);
  CoupledSystem system{nullptr, kStill, nullptr};
  system.source = [](const DiscreteMeasure&, const OdeState&) {
    return SignedSourceRates{{{0.5, -1.0}}, {}};
  };
  EXPECT_THROW(euler_las_step({{}, DiscreteMeasure::dirac(0.0)}, system, grid), Error);
}

TEST(EulerLas, SemigroupRestartOnTheLattice) {
  GridSpec grid(20);
  const auto system = decay_system(0.3);
  const DiscreteMeasure mu0({{-0.2, 0.5}, {0.3, 0.5}});
  const auto direct = euler_las_trajectory({}, mu0, system, grid, 2.0);
  const auto first = euler_las_trajectory({}, mu0, system, grid, 1.0);
  const auto second = euler_las_trajectory({}, first.final_state().measure, system, grid, 1.0);
  EXPECT_LE(generalized_wasserstein(direct.final_state().measure, second.final_state().measure).value,
            grid.time_step());
}

TEST(SupportGrowthBound, FormulaAndMonotonicity) {
  EXPECT_NEAR(support_growth_bound(1.0, 1.0, 10, 1.0), std::exp(1.1) * 2.01 - 1.0, 1e-12);
  EXPECT_NEAR(support_growth_bound(1.0, 1.0, 10, 1.0), 5.0384, 1e-3);
  EXPECT_NEAR(support_growth_bound(2.0, 0.0, 10, 1.0), std::exp(0.1) * 3.01 - 1.0, 1e-12);
  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double r = u(rng), c = u(rng), t = u(rng), d = u(rng) + 1e-3;
    const double base = support_growth_bound(r, c, 10, t);
    EXPECT_LT(base, support_growth_bound(r + d, c, 10, t));
    EXPECT_LE(base, support_growth_bound(r, c + d, 10, t));
    EXPECT_LE(base, support_growth_bound(r, c, 10, t + d));
    EXPECT_LE(bounded_speed_radius(r, c, 10, t), base + 1e-12);
  }
}

TEST(LipschitzProbe, IdenticalDataIsDegenerate) {
  GridSpec grid(10);
  const CoupledSystem system{nullptr, kSplit, nullptr};
  const auto report = lipschitz_dependence_probe({}, DiscreteMeasure::dirac(0.0), {}, DiscreteMeasure::dirac(0.0),
                                                 system, grid, 1.0);
  EXPECT_TRUE(report.degenerate);
}

TEST(LipschitzProbe, PerturbedDiracStaysBounded) {
  double previous = -1.0;
  for (std::int64_t n : {10, 20}) {
    GridSpec grid(n);
    const CoupledSystem system{nullptr, kSplit, nullptr};
    const auto report =
        lipschitz_dependence_probe({}, DiscreteMeasure::dirac(0.0), {}, DiscreteMeasure::dirac(grid.space_step()),
                                   system, grid, 1.0, 2);
    EXPECT_FALSE(report.degenerate);
    EXPECT_TRUE(std::isfinite(report.empirical_rate));
    for (double r : report.ratios) EXPECT_TRUE(std::isfinite(r));
    if (previous >= 0.0) EXPECT_LE(std::abs(report.empirical_rate - previous), 1.0);
    previous = report.empirical_rate;
  }
}

}  // namespace
}  // namespace mde

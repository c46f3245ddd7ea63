#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mde/measure.hpp"
#include "mde/transport.hpp"
#include "support/generators.hpp"

namespace mde {
namespace {

TEST(DiscreteMeasure, NormalizesAtoms) {
  DiscreteMeasure mu({{1.0, 0.5}, {-1.0, 0.25}, {1.0, 0.25}, {3.0, 0.0}});
  ASSERT_EQ(mu.size(), 2u);
  EXPECT_EQ(mu.atoms()[0], (Atom{-1.0, 0.25}));
  EXPECT_EQ(mu.atoms()[1], (Atom{1.0, 0.75}));
}

TEST(DiscreteMeasure, RejectsNegativeMass) {
  EXPECT_THROW(DiscreteMeasure({{0.0, -1.0}}), Error);
  EXPECT_THROW(DiscreteMeasure({{NAN, 1.0}}), Error);
}

TEST(TotalMass, Examples) {
  EXPECT_EQ(total_mass(DiscreteMeasure{}), 0.0);
  EXPECT_EQ(total_mass(DiscreteMeasure::dirac(0.0)), 1.0);
  EXPECT_DOUBLE_EQ(total_mass(DiscreteMeasure({{-1.0, 0.5}, {1.0, 0.5}})), 1.0);
}

TEST(SupportBounds, Examples) {
  EXPECT_EQ(support_bounds(DiscreteMeasure::dirac(0.0)), (Interval{0.0, 0.0}));
  EXPECT_EQ(support_bounds(DiscreteMeasure({{-2.0, 0.1}, {3.0, 0.9}})), (Interval{-2.0, 3.0}));
  try {
    support_bounds(DiscreteMeasure({{5.0, 0.0}}));
    FAIL() << "expected EmptyMeasure";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyMeasure);
  }
}

TEST(Cdf, Examples) {
  const auto delta = DiscreteMeasure::dirac(0.0);
  EXPECT_EQ(cdf(delta, -0.5), 0.0);
  EXPECT_EQ(cdf(delta, 0.0), 1.0);
  EXPECT_EQ(cdf_left(delta, 0.0), 0.0);
  EXPECT_EQ(cdf(DiscreteMeasure({{-1.0, 0.5}, {1.0, 0.5}}), 0.0), 0.5);
}

TEST(Cdf, MonotoneRightContinuous) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto mu = testing::random_measure(rng, testing::random_int(rng, 1, 12), -5.0, 5.0);
    double prev = 0.0;
    for (double x = -6.0; x <= 6.0; x += 0.01) {
      const double f = cdf(mu, x);
      EXPECT_GE(f, prev);
      prev = f;
    }
    for (const auto& a : mu.atoms()) {
      EXPECT_EQ(cdf(mu, a.position), cdf(mu, std::nextafter(a.position, 1e9)));
      EXPECT_NEAR(cdf(mu, a.position) - cdf_left(mu, a.position), a.mass, 1e-15);
    }
    EXPECT_EQ(normalized_cdf(mu, support_bounds(mu).upper), 1.0);
  }
}

TEST(NormalizedCdf, Examples) {
  EXPECT_EQ(normalized_cdf(DiscreteMeasure::dirac(0.0, 2.0), 0.0), 1.0);
  EXPECT_EQ(normalized_cdf(DiscreteMeasure({{-1.0, 1.0}, {1.0, 3.0}}), 0.0), 0.25);
  try {
    normalized_cdf(DiscreteMeasure{}, 0.0);
    FAIL() << "expected ZeroMass";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kZeroMass);
  }
}

TEST(GridSpec, StepsAreConsistent) {
  for (std::int64_t n : {1, 2, 3, 7, 10, 80, 200}) {
    GridSpec grid(n);
    EXPECT_EQ(grid.space_denominator(), grid.time_denominator() * grid.velocity_denominator());
    EXPECT_EQ(grid.max_space_index(), n * n * n);
    EXPECT_EQ(grid.space_node(grid.max_space_index()), static_cast<double>(n));
    EXPECT_EQ(grid.velocity_node(grid.max_velocity_index()), static_cast<double>(n));
  }
  EXPECT_THROW(GridSpec(0), Error);
}

TEST(GridSpec, NodesSitInTheirOwnCell) {
  for (std::int64_t n : {3, 10, 37, 100}) {
    GridSpec grid(n);
    for (std::int64_t i = -3000; i <= 3000; i += 7) {
      EXPECT_EQ(grid.space_cell(grid.space_node(i)), i);
      EXPECT_EQ(grid.node_index(grid.space_node(i)), i);
      EXPECT_EQ(grid.velocity_cell(grid.velocity_node(i)), i);
    }
  }
}

TEST(GridSpec, OffGridPositionRejected) {
  GridSpec grid(10);
  try {
    grid.node_index(0.015);
    FAIL() << "expected OffGrid";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOffGrid);
  }
}

TEST(DiscretizeSpace, AtomOnNodeUnchanged) {
  const auto mu = DiscreteMeasure::dirac(0.0);
  EXPECT_EQ(discretize_space(mu, GridSpec(10)), mu);
}

TEST(DiscretizeSpace, AtomSnapsToLeftCellEnd) {
  GridSpec grid(10);
  const auto out = discretize_space(DiscreteMeasure::dirac(0.015), grid);
  ASSERT_EQ(out.size(), 1u);
  const double node = out.atoms()[0].position;
  // Cell membership: 0.015 ∈ [node, node + 1/100).
  EXPECT_LE(node, 0.015);
  EXPECT_LT(0.015, node + 0.01);
  EXPECT_EQ(node, 1.0 / 100.0);
  EXPECT_EQ(out.atoms()[0].mass, 1.0);
}

TEST(DiscretizeSpace, OutsideBoxOverflows) {
  GridSpec grid(2);
  try {
    discretize_space(DiscreteMeasure::dirac(2.5), grid);
    FAIL() << "expected GridOverflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGridOverflow);
  }
  EXPECT_NO_THROW(discretize_space(DiscreteMeasure::dirac(-2.0), grid));
}

TEST(DiscretizeSpace, ConservesMassAndStaysClose) {
  std::mt19937_64 rng(11);
  for (std::int64_t n : {5, 10, 20, 40}) {
    GridSpec grid(n);
    for (int trial = 0; trial < 40; ++trial) {
      const auto mu = testing::random_measure(rng, testing::random_int(rng, 1, 20), -4.0, 4.0);
      const auto snapped = discretize_space(mu, grid);
      EXPECT_NEAR(snapped.total_mass(), mu.total_mass(), 1e-15 * mu.size());
      // Each atom moves left by less than one cell, so W¹ <= Δx |μ|.
      EXPECT_LE(wasserstein_1d(snapped, mu), grid.space_step() * mu.total_mass());
      for (const auto& a : snapped.atoms()) EXPECT_NO_THROW(grid.node_index(a.position));
    }
  }
}

TEST(PushForward, Examples) {
  const DiscreteMeasure mu({{-1.0, 0.5}, {1.0, 0.5}});
  EXPECT_EQ(push_forward(mu, [](double x) { return x; }), mu);
  EXPECT_EQ(push_forward(DiscreteMeasure::dirac(0.0), [](double x) { return x + 0.3; }),
            DiscreteMeasure::dirac(0.3));
  EXPECT_EQ(push_forward(mu, [](double) { return 0.0; }), DiscreteMeasure::dirac(0.0, 1.0));
}

TEST(PushForward, PreservesMass) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto mu = testing::random_measure(rng, testing::random_int(rng, 1, 10), -2.0, 2.0);
    const auto image = push_forward(mu, [](double x) { return std::round(x); });
    EXPECT_NEAR(image.total_mass(), mu.total_mass(), 1e-14);
  }
}

TEST(TvDistance, Examples) {
  const DiscreteMeasure mu({{-1.0, 0.3}, {2.0, 0.7}});
  EXPECT_EQ(tv_distance(mu, mu), 0.0);
  EXPECT_EQ(tv_distance(DiscreteMeasure::dirac(0.0), DiscreteMeasure::dirac(0.0, 2.0)), 1.0);
  EXPECT_EQ(tv_distance(DiscreteMeasure::dirac(0.0), DiscreteMeasure::dirac(1.0)), 2.0);
}

}  // namespace
}  // namespace mde

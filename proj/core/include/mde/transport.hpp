#pragma once

#include <vector>

#include "mde/measure.hpp"

namespace mde {

class VelocityMeasure;

struct PlanEntry {
  double source;
  double target;
  double mass;
};

/// Partial transport plan: a matched part plus, per atom, the mass that is
/// removed from the source or created at the target.
struct TransportPlan {
  std::vector<PlanEntry> matched;
  std::vector<Atom> unmatched_source;
  std::vector<Atom> unmatched_target;

  double matched_mass() const;
  double transport_cost() const;  // Σ |source - target| · mass
  double removed_mass() const;
  double added_mass() const;
};

struct GwResult {
  double value = 0.0;
  TransportPlan plan;
  double kept_source_mass = 0.0;
  double kept_target_mass = 0.0;
};

/// Absolute tolerance on |μ| - |ν| accepted by wasserstein_1d.
inline constexpr double kMassMatchTolerance = 1e-12;

/// W¹ on the line, ∫|F_μ - F_ν| dx summed exactly over the merged breakpoints.
/// Throws kMassMismatch if the total masses differ by more than
/// kMassMatchTolerance.
double wasserstein_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Monotone (north-west corner) coupling of two measures. If the totals differ
/// the coupling stops once the lighter side is exhausted.
std::vector<PlanEntry> monotone_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Generalized Wasserstein distance with unit cost for removed and created
/// mass: min Σ|x_i - y_j| f_ij + (|μ| - Σf) + (|ν| - Σf) over sub-couplings f.
/// Solved as a min-cost flow with successive shortest paths; the matched part
/// of the returned plan is the monotone coupling of the kept marginals.
GwResult generalized_wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

TransportPlan optimal_partial_plan(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Velocity cost of the operator between two velocity measures, restricted to
/// the W^g-optimal kept base masses, the monotone base coupling between them,
/// and for each matched base sliver the monotone coupling of the conditional
/// velocity laws. Upper bound for the general infimum.
double velocity_operator_cost(const VelocityMeasure& v1, const VelocityMeasure& v2);

}  // namespace mde

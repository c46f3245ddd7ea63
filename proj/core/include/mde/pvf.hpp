#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mde/measure.hpp"
#include "mde/piecewise_linear.hpp"

namespace mde {

struct VelocityAtom {
  double position;
  double velocity;
  double mass;

  friend bool operator==(const VelocityAtom&, const VelocityAtom&) = default;
};

/// Finite atomic measure on position-velocity pairs, sorted by (position,
/// velocity) with duplicates merged and zero masses dropped.
class VelocityMeasure {
 public:
  VelocityMeasure() = default;
  /// Throws kInvalidVelocityMeasure on negative or non-finite entries.
  explicit VelocityMeasure(std::vector<VelocityAtom> atoms);

  std::span<const VelocityAtom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  double total_mass() const;

  /// Velocity distribution (unnormalized) of the atoms sitting at `position`.
  DiscreteMeasure conditional(double position) const;

  friend bool operator==(const VelocityMeasure&, const VelocityMeasure&) = default;

 private:
  std::vector<VelocityAtom> atoms_;
};

/// One piece of the exact conditional velocity law of the cumulative PVF:
/// `mass` spread uniformly over [velocity_lo, velocity_hi] at `position`.
struct VelocityPiece {
  double position;
  double velocity_lo;
  double velocity_hi;
  double mass;
};

enum class PvfKind { kBarycenterSplit, kCumulativePhi };

struct PvfSpec {
  PvfKind kind = PvfKind::kBarycenterSplit;
  std::optional<PiecewiseLinearFn> phi;
  /// C in sup|v| <= C (1 + sup|x|).
  double support_growth_constant = 1.0;

  static PvfSpec barycenter_split(double c = 1.0);
  /// Throws kNonMonotonePhi if phi decreases somewhere on [0, 1]. When `c` is
  /// omitted it defaults to max |phi| on [0, 1].
  static PvfSpec cumulative_phi(PiecewiseLinearFn phi, std::optional<double> c = std::nullopt);

  /// Uniform bound on |v| produced by the field, independent of the measure.
  double speed_bound() const;
};

DiscreteMeasure base_projection(const VelocityMeasure& v);

/// The operator A^v_N: velocities snap to the left end of their cell
/// [v_j, v_j + 1/N). Positions must already be lattice nodes (kOffGrid
/// otherwise); velocities outside [-N, N) raise kGridOverflow.
VelocityMeasure discretize_velocity(const VelocityMeasure& v, const GridSpec& grid);

/// sup{x : G_μ(x) <= 1/2} for the normalized cdf G_μ. Throws kZeroMass.
double barycenter(const DiscreteMeasure& mu);

/// Mass left of the barycenter moves with velocity -1, mass right of it with
/// +1, and the barycenter atom splits so that each velocity carries |μ|/2.
VelocityMeasure pvf_barycenter(const DiscreteMeasure& mu);

/// Exact conditional velocity laws of the cumulative field: each atom's cdf
/// jump [G(x⁻), G(x)] pushed through phi, cut at phi's breakpoints and, when
/// `grid` is given, also at every velocity-cell boundary.
std::vector<VelocityPiece> cumulative_velocity_pieces(const DiscreteMeasure& mu,
                                                      const PiecewiseLinearFn& phi,
                                                      const std::optional<GridSpec>& grid = std::nullopt);

/// Cumulative field with each piece atomized at its velocity midpoint.
VelocityMeasure pvf_cumulative(const DiscreteMeasure& mu, const PiecewiseLinearFn& phi,
                               const std::optional<GridSpec>& grid = std::nullopt);

VelocityMeasure evaluate_pvf(const PvfSpec& spec, const DiscreteMeasure& mu);

/// A^v_N(V[μ]) for a measure supported on lattice nodes.
VelocityMeasure evaluate_discretized_pvf(const PvfSpec& spec, const DiscreteMeasure& mu,
                                         const GridSpec& grid);

/// Checks sup|v| <= C (1 + sup|x|) on V[μ].
bool support_sublinearity_check(const PvfSpec& spec, const DiscreteMeasure& mu);

}  // namespace mde

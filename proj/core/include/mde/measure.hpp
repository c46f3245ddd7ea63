#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mde/error.hpp"

namespace mde {

struct Atom {
  double position;
  double mass;

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Interval {
  double lower;
  double upper;

  double radius() const;  // max(|lower|, |upper|)
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite nonnegative atomic measure on the real line.
///
/// Atoms are kept sorted by strictly increasing position; atoms sharing a
/// position are merged by adding their masses and zero-mass atoms are dropped.
/// Instances are immutable once built.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;

  /// Normalizes `atoms` (sort, merge, drop zeros). Throws kInvalidArgument on
  /// negative or non-finite masses and non-finite positions.
  explicit DiscreteMeasure(std::vector<Atom> atoms);

  static DiscreteMeasure dirac(double position, double mass = 1.0);

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  double total_mass() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

  /// μ(]-∞, x]).
  double cdf(double x) const;
  /// μ(]-∞, x[), the left limit of the cdf at x.
  double cdf_left(double x) const;

  /// Cumulative mass up to and including atom `index`.
  double cumulative_at(std::size_t index) const { return cumulative_[index]; }

  friend bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    return a.atoms_ == b.atoms_;
  }

 private:
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

/// Lattice for the schemes: time step 1/N, velocity step 1/N, space step 1/N²
/// and truncation box [-N, N]. Nodes are addressed by integer index; the node
/// value is always the canonical double(i) / double(denominator).
class GridSpec {
 public:
  explicit GridSpec(std::int64_t n);

  std::int64_t n() const { return n_; }
  double time_step() const { return 1.0 / static_cast<double>(n_); }
  double velocity_step() const { return 1.0 / static_cast<double>(n_); }
  double space_step() const { return 1.0 / static_cast<double>(space_denominator()); }

  std::int64_t time_denominator() const { return n_; }
  std::int64_t velocity_denominator() const { return n_; }
  std::int64_t space_denominator() const { return n_ * n_; }

  /// Largest |i| with |x_i| <= N, i.e. N³.
  std::int64_t max_space_index() const { return n_ * n_ * n_; }
  /// Largest |j| with |v_j| <= N, i.e. N².
  std::int64_t max_velocity_index() const { return n_ * n_; }

  double space_node(std::int64_t i) const {
    return static_cast<double>(i) / static_cast<double>(space_denominator());
  }
  double velocity_node(std::int64_t j) const {
    return static_cast<double>(j) / static_cast<double>(velocity_denominator());
  }

  /// Index of the left-closed cell [x_i, x_i + Δx) containing `x`.
  std::int64_t space_cell(double x) const;
  /// Index of the left-closed cell [v_j, v_j + Δv) containing `v`.
  std::int64_t velocity_cell(double v) const;

  /// Exact index of a position that sits on a node; throws kOffGrid otherwise.
  std::int64_t node_index(double x) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::int64_t n_;
};

double total_mass(const DiscreteMeasure& mu);

/// [min, max] atom position. Throws kEmptyMeasure for the empty measure.
Interval support_bounds(const DiscreteMeasure& mu);

double cdf(const DiscreteMeasure& mu, double x);
double cdf_left(const DiscreteMeasure& mu, double x);

/// cdf(mu, x) / |mu|. Throws kZeroMass when |mu| = 0.
double normalized_cdf(const DiscreteMeasure& mu, double x);

/// The operator A^x_N: every atom moves to the left end of its lattice cell.
/// Throws kGridOverflow when an atom lies outside [-N, N].
DiscreteMeasure discretize_space(const DiscreteMeasure& mu, const GridSpec& grid);

DiscreteMeasure push_forward(const DiscreteMeasure& mu,
                             const std::function<double(double)>& map);

/// Total variation norm of mu - nu for atomic measures.
double tv_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Image under x ↦ -x.
DiscreteMeasure reflect(const DiscreteMeasure& mu);

}  // namespace mde

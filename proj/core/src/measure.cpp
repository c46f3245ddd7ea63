#include "mde/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mde {

namespace {

// Largest k with double(k)/denom <= x, where double(k)/denom is the canonical
// node value. Using the canonical value rather than x*denom keeps nodes that
// are themselves results of double(i)/denom in their own cell.
std::int64_t floor_index(double x, std::int64_t denom, ErrorKind overflow_kind) {
  const double d = static_cast<double>(denom);
  const double scaled = std::floor(x * d);
  constexpr double kLimit = 4.0e18;
  if (!std::isfinite(scaled) || std::abs(scaled) > kLimit) {
    throw Error(overflow_kind, "value " + std::to_string(x) + " outside representable lattice");
  }
  auto k = static_cast<std::int64_t>(scaled);
  while (static_cast<double>(k + 1) / d <= x) ++k;
  while (static_cast<double>(k) / d > x) --k;
  return k;
}

}  // namespace

double Interval::radius() const { return std::max(std::abs(lower), std::abs(upper)); }

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) {
  for (const auto& a : atoms) {
    if (!std::isfinite(a.position)) {
      throw Error(ErrorKind::kInvalidArgument, "non-finite atom position");
    }
    if (!std::isfinite(a.mass) || a.mass < 0.0) {
      throw Error(ErrorKind::kInvalidArgument,
                  "atom mass must be finite and nonnegative, got " + std::to_string(a.mass));
    }
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.position < b.position; });
  atoms_.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (!atoms_.empty() && atoms_.back().position == a.position) {
      atoms_.back().mass += a.mass;
    } else {
      atoms_.push_back(a);
    }
  }
  std::erase_if(atoms_, [](const Atom& a) { return a.mass == 0.0; });

  cumulative_.reserve(atoms_.size());
  double running = 0.0;
  for (const auto& a : atoms_) {
    running += a.mass;
    cumulative_.push_back(running);
  }
}

DiscreteMeasure DiscreteMeasure::dirac(double position, double mass) {
  return DiscreteMeasure({{position, mass}});
}

double DiscreteMeasure::cdf(double x) const {
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                             [](double v, const Atom& a) { return v < a.position; });
  if (it == atoms_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
}

double DiscreteMeasure::cdf_left(double x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const Atom& a, double v) { return a.position < v; });
  if (it == atoms_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
}

GridSpec::GridSpec(std::int64_t n) : n_(n) {
  // N³ must stay well inside int64 and N² inside the exact-integer range of a double.
  if (n < 1 || n > 100000) {
    throw Error(ErrorKind::kInvalidArgument, "grid N must be in [1, 100000], got " + std::to_string(n));
  }
}

std::int64_t GridSpec::space_cell(double x) const {
  return floor_index(x, space_denominator(), ErrorKind::kGridOverflow);
}

std::int64_t GridSpec::velocity_cell(double v) const {
  return floor_index(v, velocity_denominator(), ErrorKind::kGridOverflow);
}

std::int64_t GridSpec::node_index(double x) const {
  const std::int64_t i = space_cell(x);
  if (space_node(i) != x) {
    throw Error(ErrorKind::kOffGrid, "position " + std::to_string(x) + " is not a lattice node");
  }
  return i;
}

double total_mass(const DiscreteMeasure& mu) { return mu.total_mass(); }

Interval support_bounds(const DiscreteMeasure& mu) {
  if (mu.empty()) throw Error(ErrorKind::kEmptyMeasure, "support of the empty measure");
  return {mu.atoms().front().position, mu.atoms().back().position};
}

double cdf(const DiscreteMeasure& mu, double x) { return mu.cdf(x); }

double cdf_left(const DiscreteMeasure& mu, double x) { return mu.cdf_left(x); }

double normalized_cdf(const DiscreteMeasure& mu, double x) {
  const double total = mu.total_mass();
  if (total <= 0.0) throw Error(ErrorKind::kZeroMass, "normalized cdf of a zero-mass measure");
  if (x >= mu.atoms().back().position) return 1.0;
  return mu.cdf(x) / total;
}

DiscreteMeasure discretize_space(const DiscreteMeasure& mu, const GridSpec& grid) {
  std::vector<Atom> out;
  out.reserve(mu.size());
  const std::int64_t limit = grid.max_space_index();
  for (const auto& a : mu.atoms()) {
    const std::int64_t i = grid.space_cell(a.position);
    if (i < -limit || i > limit) {
      throw Error(ErrorKind::kGridOverflow,
                  "atom at " + std::to_string(a.position) + " outside box [-" +
                      std::to_string(grid.n()) + ", " + std::to_string(grid.n()) + "]");
    }
    out.push_back({grid.space_node(i), a.mass});
  }
  return DiscreteMeasure(std::move(out));
}

DiscreteMeasure push_forward(const DiscreteMeasure& mu,
                             const std::function<double(double)>& map) {
  std::vector<Atom> out;
  out.reserve(mu.size());
  for (const auto& a : mu.atoms()) out.push_back({map(a.position), a.mass});
  return DiscreteMeasure(std::move(out));
}

double tv_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  auto a = mu.atoms();
  auto b = nu.atoms();
  std::size_t i = 0;
  std::size_t j = 0;
  double sum = 0.0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].position < b[j].position)) {
      sum += a[i++].mass;
    } else if (i == a.size() || b[j].position < a[i].position) {
      sum += b[j++].mass;
    } else {
      sum += std::abs(a[i++].mass - b[j++].mass);
    }
  }
  return sum;
}

DiscreteMeasure reflect(const DiscreteMeasure& mu) {
  return push_forward(mu, [](double x) { return 0.0 - x; });
}

}  // namespace mde

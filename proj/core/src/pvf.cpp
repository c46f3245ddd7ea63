#include "mde/pvf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mde {

namespace {

// Relative slack on the 1/2 threshold of the barycenter. Symmetric measures
// built by floating-point arithmetic put G within a few ulps of 1/2 on the
// left half; without slack the left atom would be picked and split off a
// rounding-sized sliver.
constexpr double kHalfSlack = 1e-13;

std::size_t barycenter_index(const DiscreteMeasure& mu) {
  const double total = mu.total_mass();
  if (total <= 0.0) throw Error(ErrorKind::kZeroMass, "barycenter of a zero-mass measure");
  const double half = 0.5 * total * (1.0 + kHalfSlack);
  for (std::size_t k = 0; k + 1 < mu.size(); ++k) {
    if (mu.cumulative_at(k) > half) return k;
  }
  return mu.size() - 1;
}

}  // namespace

VelocityMeasure::VelocityMeasure(std::vector<VelocityAtom> atoms) {
  for (const auto& a : atoms) {
    if (!std::isfinite(a.position) || !std::isfinite(a.velocity)) {
      throw Error(ErrorKind::kInvalidVelocityMeasure, "non-finite position or velocity");
    }
    if (!std::isfinite(a.mass) || a.mass < 0.0) {
      throw Error(ErrorKind::kInvalidVelocityMeasure, "negative or non-finite mass " + std::to_string(a.mass));
    }
  }
  std::sort(atoms.begin(), atoms.end(), [](const VelocityAtom& a, const VelocityAtom& b) {
    return a.position < b.position || (a.position == b.position && a.velocity < b.velocity);
  });
  atoms_.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (!atoms_.empty() && atoms_.back().position == a.position && atoms_.back().velocity == a.velocity) {
      atoms_.back().mass += a.mass;
    } else {
      atoms_.push_back(a);
    }
  }
  std::erase_if(atoms_, [](const VelocityAtom& a) { return a.mass == 0.0; });
}

double VelocityMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.mass;
  return s;
}

DiscreteMeasure VelocityMeasure::conditional(double position) const {
  auto lo = std::lower_bound(atoms_.begin(), atoms_.end(), position,
                             [](const VelocityAtom& a, double x) { return a.position < x; });
  std::vector<Atom> out;
  for (auto it = lo; it != atoms_.end() && it->position == position; ++it) {
    out.push_back({it->velocity, it->mass});
  }
  return DiscreteMeasure(std::move(out));
}

PvfSpec PvfSpec::barycenter_split(double c) {
  if (!(c > 0.0)) throw Error(ErrorKind::kInvalidArgument, "support growth constant must be positive");
  return PvfSpec{PvfKind::kBarycenterSplit, std::nullopt, c};
}

PvfSpec PvfSpec::cumulative_phi(PiecewiseLinearFn phi, std::optional<double> c) {
  if (!phi.nondecreasing_on(0.0, 1.0)) {
    throw Error(ErrorKind::kNonMonotonePhi, "phi must be nondecreasing on [0, 1]");
  }
  double constant = c.value_or(phi.max_abs_on(0.0, 1.0));
  if (!c && constant == 0.0) constant = 1.0;  // zero field: any positive C works
  if (!(constant > 0.0)) throw Error(ErrorKind::kInvalidArgument, "support growth constant must be positive");
  return PvfSpec{PvfKind::kCumulativePhi, std::move(phi), constant};
}

double PvfSpec::speed_bound() const {
  if (kind == PvfKind::kBarycenterSplit) return 1.0;
  return phi->max_abs_on(0.0, 1.0);
}

DiscreteMeasure base_projection(const VelocityMeasure& v) {
  std::vector<Atom> out;
  out.reserve(v.size());
  for (const auto& a : v.atoms()) {
    if (!out.empty() && out.back().position == a.position) {
      out.back().mass += a.mass;
    } else {
      out.push_back({a.position, a.mass});
    }
  }
  return DiscreteMeasure(std::move(out));
}

VelocityMeasure discretize_velocity(const VelocityMeasure& v, const GridSpec& grid) {
  std::vector<VelocityAtom> out;
  out.reserve(v.size());
  const std::int64_t vmax = grid.max_velocity_index();
  for (const auto& a : v.atoms()) {
    grid.node_index(a.position);
    const std::int64_t j = grid.velocity_cell(a.velocity);
    if (j < -vmax || j >= vmax) {
      throw Error(ErrorKind::kGridOverflow, "velocity " + std::to_string(a.velocity) +
                                                " outside [-" + std::to_string(grid.n()) + ", " +
                                                std::to_string(grid.n()) + ")");
    }
    out.push_back({a.position, grid.velocity_node(j), a.mass});
  }
  return VelocityMeasure(std::move(out));
}

double barycenter(const DiscreteMeasure& mu) {
  return mu.atoms()[barycenter_index(mu)].position;
}

VelocityMeasure pvf_barycenter(const DiscreteMeasure& mu) {
  const std::size_t b = barycenter_index(mu);
  const double half = 0.5 * mu.total_mass();
  std::vector<VelocityAtom> out;
  out.reserve(mu.size() + 1);
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const Atom& a = mu.atoms()[k];
    if (k < b) {
      out.push_back({a.position, -1.0, a.mass});
    } else if (k > b) {
      out.push_back({a.position, 1.0, a.mass});
    } else {
      // η|μ| = μ(]-∞,B]) - |μ|/2 goes right; the rest, |μ|/2 - μ(]-∞,B[), goes left.
      const double plus = std::clamp(mu.cumulative_at(k) - half, 0.0, a.mass);
      out.push_back({a.position, 1.0, plus});
      out.push_back({a.position, -1.0, a.mass - plus});
    }
  }
  return VelocityMeasure(std::move(out));
}

std::vector<VelocityPiece> cumulative_velocity_pieces(const DiscreteMeasure& mu,
                                                      const PiecewiseLinearFn& phi,
                                                      const std::optional<GridSpec>& grid) {
  const double total = mu.total_mass();
  if (total <= 0.0) throw Error(ErrorKind::kZeroMass, "cumulative PVF of a zero-mass measure");
  if (!phi.nondecreasing_on(0.0, 1.0)) {
    throw Error(ErrorKind::kNonMonotonePhi, "phi must be nondecreasing on [0, 1]");
  }

  std::vector<VelocityPiece> pieces;
  double prev_cum = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const Atom& atom = mu.atoms()[k];
    const double a = prev_cum / total;
    const double b = (k + 1 == mu.size()) ? 1.0 : mu.cumulative_at(k) / total;
    prev_cum = mu.cumulative_at(k);

    // Cut [a, b] where phi bends, then where phi crosses a velocity-cell boundary.
    std::vector<double> cuts{a};
    for (double u : phi.interior_breakpoints(a, b)) cuts.push_back(u);
    cuts.push_back(b);

    const std::size_t first_piece = pieces.size();
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const double u0 = cuts[s];
      const double u1 = cuts[s + 1];
      const double v0 = phi(u0);
      const double v1 = phi(u1);
      std::vector<std::pair<double, double>> sub{{u0, v0}};
      if (grid && v1 > v0) {
        for (std::int64_t j = grid->velocity_cell(v0) + 1;; ++j) {
          const double boundary = grid->velocity_node(j);
          if (!(boundary < v1)) break;
          sub.emplace_back(u0 + (boundary - v0) * (u1 - u0) / (v1 - v0), boundary);
        }
      }
      sub.emplace_back(u1, v1);
      for (std::size_t p = 0; p + 1 < sub.size(); ++p) {
        const double width = sub[p + 1].first - sub[p].first;
        pieces.push_back({atom.position, sub[p].second, sub[p + 1].second,
                          atom.mass * width / (b - a)});
      }
    }
    // Make the pieces of this atom sum to its mass exactly.
    double others = 0.0;
    for (std::size_t p = first_piece; p + 1 < pieces.size(); ++p) others += pieces[p].mass;
    pieces.back().mass = std::max(0.0, atom.mass - others);
  }
  return pieces;
}

VelocityMeasure pvf_cumulative(const DiscreteMeasure& mu, const PiecewiseLinearFn& phi,
                               const std::optional<GridSpec>& grid) {
  const auto pieces = cumulative_velocity_pieces(mu, phi, grid);
  std::vector<VelocityAtom> out;
  out.reserve(pieces.size());
  for (const auto& p : pieces) {
    out.push_back({p.position, 0.5 * (p.velocity_lo + p.velocity_hi), p.mass});
  }
  return VelocityMeasure(std::move(out));
}

VelocityMeasure evaluate_pvf(const PvfSpec& spec, const DiscreteMeasure& mu) {
  if (spec.kind == PvfKind::kBarycenterSplit) return pvf_barycenter(mu);
  return pvf_cumulative(mu, *spec.phi);
}

VelocityMeasure evaluate_discretized_pvf(const PvfSpec& spec, const DiscreteMeasure& mu,
                                         const GridSpec& grid) {
  if (spec.kind == PvfKind::kBarycenterSplit) return discretize_velocity(pvf_barycenter(mu), grid);
  return discretize_velocity(pvf_cumulative(mu, *spec.phi, grid), grid);
}

bool support_sublinearity_check(const PvfSpec& spec, const DiscreteMeasure& mu) {
  const VelocityMeasure v = evaluate_pvf(spec, mu);
  double max_speed = 0.0;
  for (const auto& a : v.atoms()) max_speed = std::max(max_speed, std::abs(a.velocity));
  return max_speed <= spec.support_growth_constant * (1.0 + support_bounds(mu).radius());
}

}  // namespace mde

#include "mde/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

namespace mde::oracles {

DiscreteMeasure splitting_solution(const DiscreteMeasure& mu0, double t) {
  const double total = mu0.total_mass();
  if (total <= 0.0) throw Error(ErrorKind::kZeroMass, "splitting solution of a zero-mass measure");
  if (t < 0.0) throw Error(ErrorKind::kInvalidArgument, "splitting solution needs t >= 0");

  const auto atoms = mu0.atoms();
  const double half = 0.5 * total;
  // B(μ₀) = sup{x : μ₀(]-∞, x]) <= |μ₀|/2} is the first atom pushing the cdf past half.
  std::size_t b = atoms.size() - 1;
  double below = 0.0;  // μ₀(]-∞, B[)
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    b = k;
    if (below + atoms[k].mass > half) break;
    if (k + 1 < atoms.size()) below += atoms[k].mass;
  }

  std::vector<Atom> out;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (k < b) {
      out.push_back({atoms[k].position - t, atoms[k].mass});
    } else if (k > b) {
      out.push_back({atoms[k].position + t, atoms[k].mass});
    } else {
      const double eta = below + atoms[k].mass - half;
      const double rest = half - below;
      out.push_back({atoms[k].position + t, std::max(0.0, eta)});
      out.push_back({atoms[k].position - t, std::max(0.0, rest)});
    }
  }
  return DiscreteMeasure(std::move(out));
}

namespace {

struct Segment {
  double u0, u1, v0, v1;
};

std::vector<Segment> increasing_segments(const PiecewiseLinearFn& phi) {
  if (!phi.strictly_increasing_on(0.0, 1.0)) {
    throw Error(ErrorKind::kNonInvertiblePhi, "phi must be strictly increasing on [0, 1]");
  }
  std::vector<double> us{0.0};
  for (double u : phi.interior_breakpoints(0.0, 1.0)) us.push_back(u);
  us.push_back(1.0);
  std::vector<Segment> segs;
  for (std::size_t k = 0; k + 1 < us.size(); ++k) {
    segs.push_back({us[k], us[k + 1], phi(us[k]), phi(us[k + 1])});
  }
  return segs;
}

}  // namespace

double self_similar_density(const PiecewiseLinearFn& phi, double t, double x) {
  if (!(t > 0.0)) throw Error(ErrorKind::kInvalidArgument, "self-similar density needs t > 0");
  const auto segs = increasing_segments(phi);
  const double y = x / t;
  if (y < segs.front().v0 || y > segs.back().v1) return 0.0;
  for (const auto& s : segs) {
    if (y <= s.v1) return (s.u1 - s.u0) / (s.v1 - s.v0) / t;
  }
  return 0.0;
}

double self_similar_cdf(const PiecewiseLinearFn& phi, double t, double x) {
  if (!(t > 0.0)) throw Error(ErrorKind::kInvalidArgument, "self-similar cdf needs t > 0");
  const auto segs = increasing_segments(phi);
  const double y = x / t;
  if (y <= segs.front().v0) return 0.0;
  if (y >= segs.back().v1) return 1.0;
  for (const auto& s : segs) {
    if (y <= s.v1) return s.u0 + (y - s.v0) * (s.u1 - s.u0) / (s.v1 - s.v0);
  }
  return 1.0;
}

std::vector<SirSample> classical_sir_rk4(double S0, double I0, double R0, const RateOfTime& beta,
                                         const RateOfTime& nu, double total_population, double horizon,
                                         double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::kInvalidArgument, "rk4 step must be positive");
  struct Y {
    double s, i, r;
  };
  auto rhs = [&](double t, const Y& y) {
    const double infection = y.s / total_population * beta(t) * y.i;
    const double recovery = nu(t) * y.i;
    return Y{-infection, infection - recovery, recovery};
  };
  auto axpy = [](const Y& y, double a, const Y& k) { return Y{y.s + a * k.s, y.i + a * k.i, y.r + a * k.r}; };

  std::vector<SirSample> out;
  const auto steps = static_cast<std::int64_t>(std::ceil(horizon / h - 1e-9));
  out.reserve(static_cast<std::size_t>(steps) + 1);
  Y y{S0, I0, R0};
  double t = 0.0;
  out.push_back({t, y.s, y.i, y.r});
  for (std::int64_t n = 0; n < steps; ++n) {
    const double step = std::min(h, horizon - t);
    const Y k1 = rhs(t, y);
    const Y k2 = rhs(t + 0.5 * step, axpy(y, 0.5 * step, k1));
    const Y k3 = rhs(t + 0.5 * step, axpy(y, 0.5 * step, k2));
    const Y k4 = rhs(t + step, axpy(y, step, k3));
    y.s += step / 6.0 * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s);
    y.i += step / 6.0 * (k1.i + 2.0 * k2.i + 2.0 * k3.i + k4.i);
    y.r += step / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r);
    t = (n + 1 == steps) ? horizon : static_cast<double>(n + 1) * h;
    out.push_back({t, y.s, y.i, y.r});
  }
  return out;
}

std::vector<SirSample> classical_sir_rk4(double S0, double I0, double R0, double beta, double nu,
                                         double total_population, double horizon, double h) {
  return classical_sir_rk4(
      S0, I0, R0, [beta](double) { return beta; }, [nu](double) { return nu; }, total_population, horizon, h);
}

SirSample sample_at(const std::vector<SirSample>& path, double t) {
  if (path.empty()) throw Error(ErrorKind::kInvalidArgument, "empty sample path");
  if (t <= path.front().t) return path.front();
  if (t >= path.back().t) return path.back();
  auto hi = std::lower_bound(path.begin(), path.end(), t,
                             [](const SirSample& s, double v) { return s.t < v; });
  if (hi->t == t) return *hi;
  auto lo = hi - 1;
  const double w = (t - lo->t) / (hi->t - lo->t);
  auto lerp = [w](double a, double b) { return a + w * (b - a); };
  return {t, lerp(lo->S, hi->S), lerp(lo->I, hi->I), lerp(lo->R, hi->R)};
}

double gw_bruteforce(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int resolution) {
  if (mu.size() > 4 || nu.size() > 4) {
    throw Error(ErrorKind::kTooManyAtoms, "brute force is limited to 4 atoms per measure");
  }
  if (resolution < 1) throw Error(ErrorKind::kInvalidArgument, "resolution must be positive");
  const double q = 1.0 / (static_cast<double>(resolution) * resolution);

  struct Event {
    double position;
    bool from_source;
    double mass;
    std::int64_t max_units;
  };
  std::vector<Event> events;
  std::int64_t source_units = 0;
  std::int64_t target_units = 0;
  for (const auto& a : mu.atoms()) {
    const auto units = static_cast<std::int64_t>(std::floor(a.mass / q));
    events.push_back({a.position, true, a.mass, units});
    source_units += units;
  }
  for (const auto& a : nu.atoms()) {
    const auto units = static_cast<std::int64_t>(std::floor(a.mass / q));
    events.push_back({a.position, false, a.mass, units});
    target_units += units;
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.position < b.position; });

  // cost[d + offset] = best cost so far with running flux d·q.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::int64_t offset = target_units;
  std::vector<double> cost(static_cast<std::size_t>(source_units + target_units + 1), kInf);
  std::vector<double> next(cost.size(), kInf);
  cost[static_cast<std::size_t>(offset)] = 0.0;
  std::int64_t lo = 0;  // reachable flux range, in units
  std::int64_t hi = 0;
  auto at = [&](std::vector<double>& v, std::int64_t d) -> double& {
    return v[static_cast<std::size_t>(d + offset)];
  };

  double x = events.empty() ? 0.0 : events.front().position;
  for (const auto& e : events) {
    const double gap = e.position - x;
    if (gap > 0.0) {
      for (std::int64_t d = lo; d <= hi; ++d) at(cost, d) += std::abs(static_cast<double>(d)) * q * gap;
    }
    x = e.position;

    // Keep k ∈ [0, max_units] units of this atom: flux moves by ±k, the rest
    // of the atom's mass is removed (source) or created (target).
    const std::int64_t width = e.max_units;
    const std::int64_t new_lo = e.from_source ? lo : lo - width;
    const std::int64_t new_hi = e.from_source ? hi + width : hi;
    std::deque<std::int64_t> window;  // candidate d with increasing key
    auto key = [&](std::int64_t d) {
      return at(cost, d) + (e.from_source ? 1.0 : -1.0) * static_cast<double>(d) * q;
    };
    if (e.from_source) {
      // next[D] = m + min_{d ∈ [D-width, D]} (cost[d] + d q) - D q
      std::int64_t feed = lo;
      for (std::int64_t target = new_lo; target <= new_hi; ++target) {
        while (feed <= std::min(target, hi)) {
          while (!window.empty() && key(window.back()) >= key(feed)) window.pop_back();
          window.push_back(feed++);
        }
        while (!window.empty() && window.front() < target - width) window.pop_front();
        at(next, target) = e.mass + key(window.front()) - static_cast<double>(target) * q;
      }
    } else {
      // next[D] = m + min_{d ∈ [D, D+width]} (cost[d] - d q) + D q
      std::int64_t feed = hi;
      for (std::int64_t target = new_hi; target >= new_lo; --target) {
        while (feed >= std::max(target, lo)) {
          while (!window.empty() && key(window.back()) >= key(feed)) window.pop_back();
          window.push_back(feed--);
        }
        while (!window.empty() && window.front() > target + width) window.pop_front();
        at(next, target) = e.mass + key(window.front()) + static_cast<double>(target) * q;
      }
    }
    // The top choice k = width keeps the whole atom: its sub-unit remainder
    // rides along with the last unit instead of being removed.
    const std::int64_t shift = e.from_source ? width : -width;
    for (std::int64_t d = lo; d <= hi; ++d) {
      at(next, d + shift) = std::min(at(next, d + shift), at(cost, d));
    }
    for (std::int64_t d = lo; d <= hi; ++d) at(cost, d) = kInf;
    for (std::int64_t d = new_lo; d <= new_hi; ++d) {
      at(cost, d) = at(next, d);
      at(next, d) = kInf;
    }
    lo = new_lo;
    hi = new_hi;
  }
  return at(cost, 0);
}

}  // namespace mde::oracles

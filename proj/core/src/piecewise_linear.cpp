#include "mde/piecewise_linear.hpp"

#include <algorithm>
#include <cmath>

#include "mde/error.hpp"

namespace mde {

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<Breakpoint> breakpoints)
    : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "piecewise-linear function needs a breakpoint");
  }
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    const auto& bp = breakpoints_[k];
    if (!std::isfinite(bp.input) || !std::isfinite(bp.output)) {
      throw Error(ErrorKind::kInvalidArgument, "non-finite breakpoint");
    }
    if (k > 0 && !(breakpoints_[k - 1].input < bp.input)) {
      throw Error(ErrorKind::kInvalidArgument, "breakpoint inputs must be strictly increasing");
    }
  }
}

PiecewiseLinearFn PiecewiseLinearFn::constant(double value) {
  return PiecewiseLinearFn({{0.0, value}});
}

PiecewiseLinearFn PiecewiseLinearFn::linear(double x0, double y0, double x1, double y1) {
  return PiecewiseLinearFn({{x0, y0}, {x1, y1}});
}

double PiecewiseLinearFn::operator()(double x) const {
  if (x <= breakpoints_.front().input) return breakpoints_.front().output;
  if (x >= breakpoints_.back().input) return breakpoints_.back().output;
  auto hi = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x,
                             [](double v, const Breakpoint& b) { return v < b.input; });
  auto lo = hi - 1;
  if (x == lo->input) return lo->output;
  const double w = (x - lo->input) / (hi->input - lo->input);
  return lo->output + w * (hi->output - lo->output);
}

std::vector<double> PiecewiseLinearFn::interior_breakpoints(double lo, double hi) const {
  std::vector<double> out;
  for (const auto& bp : breakpoints_) {
    if (bp.input > lo && bp.input < hi) out.push_back(bp.input);
  }
  return out;
}

namespace {

// Values of f at lo, hi and every breakpoint inside; f is extremal among them.
std::vector<double> critical_values(const PiecewiseLinearFn& f, double lo, double hi) {
  std::vector<double> values{f(lo), f(hi)};
  for (double x : f.interior_breakpoints(lo, hi)) values.push_back(f(x));
  return values;
}

}  // namespace

bool PiecewiseLinearFn::nondecreasing_on(double lo, double hi) const {
  std::vector<double> xs{lo};
  for (double x : interior_breakpoints(lo, hi)) xs.push_back(x);
  xs.push_back(hi);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if ((*this)(xs[k]) < (*this)(xs[k - 1])) return false;
  }
  return true;
}

bool PiecewiseLinearFn::strictly_increasing_on(double lo, double hi) const {
  std::vector<double> xs{lo};
  for (double x : interior_breakpoints(lo, hi)) xs.push_back(x);
  xs.push_back(hi);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (!((*this)(xs[k]) > (*this)(xs[k - 1]))) return false;
  }
  return true;
}

double PiecewiseLinearFn::max_abs_on(double lo, double hi) const {
  double m = 0.0;
  for (double v : critical_values(*this, lo, hi)) m = std::max(m, std::abs(v));
  return m;
}

double PiecewiseLinearFn::min_on(double lo, double hi) const {
  auto v = critical_values(*this, lo, hi);
  return *std::min_element(v.begin(), v.end());
}

double PiecewiseLinearFn::max_on(double lo, double hi) const {
  auto v = critical_values(*this, lo, hi);
  return *std::max_element(v.begin(), v.end());
}

}  // namespace mde

#pragma once

#include <span>
#include <utility>
#include <vector>

namespace mde {

struct Breakpoint {
  double input;
  double output;

  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Tabulated function, linear between breakpoints and constant beyond them.
/// Hosts the speed profile φ of the cumulative PVF and the rate tables β, ν.
class PiecewiseLinearFn {
 public:
  /// Throws kInvalidArgument unless inputs are finite and strictly increasing
  /// and there is at least one breakpoint.
  explicit PiecewiseLinearFn(std::vector<Breakpoint> breakpoints);

  static PiecewiseLinearFn constant(double value);
  static PiecewiseLinearFn linear(double x0, double y0, double x1, double y1);

  /// Samples `f` on `count` equally spaced inputs spanning [lo, hi].
  template <typename F>
  static PiecewiseLinearFn tabulate(F&& f, double lo, double hi, int count) {
    std::vector<Breakpoint> bps;
    bps.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
      const double x = (k + 1 == count) ? hi : lo + (hi - lo) * k / (count - 1);
      bps.push_back({x, f(x)});
    }
    return PiecewiseLinearFn(std::move(bps));
  }

  double operator()(double x) const;

  std::span<const Breakpoint> breakpoints() const { return breakpoints_; }

  /// Inputs of breakpoints lying strictly inside (lo, hi).
  std::vector<double> interior_breakpoints(double lo, double hi) const;

  bool nondecreasing_on(double lo, double hi) const;
  bool strictly_increasing_on(double lo, double hi) const;

  /// sup |f| over [lo, hi].
  double max_abs_on(double lo, double hi) const;
  double min_on(double lo, double hi) const;
  double max_on(double lo, double hi) const;

  friend bool operator==(const PiecewiseLinearFn&, const PiecewiseLinearFn&) = default;

 private:
  std::vector<Breakpoint> breakpoints_;
};

}  // namespace mde

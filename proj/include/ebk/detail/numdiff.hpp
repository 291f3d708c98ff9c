#pragma once

#include <functional>

namespace ebk::detail {

/// Fourth-order finite-difference derivative of fn at x with step h, staying
/// inside [lo, hi]: a centered five-point stencil when it fits, otherwise a
/// one-sided five-point stencil pointing into the interval.
template <class Fn>
auto derivative(const Fn& fn, double x, double h, double lo, double hi) -> decltype(fn(x)) {
  if (x - 2 * h >= lo && x + 2 * h <= hi) {
    return (fn(x - 2 * h) - 8.0 * fn(x - h) + 8.0 * fn(x + h) - fn(x + 2 * h)) / (12.0 * h);
  }
  const double s = (x - lo < hi - x) ? h : -h;
  return (-25.0 * fn(x) + 48.0 * fn(x + s) - 36.0 * fn(x + 2 * s) + 16.0 * fn(x + 3 * s) -
          3.0 * fn(x + 4 * s)) /
         (12.0 * s);
}

}  // namespace ebk::detail

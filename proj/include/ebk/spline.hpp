#pragma once

#include <optional>
#include <span>
#include <vector>

namespace ebk {

/// Interpolating cubic spline through (x_i, y_i) with strictly increasing x.
/// Each end is either natural (zero second derivative) or clamped to a
/// prescribed slope. Outside [x_0, x_n] the end cubics are extended.
class CubicSpline {
 public:
  struct EndCondition {
    std::optional<double> slope;  // nullopt: natural end
  };

  CubicSpline() = default;
  CubicSpline(std::span<const double> x, std::span<const double> y, EndCondition left = {},
              EndCondition right = {});

  double operator()(double x) const { return evaluate(x, 0); }
  /// order 0, 1 or 2.
  double evaluate(double x, int order) const;

  const std::vector<double>& knots() const { return x_; }
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives at the knots
};

}  // namespace ebk

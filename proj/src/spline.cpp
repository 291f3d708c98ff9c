#include "ebk/spline.hpp"

#include <algorithm>

#include "ebk/errors.hpp"

namespace ebk {

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y,
                         EndCondition left, EndCondition right)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw Error(Errc::invalid_argument, "spline needs at least two knots and matching values");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw Error(Errc::invalid_argument, "spline knots must be strictly increasing");
    }
  }

  // Tridiagonal system for the knot second derivatives.
  std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    sub[i] = h0 / 6.0;
    diag[i] = (h0 + h1) / 3.0;
    sup[i] = h1 / 6.0;
    rhs[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
  }
  const double hl = x_[1] - x_[0];
  if (left.slope) {
    diag[0] = hl / 3.0;
    sup[0] = hl / 6.0;
    rhs[0] = (y_[1] - y_[0]) / hl - *left.slope;
  } else {
    diag[0] = 1.0;
  }
  const double hr = x_[n - 1] - x_[n - 2];
  if (right.slope) {
    sub[n - 1] = hr / 6.0;
    diag[n - 1] = hr / 3.0;
    rhs[n - 1] = *right.slope - (y_[n - 1] - y_[n - 2]) / hr;
  } else {
    diag[n - 1] = 1.0;
  }

  // Thomas algorithm.
  for (std::size_t i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_.assign(n, 0.0);
  m_[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
  }
}

double CubicSpline::evaluate(double x, int order) const {
  const std::size_t n = x_.size();
  std::size_t i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
  i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h;
  const double b = (x - x_[i]) / h;
  switch (order) {
    case 0:
      return a * y_[i] + b * y_[i + 1] +
             ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    case 1:
      return (y_[i + 1] - y_[i]) / h - (3.0 * a * a - 1.0) * h * m_[i] / 6.0 +
             (3.0 * b * b - 1.0) * h * m_[i + 1] / 6.0;
    case 2:
      return a * m_[i] + b * m_[i + 1];
    default:
      throw Error(Errc::invalid_argument, "spline derivative order must be 0, 1 or 2");
  }
}

}  // namespace ebk

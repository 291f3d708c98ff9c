#pragma once

#include <Eigen/Core>

namespace ebk {

// Ambient dimension is at most 3 (curves in the plane, analytic surfaces in
// space), so vectors use inline storage and never touch the heap.
inline constexpr int kMaxDimension = 3;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDimension, 1>;
using IntVec = Eigen::Matrix<int, Eigen::Dynamic, 1, 0, kMaxDimension, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDimension,
                          kMaxDimension>;

inline Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

inline Vec vec3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

inline IntVec ivec2(int x, int y) {
  IntVec v(2);
  v << x, y;
  return v;
}

inline Vec scalar_param(double t) {
  Vec v(1);
  v(0) = t;
  return v;
}

/// Lexicographic order on integer vectors of equal length.
inline bool lex_less(const IntVec& a, const IntVec& b) {
  for (Eigen::Index i = 0; i < a.size() && i < b.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return a.size() < b.size();
}

}  // namespace ebk

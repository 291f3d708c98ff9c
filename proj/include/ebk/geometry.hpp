#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ebk/types.hpp"

namespace ebk {

/// A positively homogeneous function f of degree d on the closed positive
/// orthant, with gradient and (optionally) Hessian. Missing derivatives are
/// filled in by central differences with step max(1e-6, 1e-8 |p|).
class ToricProfile {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradientFn = std::function<Vec(const Vec&)>;
  using HessianFn = std::function<Mat(const Vec&)>;

  ToricProfile(int dimension, double degree, ValueFn value, GradientFn gradient = {},
               HessianFn hessian = {}, std::string name = "custom");

  /// f(p) = <omega, p>: uncoupled harmonic oscillators.
  static ToricProfile linear(const Vec& omega);
  /// f(p) = (sum_j p_j^s)^(1/s).
  static ToricProfile pnorm(double s, int dimension = 2);
  /// f(p) = (sum_j p_j^s)^(d/s), the d-th power of pnorm(s).
  static ToricProfile power(double s, double degree, int dimension = 2);
  /// f(p) = sum_j |p_j|^s / s on all of R^n; strictly convex for s > 1.
  static ToricProfile power_sum(double s, int dimension);

  double operator()(const Vec& p) const { return value(p); }
  double value(const Vec& p) const;
  Vec gradient(const Vec& p) const;
  Mat hessian(const Vec& p) const;

  double degree() const noexcept { return degree_; }
  int dimension() const noexcept { return dimension_; }
  const std::string& name() const noexcept { return name_; }
  bool has_analytic_gradient() const noexcept { return static_cast<bool>(gradient_); }

  /// The 1-homogeneous profile f^(1/d), which has the same level set f = 1.
  ToricProfile root() const;

 private:
  int dimension_;
  double degree_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
  std::string name_;
};

enum class Orientation { convex, concave, general };

const char* to_string(Orientation o) noexcept;
Orientation orientation_from_string(const std::string& s);

struct SurfaceSample {
  Vec param;
  Vec point;
  Vec normal;
  double curvature = 0.0;
};

/// Points p with n(p) ~ k returned by invert_gauss_map.
struct GaussPreimage {
  std::vector<Vec> params;
  std::vector<Vec> points;
  /// Set when the direction is attained on a set of positive measure (a
  /// flat facet); each connected component is represented by one point.
  bool multivalued = false;
};

/// A parametrized level hypersurface N in R^n (n = 2 or 3) over a box of
/// parameters, cooriented by the outward unit normal. Immutable; copies share
/// state.
class LevelSurface {
 public:
  using PointFn = std::function<Vec(const Vec& param)>;
  /// Any positive multiple of the outward normal.
  using NormalFn = std::function<Vec(const Vec& param)>;

  static constexpr int kDefaultCurveResolution = 4096;
  static constexpr int kDefaultSurfaceResolution = 64;  // per parameter axis

  struct Definition {
    int dimension = 2;
    Vec lower, upper;  // parameter box, size dimension - 1
    PointFn point;
    NormalFn normal;  // empty: derived from the tangent(s) of `point`
    std::optional<Orientation> orientation;  // empty: classified from curvature samples
    int resolution = 0;  // 0: default for the dimension
    std::vector<Vec> sample_params;  // overrides the uniform grid when non-empty
    std::optional<ToricProfile> profile;
  };

  explicit LevelSurface(Definition def);

  /// N = f^-1(1) parametrized by direction: the polar angle in [0, pi/2]
  /// for n = 2, spherical angles over the closed positive octant for n = 3.
  static LevelSurface from_profile(const ToricProfile& f, int resolution = 0,
                                   std::optional<Orientation> orientation = {});
  /// A plane curve through sampled (parameter, point) pairs, interpolated by
  /// componentwise cubic splines.
  static LevelSurface from_table(std::span<const std::pair<double, Vec>> table,
                                 std::optional<Orientation> orientation = {}, int resolution = 0);

  int dimension() const noexcept;
  int parameter_dimension() const noexcept { return dimension() - 1; }
  const Vec& lower() const noexcept;
  const Vec& upper() const noexcept;
  Orientation orientation() const noexcept;
  const ToricProfile* profile() const noexcept;

  Vec point(const Vec& param) const;
  Vec point(double t) const { return point(scalar_param(t)); }
  /// Unit outward normal; throws DegenerateGradient when it vanishes.
  Vec normal(const Vec& param) const;
  Vec normal(double t) const { return normal(scalar_param(t)); }
  /// Gauss curvature det Dn, signed with respect to the outward normal.
  double curvature(const Vec& param) const;
  double curvature(double t) const { return curvature(scalar_param(t)); }

  std::span<const SurfaceSample> samples() const noexcept;
  /// Finite-difference step used for Dn along the given parameter axis.
  double curvature_step(int axis) const noexcept;

 private:
  struct State;
  std::shared_ptr<const State> state_;
};

/// Unit normal n(p) = grad f / |grad f| at the given parameter.
Vec gauss_map(const LevelSurface& surface, const Vec& param);
Vec gauss_map(const LevelSurface& surface, double t);

/// K(p) = det Dn(p); throws InsufficientResolution when the sampling is too
/// coarse to resolve Dn.
double gauss_curvature(const LevelSurface& surface, const Vec& param);
double gauss_curvature(const LevelSurface& surface, double t);

/// L(p) = n / <p, n>.
Vec legendre_point(const Vec& p, const Vec& normal);

/// All points of the surface whose normal is positively proportional to
/// `direction`. Strictly convex/concave surfaces have exactly one.
GaussPreimage invert_gauss_map(const LevelSurface& surface, const Vec& direction,
                               int max_iterations = 200);

/// Symmetric Hausdorff distance between two sampled hypersurfaces. Curves
/// (n = 2) are treated as polylines through their samples.
double hausdorff_distance(const LevelSurface& a, const LevelSurface& b);
double hausdorff_distance(std::span<const Vec> a, std::span<const Vec> b, bool polyline = true);

/// The 1-homogeneous gauge x -> |x| / |p(x)| of a star-shaped plane curve,
/// where p(x) is the curve point on the ray through x. Rays outside the
/// curve's angular range raise RayMiss. Backtracks of the polar angle up to
/// `fold_tolerance` radians are accepted and resolved by the first crossing;
/// larger ones raise NonGraphical.
ToricProfile gauge_profile(const LevelSurface& curve, double fold_tolerance = 0.0);

}  // namespace ebk

#include "ebk/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ebk/detail/numdiff.hpp"
#include "ebk/detail/parallel.hpp"
#include "ebk/errors.hpp"
#include "ebk/spline.hpp"

namespace ebk {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

void check_size(const Vec& p, int n, const char* what) {
  if (p.size() != n) {
    throw Error(Errc::invalid_argument, std::string(what) + ": expected a vector of dimension " +
                                            std::to_string(n) + ", got " +
                                            std::to_string(p.size()));
  }
}

double fd_step(double scale) { return std::max(1e-6, 1e-8 * scale); }

// cos/sin that are exact at 0 and pi/2, so level-set endpoints land on the axes.
std::pair<double, double> axis_exact_cos_sin(double a) {
  if (a == 0.0) return {1.0, 0.0};
  if (a == kHalfPi) return {0.0, 1.0};
  return {std::cos(a), std::sin(a)};
}

double cross2(const Vec& a, const Vec& b) { return a(0) * b(1) - a(1) * b(0); }

}  // namespace

// ---------------------------------------------------------------------------
// ToricProfile

ToricProfile::ToricProfile(int dimension, double degree, ValueFn value, GradientFn gradient,
                           HessianFn hessian, std::string name)
    : dimension_(dimension),
      degree_(degree),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)),
      name_(std::move(name)) {
  if (dimension_ < 1 || dimension_ > kMaxDimension) {
    throw Error(Errc::invalid_argument, "profile dimension must be in [1, 3]");
  }
  if (!(degree_ > 0.0) || !std::isfinite(degree_)) {
    throw Error(Errc::invalid_argument, "homogeneity degree must be positive");
  }
  if (!value_) throw Error(Errc::invalid_argument, "profile needs an evaluator");
}

ToricProfile ToricProfile::linear(const Vec& omega) {
  const Vec w = omega;
  const int n = static_cast<int>(w.size());
  return ToricProfile(
      n, 1.0, [w](const Vec& p) { return w.dot(p); }, [w](const Vec&) { return w; },
      [n](const Vec&) { return Mat::Zero(n, n).eval(); }, "linear");
}

ToricProfile ToricProfile::pnorm(double s, int dimension) {
  if (!(s > 1.0)) throw Error(Errc::invalid_argument, "pnorm exponent must exceed 1");
  return power(s, 1.0, dimension);
}

ToricProfile ToricProfile::power(double s, double degree, int dimension) {
  if (!(s > 1.0)) throw Error(Errc::invalid_argument, "pnorm exponent must exceed 1");
  auto sum = [s](const Vec& p) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < p.size(); ++j) acc += std::pow(std::abs(p(j)), s);
    return acc;
  };
  auto value = [s, degree, sum](const Vec& p) { return std::pow(sum(p), degree / s); };
  auto gradient = [s, degree, sum](const Vec& p) {
    const double S = sum(p);
    Vec g = Vec::Zero(p.size());
    if (S == 0.0) return g;
    const double scale = degree * std::pow(S, degree / s - 1.0);
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      const double a = std::abs(p(j));
      g(j) = scale * std::copysign(std::pow(a, s - 1.0), p(j));
    }
    return g;
  };
  std::string name = degree == 1.0 ? "pnorm" : "power";
  return ToricProfile(dimension, degree, value, gradient, {}, name);
}

ToricProfile ToricProfile::power_sum(double s, int dimension) {
  if (!(s > 1.0)) throw Error(Errc::invalid_argument, "power_sum exponent must exceed 1");
  auto value = [s](const Vec& p) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < p.size(); ++j) acc += std::pow(std::abs(p(j)), s);
    return acc / s;
  };
  auto gradient = [s](const Vec& p) {
    Vec g(p.size());
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      g(j) = std::copysign(std::pow(std::abs(p(j)), s - 1.0), p(j));
    }
    return g;
  };
  auto hessian = [s](const Vec& p) {
    Mat h = Mat::Zero(p.size(), p.size());
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      h(j, j) = (s - 1.0) * std::pow(std::abs(p(j)), s - 2.0);
    }
    return h;
  };
  return ToricProfile(dimension, s, value, gradient, hessian, "power_sum");
}

double ToricProfile::value(const Vec& p) const {
  check_size(p, dimension_, "profile argument");
  return value_(p);
}

Vec ToricProfile::gradient(const Vec& p) const {
  check_size(p, dimension_, "profile argument");
  if (gradient_) return gradient_(p);
  const double h = fd_step(p.norm());
  Vec g(dimension_);
  for (int j = 0; j < dimension_; ++j) {
    Vec a = p, b = p;
    a(j) += h;
    b(j) -= h;
    g(j) = (value_(a) - value_(b)) / (2 * h);
  }
  return g;
}

Mat ToricProfile::hessian(const Vec& p) const {
  check_size(p, dimension_, "profile argument");
  if (hessian_) return hessian_(p);
  const double h = std::max(1e-5, 1e-6 * p.norm());
  Mat H(dimension_, dimension_);
  for (int j = 0; j < dimension_; ++j) {
    Vec a = p, b = p;
    a(j) += h;
    b(j) -= h;
    H.col(j) = (gradient(a) - gradient(b)) / (2 * h);
  }
  return (0.5 * (H + H.transpose())).eval();
}

ToricProfile ToricProfile::root() const {
  if (degree_ == 1.0) return *this;
  const ToricProfile self = *this;
  const double d = degree_;
  return ToricProfile(
      dimension_, 1.0, [self, d](const Vec& p) { return std::pow(self.value(p), 1.0 / d); },
      [self, d](const Vec& p) -> Vec {
        const double f = self.value(p);
        if (f <= 0.0) return Vec::Zero(p.size());
        return (std::pow(f, 1.0 / d - 1.0) / d) * self.gradient(p);
      },
      {}, name_ + "^(1/" + std::to_string(d) + ")");
}

// ---------------------------------------------------------------------------
// Orientation

const char* to_string(Orientation o) noexcept {
  switch (o) {
    case Orientation::convex: return "convex";
    case Orientation::concave: return "concave";
    case Orientation::general: return "general";
  }
  return "general";
}

Orientation orientation_from_string(const std::string& s) {
  if (s == "convex") return Orientation::convex;
  if (s == "concave") return Orientation::concave;
  if (s == "general") return Orientation::general;
  throw Error(Errc::parse_error, "unknown orientation '" + s + "'");
}

// ---------------------------------------------------------------------------
// LevelSurface

struct LevelSurface::State {
  Definition def;
  int axis_resolution = 0;
  Vec curvature_steps;  // per parameter axis
  double tangent_sign = 1.0;
  Orientation orientation = Orientation::general;
  std::vector<SurfaceSample> samples;

  double tangent_step(int axis) const { return curvature_steps(axis) / 8.0; }

  Vec raw_normal(const Vec& t) const {
    if (def.normal) return def.normal(t);
    const int m = def.dimension - 1;
    std::vector<Vec> d(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      auto along = [&](double s) {
        Vec u = t;
        u(i) = s;
        return def.point(u);
      };
      d[static_cast<std::size_t>(i)] =
          detail::derivative(along, t(i), tangent_step(i), def.lower(i), def.upper(i));
    }
    if (m == 1) return tangent_sign * vec2(d[0](1), -d[0](0));
    return tangent_sign * vec3(d[0](1) * d[1](2) - d[0](2) * d[1](1),
                               d[0](2) * d[1](0) - d[0](0) * d[1](2),
                               d[0](0) * d[1](1) - d[0](1) * d[1](0));
  }

  Vec unit_normal(const Vec& t) const {
    const Vec n = raw_normal(t);
    const double len = n.norm();
    if (!(len >= 1e-12)) {
      throw Error(Errc::degenerate_gradient, "normal vanishes at the requested parameter");
    }
    return n / len;
  }

  double curvature(Vec t) const {
    if (axis_resolution < 16) {
      throw Error(Errc::insufficient_resolution,
                  "fewer than 16 samples per axis; cannot estimate Dn");
    }
    const int m = def.dimension - 1;
    std::vector<Vec> dp(static_cast<std::size_t>(m)), dn(static_cast<std::size_t>(m));
    auto differentiate = [&](const Vec& at) {
      for (int i = 0; i < m; ++i) {
        const double h = curvature_steps(i);
        auto point_along = [&](double s) {
          Vec u = at;
          u(i) = s;
          return def.point(u);
        };
        auto normal_along = [&](double s) {
          Vec u = at;
          u(i) = s;
          return unit_normal(u);
        };
        dp[static_cast<std::size_t>(i)] =
            detail::derivative(point_along, at(i), h, def.lower(i), def.upper(i));
        dn[static_cast<std::size_t>(i)] =
            detail::derivative(normal_along, at(i), h, def.lower(i), def.upper(i));
      }
    };
    differentiate(t);

    // Where the parametrization degenerates (dp = 0, e.g. at a pole) step
    // into the interior and report the nearby value.
    const double scale = std::max(1.0, def.point(t).norm());
    bool degenerate = false;
    for (int i = 0; i < m; ++i) {
      if (dp[static_cast<std::size_t>(i)].norm() < 1e-8 * scale) degenerate = true;
    }
    if (degenerate) {
      bool nudged = false;
      for (int i = 0; i < m; ++i) {
        const double h = 2 * curvature_steps(i);
        if (t(i) - def.lower(i) < h) {
          t(i) += h;
          nudged = true;
        } else if (def.upper(i) - t(i) < h) {
          t(i) -= h;
          nudged = true;
        }
      }
      if (nudged) differentiate(t);
    }

    for (int i = 0; i < m; ++i) {
      const double turn = dn[static_cast<std::size_t>(i)].norm() * 4 * curvature_steps(i);
      if (turn > 0.5) {
        throw Error(Errc::insufficient_resolution,
                    "normal turns too fast between neighbouring samples");
      }
    }

    Mat G(m, m), A(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        G(i, j) = dp[static_cast<std::size_t>(i)].dot(dp[static_cast<std::size_t>(j)]);
        A(i, j) = dn[static_cast<std::size_t>(i)].dot(dp[static_cast<std::size_t>(j)]);
      }
    }
    const Mat As = 0.5 * (A + A.transpose());
    return As.determinant() / G.determinant();
  }
};

LevelSurface::LevelSurface(Definition def) {
  auto state = std::make_shared<State>();
  const int n = def.dimension;
  if (n != 2 && n != 3) {
    throw Error(Errc::invalid_argument, "level surfaces are supported in dimension 2 and 3");
  }
  if (def.lower.size() != n - 1 || def.upper.size() != n - 1) {
    throw Error(Errc::invalid_argument, "parameter box must have dimension n - 1");
  }
  for (int i = 0; i < n - 1; ++i) {
    if (!(def.lower(i) < def.upper(i))) {
      throw Error(Errc::invalid_argument, "parameter box must have positive extent");
    }
  }
  if (!def.point) throw Error(Errc::invalid_argument, "level surface needs a parametrization");

  int res = def.resolution;
  if (res <= 0) res = n == 2 ? kDefaultCurveResolution : kDefaultSurfaceResolution;
  if (res < 2) throw Error(Errc::invalid_argument, "resolution must be at least 2");

  std::vector<Vec> params = def.sample_params;
  if (params.empty()) {
    if (n == 2) {
      for (int i = 0; i < res; ++i) {
        const double t = i == res - 1 ? def.upper(0)
                                      : def.lower(0) + (def.upper(0) - def.lower(0)) * i / (res - 1);
        params.push_back(scalar_param(t));
      }
    } else {
      for (int i = 0; i < res; ++i) {
        for (int j = 0; j < res; ++j) {
          Vec t(2);
          t(0) = i == res - 1 ? def.upper(0)
                              : def.lower(0) + (def.upper(0) - def.lower(0)) * i / (res - 1);
          t(1) = j == res - 1 ? def.upper(1)
                              : def.lower(1) + (def.upper(1) - def.lower(1)) * j / (res - 1);
          params.push_back(t);
        }
      }
    }
    state->axis_resolution = res;
  } else {
    for (const Vec& t : params) {
      if (t.size() != n - 1) throw Error(Errc::invalid_argument, "sample parameter size mismatch");
    }
    const double count = static_cast<double>(params.size());
    state->axis_resolution =
        static_cast<int>(n == 2 ? count : std::floor(std::sqrt(count)));
    if (def.resolution > 0) state->axis_resolution = std::max(state->axis_resolution, def.resolution);
  }

  state->curvature_steps = Vec(n - 1);
  for (int i = 0; i < n - 1; ++i) {
    const int r = std::max(state->axis_resolution, 2);
    state->curvature_steps(i) = (def.upper(i) - def.lower(i)) / (r - 1) / 4.0;
  }

  state->def = std::move(def);
  const Definition& d = state->def;

  if (!d.normal) {
    const Vec mid = (0.5 * (d.lower + d.upper)).eval();
    const Vec nn = state->raw_normal(mid);
    if (nn.dot(d.point(mid)) < 0) state->tangent_sign = -1.0;
  }

  std::vector<SurfaceSample> samples(params.size());
  detail::parallel_for(
      params.size(),
      [&](std::size_t i) {
        SurfaceSample& s = samples[i];
        s.param = params[i];
        s.point = d.point(s.param);
        s.normal = state->unit_normal(s.param);
        try {
          s.curvature = state->curvature(s.param);
        } catch (const Error& e) {
          if (e.code() != Errc::insufficient_resolution) throw;
          s.curvature = std::numeric_limits<double>::quiet_NaN();
        }
      },
      64);
  state->samples = std::move(samples);

  if (d.orientation) {
    state->orientation = *d.orientation;
  } else {
    std::vector<double> mags;
    for (const auto& s : state->samples) {
      if (std::isfinite(s.curvature)) mags.push_back(std::abs(s.curvature));
    }
    Orientation o = Orientation::general;
    if (!mags.empty()) {
      std::nth_element(mags.begin(), mags.begin() + static_cast<long>(mags.size() / 2), mags.end());
      // Finite-difference noise (and spline ends) may leave curvature of the
      // wrong sign far below the typical magnitude; that is not an inflection.
      const double noise = std::max(1e-8, 1e-4 * mags[mags.size() / 2]);
      std::size_t pos = 0, neg = 0;
      for (const auto& s : state->samples) {
        if (!std::isfinite(s.curvature) || std::abs(s.curvature) <= noise) continue;
        if (s.curvature > 0) ++pos;
        if (s.curvature < 0) ++neg;
      }
      if (neg == 0 && 2 * pos >= mags.size() && pos > 0) o = Orientation::convex;
      if (pos == 0 && 2 * neg >= mags.size() && neg > 0) o = Orientation::concave;
    }
    state->orientation = o;
  }
  state_ = std::move(state);
}

LevelSurface LevelSurface::from_profile(const ToricProfile& f, int resolution,
                                        std::optional<Orientation> orientation) {
  const int n = f.dimension();
  const double d = f.degree();
  Definition def;
  def.dimension = n;
  def.resolution = resolution;
  def.orientation = orientation;
  def.profile = f;
  if (n == 2) {
    def.lower = scalar_param(0.0);
    def.upper = scalar_param(kHalfPi);
    def.point = [f, d](const Vec& t) -> Vec {
      const auto [c, s] = axis_exact_cos_sin(t(0));
      const Vec u = vec2(c, s);
      return u / std::pow(f.value(u), 1.0 / d);
    };
  } else if (n == 3) {
    def.lower = vec2(0.0, 0.0);
    def.upper = vec2(kHalfPi, kHalfPi);
    def.point = [f, d](const Vec& t) -> Vec {
      const auto [cu, su] = axis_exact_cos_sin(t(0));
      const auto [cv, sv] = axis_exact_cos_sin(t(1));
      const Vec u = vec3(su * cv, su * sv, cu);
      return u / std::pow(f.value(u), 1.0 / d);
    };
  } else {
    throw Error(Errc::invalid_argument, "level sets are supported for n = 2 and n = 3");
  }
  const auto point = def.point;
  def.normal = [f, point](const Vec& t) { return f.gradient(point(t)); };
  return LevelSurface(std::move(def));
}

LevelSurface LevelSurface::from_table(std::span<const std::pair<double, Vec>> table,
                                      std::optional<Orientation> orientation, int resolution) {
  if (table.size() < 4) {
    throw Error(Errc::invalid_argument, "a sampled curve needs at least four points");
  }
  std::vector<std::pair<double, Vec>> rows(table.begin(), table.end());
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> t, x, y;
  for (const auto& [param, p] : rows) {
    if (p.size() != 2) throw Error(Errc::invalid_argument, "sampled curves must be planar");
    t.push_back(param);
    x.push_back(p(0));
    y.push_back(p(1));
  }
  const CubicSpline sx(t, x), sy(t, y);
  Definition def;
  def.dimension = 2;
  def.lower = scalar_param(t.front());
  def.upper = scalar_param(t.back());
  def.point = [sx, sy](const Vec& u) { return vec2(sx(u(0)), sy(u(0))); };
  def.orientation = orientation;
  def.resolution = resolution;
  return LevelSurface(std::move(def));
}

int LevelSurface::dimension() const noexcept { return state_->def.dimension; }
const Vec& LevelSurface::lower() const noexcept { return state_->def.lower; }
const Vec& LevelSurface::upper() const noexcept { return state_->def.upper; }
Orientation LevelSurface::orientation() const noexcept { return state_->orientation; }

const ToricProfile* LevelSurface::profile() const noexcept {
  return state_->def.profile ? &*state_->def.profile : nullptr;
}

Vec LevelSurface::point(const Vec& param) const {
  check_size(param, parameter_dimension(), "surface parameter");
  return state_->def.point(param);
}

Vec LevelSurface::normal(const Vec& param) const {
  check_size(param, parameter_dimension(), "surface parameter");
  return state_->unit_normal(param);
}

double LevelSurface::curvature(const Vec& param) const {
  check_size(param, parameter_dimension(), "surface parameter");
  return state_->curvature(param);
}

std::span<const SurfaceSample> LevelSurface::samples() const noexcept { return state_->samples; }

double LevelSurface::curvature_step(int axis) const noexcept {
  return state_->curvature_steps(axis);
}

// ---------------------------------------------------------------------------
// Operations

Vec gauss_map(const LevelSurface& surface, const Vec& param) { return surface.normal(param); }
Vec gauss_map(const LevelSurface& surface, double t) { return surface.normal(t); }

double gauss_curvature(const LevelSurface& surface, const Vec& param) {
  return surface.curvature(param);
}
double gauss_curvature(const LevelSurface& surface, double t) { return surface.curvature(t); }

Vec legendre_point(const Vec& p, const Vec& normal) {
  if (p.size() != normal.size()) {
    throw Error(Errc::invalid_argument, "point and normal dimensions differ");
  }
  const double support = p.dot(normal);
  if (!(std::abs(support) >= 1e-10)) {
    throw Error(Errc::tangent_through_origin, "<p, n(p)> vanishes");
  }
  return normal / support;
}

namespace {

constexpr double kInversionTolerance = 1e-10;

GaussPreimage invert_curve_monotone(const LevelSurface& s, const Vec& k, int max_iterations) {
  const auto samples = s.samples();
  auto residual = [&](const Vec& n) { return cross2(n, k); };
  const double g_first = residual(samples.front().normal);
  const double g_last = residual(samples.back().normal);

  auto accept = [&](const Vec& t, const Vec& n) {
    if (n.dot(k) <= 0.0 || std::abs(cross2(n, k)) > kInversionTolerance) {
      throw Error(Errc::direction_not_attained, "direction outside the normal cone");
    }
    GaussPreimage out;
    out.params.push_back(t);
    out.points.push_back(s.point(t));
    return out;
  };
  constexpr double kExact = 1e-15;
  if (std::abs(g_first) <= kExact && samples.front().normal.dot(k) > 0) {
    return accept(samples.front().param, samples.front().normal);
  }
  if (std::abs(g_last) <= kExact && samples.back().normal.dot(k) > 0) {
    return accept(samples.back().param, samples.back().normal);
  }
  if ((g_first > 0) == (g_last > 0)) {
    throw Error(Errc::direction_not_attained, "direction outside the normal cone");
  }

  // The residual is monotone in the sample index; bracket by binary search.
  const bool rising = g_first < 0;
  std::size_t lo = 0, hi = samples.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    const double g = residual(samples[mid].normal);
    if ((g < 0) == rising) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double a = samples[lo].param(0), b = samples[hi].param(0);
  Vec best_t = samples[lo].param;
  Vec best_n = samples[lo].normal;
  double best_g = std::abs(residual(best_n));
  for (int it = 0; it < max_iterations; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const Vec tm = scalar_param(mid);
    const Vec n = s.normal(tm);
    const double g = residual(n);
    if (std::abs(g) < best_g) {
      best_g = std::abs(g);
      best_t = tm;
      best_n = n;
    }
    if (g == 0.0) break;
    if ((g < 0) == rising) {
      a = mid;
    } else {
      b = mid;
    }
    if (it + 1 == max_iterations && best_g > kInversionTolerance) {
      throw Error(Errc::convergence_failure, "Gauss map bisection did not converge");
    }
  }
  if (best_n.dot(k) <= 0.0) {
    throw Error(Errc::direction_not_attained, "direction outside the normal cone");
  }
  if (best_g > kInversionTolerance) {
    throw Error(Errc::convergence_failure, "Gauss map inversion residual above tolerance");
  }
  return accept(best_t, best_n);
}

GaussPreimage invert_curve_scan(const LevelSurface& s, const Vec& k, int max_iterations) {
  const auto samples = s.samples();
  constexpr double kFlat = 1e-12;
  GaussPreimage out;
  std::size_t i = 0;
  while (i < samples.size()) {
    const Vec& n = samples[i].normal;
    const double g = cross2(n, k);
    if (std::abs(g) <= kFlat && n.dot(k) > 0) {
      std::size_t j = i;
      while (j + 1 < samples.size() && std::abs(cross2(samples[j + 1].normal, k)) <= kFlat &&
             samples[j + 1].normal.dot(k) > 0) {
        ++j;
      }
      const std::size_t rep = (i + j) / 2;
      out.params.push_back(samples[rep].param);
      out.points.push_back(samples[rep].point);
      if (j > i) out.multivalued = true;
      i = j + 1;
      continue;
    }
    if (i + 1 < samples.size()) {
      const Vec& n2 = samples[i + 1].normal;
      const double g2 = cross2(n2, k);
      if (std::abs(g2) > kFlat && (g > 0) != (g2 > 0) && n.dot(k) > 0 && n2.dot(k) > 0) {
        double a = samples[i].param(0), b = samples[i + 1].param(0);
        const bool rising = g < 0;
        Vec t = samples[i].param;
        double res = std::abs(g);
        for (int it = 0; it < max_iterations; ++it) {
          const double mid = 0.5 * (a + b);
          if (mid <= a || mid >= b) break;
          const Vec tm = scalar_param(mid);
          const double gm = cross2(s.normal(tm), k);
          if (std::abs(gm) < res) {
            res = std::abs(gm);
            t = tm;
          }
          if (gm == 0.0) break;
          if ((gm < 0) == rising) {
            a = mid;
          } else {
            b = mid;
          }
        }
        if (res > kInversionTolerance) {
          throw Error(Errc::convergence_failure, "Gauss map refinement did not converge");
        }
        out.params.push_back(t);
        out.points.push_back(s.point(t));
      }
    }
    ++i;
  }
  if (out.points.empty()) {
    throw Error(Errc::direction_not_attained, "no point of the curve has this normal");
  }
  return out;
}

GaussPreimage invert_surface_newton(const LevelSurface& s, const Vec& k, int max_iterations) {
  const auto samples = s.samples();
  std::size_t best = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].normal.dot(k) > samples[best].normal.dot(k)) best = i;
  }
  Vec t = samples[best].param;
  const Vec lo = s.lower(), hi = s.upper();
  auto cross_norm = [&](const Vec& n) {
    const Eigen::Vector3d a(n(0), n(1), n(2)), b(k(0), k(1), k(2));
    return a.cross(b).norm();
  };
  Vec n = s.normal(t);
  double res = cross_norm(n);
  for (int it = 0; it < max_iterations && res > 1e-13; ++it) {
    Mat J(3, 2);
    for (int i = 0; i < 2; ++i) {
      auto along = [&](double x) {
        Vec u = t;
        u(i) = x;
        return s.normal(u);
      };
      J.col(i) = detail::derivative(along, t(i), s.curvature_step(i), lo(i), hi(i));
    }
    const Vec r = (k - n).eval();
    Vec step = J.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(r);
    const double max_step = 0.25 * std::max(hi(0) - lo(0), hi(1) - lo(1));
    if (step.norm() > max_step) step *= max_step / step.norm();
    Vec next = t + step;
    for (int i = 0; i < 2; ++i) next(i) = std::clamp(next(i), lo(i), hi(i));
    const Vec n_next = s.normal(next);
    const double res_next = cross_norm(n_next);
    if ((next - t).norm() < 1e-15) {
      t = next;
      n = n_next;
      res = res_next;
      break;
    }
    t = next;
    n = n_next;
    res = res_next;
  }
  if (res > kInversionTolerance || n.dot(k) <= 0) {
    bool on_boundary = false;
    for (int i = 0; i < 2; ++i) {
      if (t(i) <= lo(i) || t(i) >= hi(i)) on_boundary = true;
    }
    if (on_boundary || n.dot(k) <= 0) {
      throw Error(Errc::direction_not_attained, "direction outside the normal cone");
    }
    throw Error(Errc::convergence_failure, "Gauss map Newton iteration did not converge");
  }
  GaussPreimage out;
  out.params.push_back(t);
  out.points.push_back(s.point(t));
  return out;
}

}  // namespace

GaussPreimage invert_gauss_map(const LevelSurface& surface, const Vec& direction,
                               int max_iterations) {
  check_size(direction, surface.dimension(), "direction");
  const double len = direction.norm();
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw Error(Errc::invalid_argument, "direction must be a nonzero finite vector");
  }
  const Vec k = direction / len;
  if (surface.dimension() == 3) return invert_surface_newton(surface, k, max_iterations);
  if (surface.orientation() == Orientation::general) {
    return invert_curve_scan(surface, k, max_iterations);
  }
  return invert_curve_monotone(surface, k, max_iterations);
}

// ---------------------------------------------------------------------------
// Hausdorff distance

namespace {

double point_segment_distance(const Vec& x, const Vec& a, const Vec& b) {
  const Vec ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (x - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

double directed_distance(std::span<const Vec> from, std::span<const Vec> to, bool polyline) {
  std::vector<double> dist(from.size(), 0.0);
  detail::parallel_for(from.size(), [&](std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    if (polyline && to.size() >= 2) {
      for (std::size_t j = 0; j + 1 < to.size(); ++j) {
        best = std::min(best, point_segment_distance(from[i], to[j], to[j + 1]));
      }
    } else {
      for (const Vec& y : to) best = std::min(best, (from[i] - y).norm());
    }
    dist[i] = best;
  });
  return dist.empty() ? 0.0 : *std::max_element(dist.begin(), dist.end());
}

}  // namespace

double hausdorff_distance(std::span<const Vec> a, std::span<const Vec> b, bool polyline) {
  if (a.empty() || b.empty()) {
    throw Error(Errc::invalid_argument, "Hausdorff distance of an empty set");
  }
  return std::max(directed_distance(a, b, polyline), directed_distance(b, a, polyline));
}

double hausdorff_distance(const LevelSurface& a, const LevelSurface& b) {
  std::vector<Vec> pa, pb;
  for (const auto& s : a.samples()) pa.push_back(s.point);
  for (const auto& s : b.samples()) pb.push_back(s.point);
  return hausdorff_distance(pa, pb, a.dimension() == 2 && b.dimension() == 2);
}

// ---------------------------------------------------------------------------
// Gauge of a star-shaped curve

ToricProfile gauge_profile(const LevelSurface& curve, double fold_tolerance) {
  if (curve.dimension() != 2) {
    throw Error(Errc::invalid_argument, "gauge profiles are built from plane curves");
  }
  std::vector<double> params, angles;
  for (const auto& s : curve.samples()) {
    params.push_back(s.param(0));
    angles.push_back(std::atan2(s.point(1), s.point(0)));
  }
  const bool increasing = angles.back() > angles.front();
  const double dir = increasing ? 1.0 : -1.0;
  // Largest angular backtrack behind the running extreme.
  bool folded = false;
  double front = angles.front();
  for (std::size_t i = 1; i < angles.size(); ++i) {
    const double step = dir * (angles[i] - angles[i - 1]);
    if (step > 0.0) {
      front = increasing ? std::max(front, angles[i]) : std::min(front, angles[i]);
      continue;
    }
    folded = true;
    if (fold_tolerance <= 0.0 || dir * (front - angles[i]) > fold_tolerance) {
      throw Error(Errc::non_graphical, "curve is not star-shaped about the origin");
    }
  }
  const double a_min = std::min(angles.front(), angles.back());
  const double a_max = std::max(angles.front(), angles.back());

  auto value = [curve, params, angles, increasing, folded, a_min, a_max](const Vec& x) -> double {
    const double r = x.norm();
    if (r == 0.0) return 0.0;
    double psi = std::atan2(x(1), x(0));
    constexpr double kSlack = 1e-6;
    if (psi < a_min - kSlack || psi > a_max + kSlack) {
      throw Error(Errc::ray_miss, "ray leaves the angular range of the curve");
    }
    psi = std::clamp(psi, a_min, a_max);
    // Index of the first sample past psi in traversal order.
    auto beyond = [&](double a) { return increasing ? a > psi : a < psi; };
    std::size_t hi = 0;
    if (folded) {
      // First crossing in traversal order.
      while (hi < angles.size() && !beyond(angles[hi])) ++hi;
    } else {
      hi = static_cast<std::size_t>(
          std::partition_point(angles.begin(), angles.end(),
                               [&](double a) { return !beyond(a); }) -
          angles.begin());
    }
    if (hi == 0) hi = 1;
    if (hi >= angles.size()) hi = angles.size() - 1;
    double lo_t = params[hi - 1], hi_t = params[hi];
    for (int it2 = 0; it2 < 80; ++it2) {
      const double mid = 0.5 * (lo_t + hi_t);
      if (mid <= lo_t || mid >= hi_t) break;
      const Vec p = curve.point(mid);
      if (beyond(std::atan2(p(1), p(0)))) {
        hi_t = mid;
      } else {
        lo_t = mid;
      }
    }
    const Vec p = curve.point(0.5 * (lo_t + hi_t));
    return r / p.norm();
  };
  return ToricProfile(2, 1.0, value, {}, {}, "gauge");
}

}  // namespace ebk

#include "ebk/legendre.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <numbers>

#include "ebk/detail/parallel.hpp"
#include "ebk/errors.hpp"
#include "ebk/spline.hpp"

namespace ebk {

// ---------------------------------------------------------------------------
// Convex conjugate

Vec legendre_argmax(const ToricProfile& f, const Vec& q, const ConjugateOptions& opts) {
  if (q.size() != f.dimension()) {
    throw Error(Errc::invalid_argument, "conjugate argument has the wrong dimension");
  }
  if (!q.allFinite()) throw Error(Errc::invalid_argument, "conjugate argument must be finite");
  const double goal = opts.tolerance * std::max(1.0, q.norm());
  auto objective = [&](const Vec& p) { return f.value(p) - p.dot(q); };

  Vec p = q;
  double descent_scale = 1.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const Vec g = f.gradient(p) - q;
    const double gnorm = g.norm();
    const Mat H = f.hessian(p);
    const Eigen::LLT<Mat> llt(H);
    const bool newton = llt.info() == Eigen::Success;

    if (gnorm <= goal) {
      if (newton) {
        const Vec polished = p - llt.solve(g);
        if ((f.gradient(polished) - q).norm() <= gnorm) p = polished;
      }
      return p;
    }

    const Vec dir = newton ? Vec(-llt.solve(g)) : Vec(-descent_scale * g);
    const double psi = objective(p);
    const double slope = g.dot(dir);
    double t = 1.0;
    Vec next = p + dir;
    // A full Newton step that reduces the residual is always accepted; this
    // matters near the optimum where psi differences drown in rounding.
    bool accepted = newton && (f.gradient(next) - q).norm() < gnorm;
    while (!accepted) {
      if (objective(next) <= psi + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
      if (t < 1e-14) break;
      next = p + t * dir;
    }
    if (!accepted) {
      throw Error(Errc::convergence_failure, "line search failed in the conjugate solve");
    }
    if (!newton) descent_scale = t == 1.0 ? 2 * descent_scale : t * descent_scale;
    p = next;
    if (!p.allFinite() || p.norm() > opts.search_radius) {
      throw Error(Errc::not_attained, "supremum not attained within the search radius");
    }
  }
  throw Error(Errc::convergence_failure, "conjugate solve did not converge");
}

double convex_conjugate(const ToricProfile& f, const Vec& q, const ConjugateOptions& opts) {
  const Vec p0 = legendre_argmax(f, q, opts);
  return p0.dot(q) - f.value(p0);
}

ToricProfile conjugate_profile(const ToricProfile& f, const ConjugateOptions& opts) {
  const double d = f.degree();
  if (!(d > 1.0)) {
    throw Error(Errc::invalid_argument, "the conjugate of a profile needs degree > 1");
  }
  return ToricProfile(
      f.dimension(), d / (d - 1.0), [f, opts](const Vec& q) { return convex_conjugate(f, q, opts); },
      [f, opts](const Vec& q) { return legendre_argmax(f, q, opts); },
      [f, opts](const Vec& q) -> Mat {
        const Mat H = f.hessian(legendre_argmax(f, q, opts));
        return H.inverse();
      },
      "conjugate(" + f.name() + ")");
}

// ---------------------------------------------------------------------------
// Support function

namespace {

template <class Fn>
std::pair<double, double> golden_max(const Fn& fn, double a, double b) {
  constexpr double r = 0.6180339887498949;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = fn(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace

double support_function(const LevelSurface& surface, const Vec& q) {
  if (q.size() != surface.dimension()) {
    throw Error(Errc::invalid_argument, "support function argument has the wrong dimension");
  }
  const auto samples = surface.samples();
  if (samples.empty()) throw Error(Errc::invalid_argument, "empty surface");
  const double sign = surface.orientation() == Orientation::concave ? -1.0 : 1.0;

  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = sign * samples[i].point.dot(q);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  Vec t = samples[best].param;
  const Vec lo = surface.lower(), hi = surface.upper();
  const int m = surface.parameter_dimension();
  const int rounds = m == 1 ? 1 : 3;
  for (int round = 0; round < rounds; ++round) {
    for (int axis = 0; axis < m; ++axis) {
      const double reach = 4 * surface.curvature_step(axis) * (round == 0 ? 1.0 : 0.5);
      const double a = std::max(lo(axis), t(axis) - reach);
      const double b = std::min(hi(axis), t(axis) + reach);
      if (!(a < b)) continue;
      auto along = [&](double x) {
        Vec u = t;
        u(axis) = x;
        return sign * surface.point(u).dot(q);
      };
      const auto [x, v] = golden_max(along, a, b);
      if (v > best_value) {
        best_value = v;
        t(axis) = x;
      }
    }
  }
  return sign * best_value;
}

// ---------------------------------------------------------------------------
// Hypersurface Legendre transform

std::vector<Vec> nice_parameters(const LevelSurface& surface, const NicePointOptions& opts) {
  const auto samples = surface.samples();
  std::size_t curved = 0;
  for (const auto& s : samples) {
    if (std::isfinite(s.curvature) && std::abs(s.curvature) > opts.curvature_min) ++curved;
  }
  if (2 * curved <= samples.size()) {
    throw Error(Errc::too_few_nice_points,
                "curvature vanishes on at least half of the samples");
  }

  std::vector<std::size_t> idx;
  std::vector<Vec> mapped(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.curvature) || std::abs(s.curvature) <= opts.curvature_min) continue;
    if (std::abs(s.point.dot(s.normal)) <= opts.support_min) continue;
    mapped[i] = legendre_point(s.point, s.normal);
    idx.push_back(i);
  }

  if (surface.parameter_dimension() == 1 && idx.size() >= 2) {
    // Local injectivity: consecutive images may not coincide. Steps shrink
    // like |K| times the surface spacing, so no fixed ratio is used here.
    std::vector<std::size_t> kept = {idx.front()};
    for (std::size_t j = 1; j < idx.size(); ++j) {
      const Vec& a = mapped[kept.back()];
      const Vec& b = mapped[idx[j]];
      if ((b - a).norm() > 1e-12 * std::max(1.0, b.norm())) kept.push_back(idx[j]);
    }
    idx = std::move(kept);
  }

  if (idx.size() < opts.min_points) {
    throw Error(Errc::too_few_nice_points,
                std::to_string(idx.size()) + " nice samples, need " +
                    std::to_string(opts.min_points));
  }
  std::vector<Vec> params;
  params.reserve(idx.size());
  for (std::size_t i : idx) params.push_back(samples[i].param);
  return params;
}

LevelSurface hypersurface_transform(const LevelSurface& surface, const NicePointOptions& opts) {
  std::vector<Vec> params = nice_parameters(surface, opts);
  const int m = surface.parameter_dimension();
  LevelSurface::Definition def;
  def.dimension = surface.dimension();
  def.lower = params.front();
  def.upper = params.front();
  for (const Vec& t : params) {
    def.lower = def.lower.cwiseMin(t);
    def.upper = def.upper.cwiseMax(t);
  }
  for (int i = 0; i < m; ++i) {
    if (!(def.lower(i) < def.upper(i))) {
      throw Error(Errc::too_few_nice_points, "nice points do not span a parameter interval");
    }
  }
  def.point = [surface](const Vec& t) {
    return legendre_point(surface.point(t), surface.normal(t));
  };
  // Tangent vectors of L(N) are (I - n p^T / <p,n>) dn, all orthogonal to p,
  // so p itself is the new normal. Differencing the mapped samples instead
  // loses most digits where N is nearly flat and dn is tiny.
  def.normal = [surface](const Vec& t) { return surface.point(t); };
  def.sample_params = std::move(params);
  return LevelSurface(std::move(def));
}

// ---------------------------------------------------------------------------
// Reconstruction from the action spectrum

PointCloud cloud_from_actions(std::span<const MarkedActionEntry> entries) {
  PointCloud cloud;
  cloud.source = CloudSource::from_action_spectrum;
  for (const auto& e : entries) {
    if (e.action == 0.0) continue;
    cloud.points.push_back(e.k.cast<double>() / e.action);
  }
  return cloud;
}

namespace {

constexpr std::size_t kMinCloud = 20;

struct PolarFit {
  CubicSpline r;
  std::size_t distinct = 0;
};

PolarFit fit_polar(const PointCloud& cloud) {
  struct Polar {
    double theta, radius;
    Vec q;
  };
  std::vector<Polar> pts;
  for (const Vec& q : cloud.points) {
    if (q.size() != 2) {
      throw Error(Errc::invalid_argument, "reconstruction needs a planar cloud");
    }
    if (!q.allFinite()) throw Error(Errc::invalid_argument, "cloud points must be finite");
    if (q.norm() == 0.0) throw Error(Errc::invalid_argument, "cloud contains the origin");
    pts.push_back({std::atan2(q(1), q(0)), q.norm(), q});
  }
  std::sort(pts.begin(), pts.end(), [](const Polar& a, const Polar& b) {
    return a.theta != b.theta ? a.theta < b.theta : a.radius < b.radius;
  });
  std::vector<Polar> unique;
  for (const auto& p : pts) {
    if (!unique.empty() && (p.q - unique.back().q).norm() <= 1e-12) continue;
    unique.push_back(p);
  }
  if (unique.size() < kMinCloud) {
    throw Error(Errc::insufficient_cloud, std::to_string(unique.size()) +
                                              " distinct cloud points, need at least " +
                                              std::to_string(kMinCloud));
  }
  std::vector<double> theta, radius;
  for (const auto& p : unique) {
    if (!theta.empty() && p.theta - theta.back() <= 1e-14) {
      throw Error(Errc::non_graphical, "two cloud points on one ray from the origin");
    }
    theta.push_back(p.theta);
    radius.push_back(p.radius);
  }
  // Where the cloud ends on a coordinate axis inside the quadrant, the polar
  // radius of a curve symmetric across that axis is flat.
  const bool in_quadrant =
      theta.front() >= -1e-12 && theta.back() <= std::numbers::pi / 2 + 1e-12;
  CubicSpline::EndCondition left, right;
  if (in_quadrant && std::abs(theta.front()) <= 1e-12) left.slope = 0.0;
  if (in_quadrant && std::abs(theta.back() - std::numbers::pi / 2) <= 1e-12) right.slope = 0.0;
  return {CubicSpline(theta, radius, left, right), unique.size()};
}

LevelSurface fitted_curve(const CubicSpline& r) {
  LevelSurface::Definition def;
  def.dimension = 2;
  def.lower = scalar_param(r.front());
  def.upper = scalar_param(r.back());
  def.point = [r](const Vec& t) {
    const double th = t(0);
    return (r(th) * vec2(std::cos(th), std::sin(th))).eval();
  };
  // Outward normal: the tangent q' = r' u + r u_perp turned clockwise.
  def.normal = [r](const Vec& t) {
    const double th = t(0);
    const double c = std::cos(th), s = std::sin(th);
    const double rr = r(th), dr = r.evaluate(th, 1);
    const Vec dq = vec2(dr * c - rr * s, dr * s + rr * c);
    return vec2(dq(1), -dq(0));
  };
  return LevelSurface(std::move(def));
}

}  // namespace

Reconstruction reconstruct(const PointCloud& cloud, const LevelSurface* reference,
                           const NicePointOptions& opts) {
  const PolarFit fit = fit_polar(cloud);
  const LevelSurface m_curve = fitted_curve(fit.r);
  LevelSurface n_curve = hypersurface_transform(m_curve, opts);
  ReconstructionReport report;
  report.cloud_size = cloud.points.size();
  report.nice_count = n_curve.samples().size();
  report.knots = fit.r.knots();
  if (reference) report.hausdorff = hausdorff_distance(n_curve, *reference);
  return {std::move(n_curve), std::move(report)};
}

LevelSurface reconstruct_surface(const PointCloud& cloud, const NicePointOptions& opts) {
  return reconstruct(cloud, nullptr, opts).surface;
}

std::string report_to_json(const ReconstructionReport& report) {
  nlohmann::json j;
  j["cloud_size"] = report.cloud_size;
  j["nice_count"] = report.nice_count;
  j["knots"] = report.knots;
  j["hausdorff"] = report.hausdorff ? nlohmann::json(*report.hausdorff) : nlohmann::json();
  return j.dump(2) + "\n";
}

}  // namespace ebk

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ebk/billiard.hpp"
#include "ebk/errors.hpp"
#include "ebk/legendre.hpp"

using namespace ebk;
using std::numbers::pi;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ebk::Error");
  return Errc::invalid_argument;
}

std::vector<Vec> points_of(const LevelSurface& s) {
  std::vector<Vec> out;
  for (const auto& smp : s.samples()) out.push_back(smp.point);
  return out;
}

// Samples of `s` whose parameter lies in [lo, hi].
std::vector<Vec> points_within(const LevelSurface& s, double lo, double hi) {
  std::vector<Vec> out;
  for (const auto& smp : s.samples()) {
    if (smp.param(0) >= lo && smp.param(0) <= hi) out.push_back(smp.point);
  }
  return out;
}

}  // namespace

TEST_CASE("convex conjugate") {
  SUBCASE("quadratic is self-conjugate") {
    const ToricProfile f = ToricProfile::power_sum(2.0, 2);
    CHECK(convex_conjugate(f, vec2(1, 2)) == doctest::Approx(2.5).epsilon(1e-12));
  }
  SUBCASE("quartic in one variable") {
    const ToricProfile f = ToricProfile::power_sum(4.0, 1);
    Vec q(1);
    q << 8.0;
    CHECK(legendre_argmax(f, q)(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(convex_conjugate(f, q) == doctest::Approx(12.0).epsilon(1e-12));
  }
  SUBCASE("double conjugate") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const ToricProfile f = ToricProfile::power_sum(2.0, 2);
    const ToricProfile ff = conjugate_profile(conjugate_profile(f));
    for (int i = 0; i < 10; ++i) {
      const Vec p = vec2(u(rng), u(rng));
      CHECK(std::abs(ff(p) - f(p)) <= 1e-8 * std::max(1.0, f(p)));
    }
  }
  SUBCASE("linear functions have no finite conjugate") {
    const ToricProfile f = ToricProfile::linear(vec2(1, 2));
    CHECK(code_of([&] { convex_conjugate(f, vec2(3, 3)); }) == Errc::not_attained);
  }
  SUBCASE("conjugate degree") {
    const ToricProfile g = conjugate_profile(ToricProfile::power_sum(4.0, 2));
    CHECK(g.degree() == doctest::Approx(4.0 / 3.0));
    const Vec q = vec2(0.7, 1.1);
    CHECK(g(2.0 * q) == doctest::Approx(std::pow(2.0, 4.0 / 3.0) * g(q)).epsilon(1e-10));
    CHECK(code_of([] { conjugate_profile(ToricProfile::pnorm(2.0)); }) == Errc::invalid_argument);
  }
}

TEST_CASE("support function") {
  const LevelSurface circle = LevelSurface::from_profile(ToricProfile::pnorm(2.0));
  CHECK(support_function(circle, vec2(3, 4)) == doctest::Approx(5.0).epsilon(1e-12));

  const LevelSurface seg = LevelSurface::from_profile(ToricProfile::linear(vec2(1, 2)));
  CHECK(support_function(seg, vec2(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));

  const LevelSurface ramos = ramos_curve();
  CHECK(support_function(ramos, vec2(1, 1)) == doctest::Approx(2.0).epsilon(1e-12));

  for (const auto* s : {&circle, &ramos}) {
    for (const Vec& q : {vec2(0.3, 1.7), vec2(2.0, 0.1)}) {
      const double base = support_function(*s, q);
      for (double t : {2.0, 10.0}) {
        CHECK(std::abs(support_function(*s, t * q) - t * base) <= 1e-12 * t * std::abs(base));
      }
    }
  }
}

TEST_CASE("hypersurface transform") {
  SUBCASE("circle is self-dual") {
    const LevelSurface circle = LevelSurface::from_profile(ToricProfile::pnorm(2.0));
    const LevelSurface dual = hypersurface_transform(circle);
    for (const auto& smp : dual.samples()) CHECK(std::abs(smp.point.norm() - 1.0) <= 1e-12);
  }
  SUBCASE("ellipse arc goes to the dual ellipse and back") {
    // p1^2/4 + p2^2 = 1 as the level set of a 1-homogeneous profile.
    const ToricProfile f(
        2, 1.0, [](const Vec& p) { return std::sqrt(p(0) * p(0) / 4 + p(1) * p(1)); },
        [](const Vec& p) {
          const double r = std::sqrt(p(0) * p(0) / 4 + p(1) * p(1));
          return vec2(p(0) / (4 * r), p(1) / r);
        });
    const LevelSurface n = LevelSurface::from_profile(f);
    const LevelSurface dual = hypersurface_transform(n);
    // dual ellipse: 4 q1^2 + q2^2 = 1
    for (const auto& smp : dual.samples()) {
      const Vec& q = smp.point;
      CHECK(std::abs(4 * q(0) * q(0) + q(1) * q(1) - 1.0) <= 1e-9);
    }
    const LevelSurface back = hypersurface_transform(dual);
    const auto truth = points_within(n, back.lower()(0), back.upper()(0));
    CHECK(hausdorff_distance(points_of(back), truth) <= 1e-6);
  }
  SUBCASE("involution on superellipses") {
    for (double s : {2.0, 3.0, 4.0}) {
      const LevelSurface n = LevelSurface::from_profile(ToricProfile::pnorm(s));
      const LevelSurface twice = hypersurface_transform(hypersurface_transform(n));
      double worst = 0;
      for (const auto& smp : twice.samples()) {
        worst = std::max(worst, (smp.point - n.point(smp.param)).norm());
      }
      CHECK(worst <= 1e-8);
    }
  }
  SUBCASE("dual support function is one on the primal") {
    const LevelSurface n = LevelSurface::from_profile(ToricProfile::pnorm(3.0));
    const LevelSurface dual = hypersurface_transform(n);
    for (std::size_t i = 0; i < n.samples().size(); i += 97) {
      CHECK(std::abs(support_function(dual, n.samples()[i].point) - 1.0) <= 1e-6);
    }
  }
  SUBCASE("flat segment has no nice points") {
    const LevelSurface seg = LevelSurface::from_profile(ToricProfile::linear(vec2(1, 2)));
    CHECK(code_of([&] { hypersurface_transform(seg); }) == Errc::too_few_nice_points);
  }
  SUBCASE("three-dimensional forward transform") {
    const LevelSurface sphere = LevelSurface::from_profile(ToricProfile::pnorm(2.0, 3), 24);
    const LevelSurface dual = hypersurface_transform(sphere);
    for (const auto& smp : dual.samples()) CHECK(std::abs(smp.point.norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("reconstruction from action spectra") {
  SUBCASE("quarter circle") {
    const LevelSurface circle = LevelSurface::from_profile(ToricProfile::pnorm(2.0));
    const auto entries = marked_action_spectrum(circle, 50);
    const Reconstruction r = reconstruct(cloud_from_actions(entries), &circle);
    REQUIRE(r.report.hausdorff);
    CHECK(*r.report.hausdorff < 1e-3);
    CHECK(r.report.cloud_size == entries.size());
    CHECK(r.report.nice_count >= 10);
    CHECK(r.surface.orientation() == Orientation::convex);
  }
  SUBCASE("quartic superellipse") {
    const LevelSurface n = LevelSurface::from_profile(ToricProfile::pnorm(4.0));
    const auto entries = marked_action_spectrum(n, 100);
    const Reconstruction r = reconstruct(cloud_from_actions(entries), &n);
    CHECK(*r.report.hausdorff < 1e-2);
    CHECK(report_to_json(r.report).find("nice_count") != std::string::npos);
  }
  SUBCASE("bad clouds") {
    PointCloud small;
    for (int i = 0; i < 5; ++i) small.points.push_back(vec2(std::cos(0.1 * i), std::sin(0.1 * i)));
    CHECK(code_of([&] { reconstruct_surface(small); }) == Errc::insufficient_cloud);

    PointCloud ray;
    for (int i = 0; i < 30; ++i) {
      const double a = 0.05 * i;
      ray.points.push_back(vec2(std::cos(a), std::sin(a)));
    }
    ray.points.push_back(2.0 * ray.points[3]);
    CHECK(code_of([&] { reconstruct_surface(ray); }) == Errc::non_graphical);

    PointCloud dup = small;
    for (int i = 0; i < 5; ++i) dup.points.insert(dup.points.end(), small.points.begin(), small.points.end());
    CHECK(code_of([&] { reconstruct_surface(dup); }) == Errc::insufficient_cloud);
  }
}

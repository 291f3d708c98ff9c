#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ebk/errors.hpp"
#include "ebk/profile_spec.hpp"

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

}  // namespace

TEST_CASE("builtin profiles") {
  const auto h = resolve_profile("harmonic:1,2");
  CHECK(h.profile(vec2(1, 1)) == 3.0);
  CHECK(h.profile.degree() == 1.0);

  const auto h3 = resolve_profile("harmonic:1,2,3");
  CHECK(h3.profile.dimension() == 3);

  const auto c = resolve_profile("circle");
  CHECK(c.profile(vec2(3, 4)) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(c.surface.orientation() == Orientation::convex);

  const auto s = resolve_profile("superellipse:4");
  CHECK(s.profile(vec2(1, 1)) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
  CHECK(resolve_profile("pnorm:3").profile(vec2(1, 0)) == 1.0);

  const auto p = resolve_profile("power:2,2");
  CHECK(p.profile.degree() == 2.0);
  CHECK(p.profile(vec2(3, 4)) == doctest::Approx(25.0).epsilon(1e-14));

  const auto r = resolve_profile("ramos");
  CHECK(r.surface.orientation() == Orientation::concave);
  CHECK(r.profile(vec2(1, 1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bad builtin specs") {
  CHECK(code_of([] { resolve_profile("harmonic:1,x"); }) == Errc::parse_error);
  CHECK(code_of([] { resolve_profile("harmonic:1,-2"); }) == Errc::invalid_argument);
  CHECK(code_of([] { resolve_profile("harmonic:1,2,3,4"); }) == Errc::invalid_argument);
  CHECK(code_of([] { resolve_profile("power:2"); }) == Errc::invalid_argument);
  CHECK(code_of([] { resolve_profile("power:2,0"); }) == Errc::invalid_argument);
  CHECK(code_of([] { resolve_profile("pnorm:3,4"); }) == Errc::invalid_argument);
  CHECK(code_of([] { resolve_profile("/no/such/profile.json"); }) == Errc::invalid_argument);
}

TEST_CASE("JSON profiles") {
  SUBCASE("linear") {
    const auto r = parse_profile_json(R"({"kind": "linear", "params": {"omega": [1, 2]}})");
    CHECK(r.profile(vec2(2, 1)) == 4.0);
    CHECK(r.kind == "linear");
  }
  SUBCASE("superellipse with degree") {
    const auto r = parse_profile_json(
        R"({"kind": "superellipse", "params": {"s": 4}, "degree": 2, "dimension": 2})");
    CHECK(r.profile.degree() == 2.0);
    CHECK(r.profile(vec2(1, 1)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(r.surface.orientation() == Orientation::convex);
  }
  SUBCASE("three dimensions") {
    const auto r =
        parse_profile_json(R"({"kind": "pnorm", "params": {"s": 2}, "dimension": 3})");
    CHECK(r.profile(vec3(1, 2, 2)) == doctest::Approx(3.0).epsilon(1e-14));
  }
  SUBCASE("ramos raised to a degree") {
    const auto r = parse_profile_json(R"({"kind": "ramos", "degree": 2})");
    CHECK(r.profile(vec2(2, 2)) == doctest::Approx(4.0).epsilon(1e-10));
  }
  SUBCASE("custom table") {
    std::ostringstream os;
    os << R"({"kind": "custom-table", "params": {"points": [)";
    for (int i = 0; i <= 64; ++i) {
      const double t = 0.5 * pi * i / 64;
      if (i) os << ',';
      os << '[' << t << ',' << std::cos(t) << ',' << std::sin(t) << ']';
    }
    os << R"(], "orientation": "convex"}})";
    const auto r = parse_profile_json(os.str());
    CHECK(r.surface.orientation() == Orientation::convex);
    CHECK(r.profile(vec2(3, 4)) == doctest::Approx(5.0).epsilon(1e-4));
  }
  SUBCASE("errors") {
    CHECK(code_of([] { parse_profile_json("{"); }) == Errc::parse_error);
    CHECK(code_of([] { parse_profile_json(R"({"params": {}})"); }) == Errc::parse_error);
    CHECK(code_of([] { parse_profile_json(R"({"kind": "cubic"})"); }) == Errc::invalid_argument);
    CHECK(code_of([] { parse_profile_json(R"({"kind": "linear", "params": {"omega": [1]}})"); }) ==
          Errc::invalid_argument);
    CHECK(code_of([] {
            parse_profile_json(R"({"kind": "linear", "params": {"omega": [1, 2]}, "degree": 2})");
          }) == Errc::invalid_argument);
    CHECK(code_of([] {
            parse_profile_json(R"({"kind": "custom-table", "params": {"points": [[0, 1]]}})");
          }) == Errc::parse_error);
    CHECK(code_of([] { parse_profile_json(R"({"kind": "pnorm", "params": {"s": 3}, "degree": -1})"); }) ==
          Errc::invalid_argument);
  }
}

TEST_CASE("profile files") {
  const std::string path = "test_profile_spec_tmp.json";
  {
    std::ofstream f(path);
    f << R"({"kind": "pnorm", "params": {"s": 2}})";
  }
  const auto r = resolve_profile(path);
  CHECK(r.profile(vec2(3, 4)) == doctest::Approx(5.0).epsilon(1e-15));
  std::remove(path.c_str());
}

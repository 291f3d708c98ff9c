#include "ebk/billiard.hpp"

#include <cmath>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

#include "ebk/detail/parallel.hpp"
#include "ebk/ebk.hpp"
#include "ebk/errors.hpp"

namespace ebk {

namespace {

constexpr double kPi = std::numbers::pi;

void check_quantum_number(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw Error(Errc::invalid_argument, std::string(what) + " must be finite and non-negative");
  }
}

}  // namespace

double f_m(double m, double x) {
  check_quantum_number(m, "m");
  if (!(x >= m)) throw Error(Errc::domain_error, "f_m(x) needs x >= m");
  if (m == 0.0) return x;
  const double root = std::sqrt((x - m) * (x + m));
  // atan2 form of arccos(m / x), accurate near x = m
  return root - m * std::atan2(root, m);
}

double f_m_derivative(double m, double x) {
  check_quantum_number(m, "m");
  if (!(x >= m) || x == 0.0) throw Error(Errc::domain_error, "f_m'(x) needs x >= m, x > 0");
  return std::sqrt((x - m) * (x + m)) / x;
}

double energy_from_F(double F, double R, double hbar) {
  if (!(R > 0.0) || !(hbar > 0.0)) {
    throw Error(Errc::invalid_argument, "radius and hbar must be positive");
  }
  return hbar * hbar * F * F / (2.0 * R * R);
}

BilliardLevel solve_F(double m, double n, double tol, double R, double hbar) {
  check_quantum_number(m, "m");
  check_quantum_number(n, "n");
  if (!(tol > 0.0)) throw Error(Errc::invalid_argument, "tolerance must be positive");
  BilliardLevel level{m, n, m, 0.0, R, hbar, 0.0};
  if (n == 0.0) {
    level.E = energy_from_F(m, R, hbar);
    return level;
  }
  const double target = n * kPi;
  double lo = m, hi = m + target + 1.0;
  while (f_m(m, hi) < target) {
    lo = hi;
    hi = m + 2.0 * (hi - m);
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double g = f_m(m, x) - target;
    if (g == 0.0) break;
    if (g < 0) {
      lo = x;
    } else {
      hi = x;
    }
    const double slope = f_m_derivative(m, x);
    double next = slope > 0 ? x - g / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x || hi - lo <= 2 * std::numeric_limits<double>::epsilon() * hi) break;
    x = next;
  }
  // Pick the best of the final bracket.
  double best = x;
  for (double c : {lo, hi}) {
    if (std::abs(f_m(m, c) - target) < std::abs(f_m(m, best) - target)) best = c;
  }
  level.F = best;
  level.residual = std::abs(f_m(m, best) - target);
  if (level.residual > tol) {
    throw Error(Errc::convergence_failure, "F root residual above tolerance");
  }
  level.E = energy_from_F(best, R, hbar);
  return level;
}

Vec ramos_point(double alpha) {
  const double s = std::sin(alpha), c = std::cos(alpha);
  return vec2(s - alpha * c, s + (kPi - alpha) * c);
}

Vec ramos_tangent(double alpha) {
  const double s = std::sin(alpha);
  return vec2(alpha * s, (alpha - kPi) * s);
}

Vec ramos_normal_direction(double alpha) { return vec2(kPi - alpha, alpha); }

LevelSurface ramos_curve(int resolution) {
  LevelSurface::Definition def;
  def.dimension = 2;
  def.lower = scalar_param(0.0);
  def.upper = scalar_param(kPi);
  def.point = [](const Vec& t) { return ramos_point(t(0)); };
  def.normal = [](const Vec& t) { return ramos_normal_direction(t(0)); };
  def.orientation = Orientation::concave;
  def.resolution = resolution;
  return LevelSurface(std::move(def));
}

ToricProfile ramos_profile() {
  static const ToricProfile gauge = [] {
    const ToricProfile g = gauge_profile(ramos_curve());
    return ToricProfile(
        2, 1.0, [g](const Vec& p) { return g.value(p); }, {}, {}, "ramos");
  }();
  return gauge;
}

double ramos_action(int k1, int k2) {
  if (k1 < 0 || k2 < 0 || k1 + k2 < 1) {
    throw Error(Errc::invalid_argument, "Ramos classes need k1, k2 >= 0 and k1 + k2 >= 1");
  }
  const int s = k1 + k2;
  return s * std::sin(kPi * k2 / s);
}

std::vector<MarkedActionEntry> ramos_entries(int k_max, const MaslovShift& shift) {
  if (k_max < 1) throw Error(Errc::invalid_argument, "k_max must be at least 1");
  const Vec mu = shift.resolved(2);
  std::vector<std::vector<MarkedActionEntry>> rows(static_cast<std::size_t>(k_max + 1));
  detail::parallel_for(
      rows.size(),
      [&](std::size_t r) {
        const int k1 = static_cast<int>(r);
        for (int k2 = 0; k2 <= k_max; ++k2) {
          if (std::gcd(k1, k2) != 1) continue;
          const IntVec k = ivec2(k1, k2);
          const double a = ramos_action(k1, k2) + mu.dot(k.cast<double>());
          // sin(pi) is not exactly zero; the axis classes carry no action.
          if (k1 == 0 || k2 == 0) {
            if (mu.dot(k.cast<double>()) == 0.0) continue;
          }
          if (a == 0.0) continue;
          const double alpha = kPi * k2 / (k1 + k2);
          rows[r].push_back({k, a, ramos_point(alpha)});
        }
      },
      16);
  std::vector<MarkedActionEntry> out;
  std::size_t total = 0;
  for (const auto& r : rows) total += r.size();
  out.reserve(total);
  for (auto& r : rows) {
    for (auto& e : r) out.push_back(std::move(e));
  }
  return out;
}

CrosscheckReport crosscheck(std::span<const MarkedActionEntry> entries, int m1, int m2,
                            const MaslovShift& shift, double hbar) {
  if (m1 < 0 || m2 < m1) throw Error(Errc::invalid_argument, "crosscheck needs 0 <= m1 <= m2");
  const Vec mu = shift.resolved(2);
  const SpectrumLevel level =
      variational_level(entries, Orientation::concave, 1.0, ivec2(m1, m2), hbar, shift);
  CrosscheckReport r;
  r.m1 = m1;
  r.m2 = m2;
  for (const auto& e : entries) r.k_max = std::max(r.k_max, e.k.cwiseAbs().maxCoeff());
  r.mu = mu;
  r.hbar = hbar;
  r.E_toric = level.energy;
  r.F_route = kPi * level.energy / hbar;
  r.F_ref = solve_F((m2 + mu(1)) - (m1 + mu(0)), m1 + mu(0), 1e-12).F;
  r.difference = r.F_route - r.F_ref;
  r.error_estimate = kPi * level.truncation_error / hbar;
  r.argmin_k = level.extremal_k.value_or(IntVec());
  return r;
}

CrosscheckReport crosscheck(int m1, int m2, int k_max, const MaslovShift& shift, double hbar) {
  if (k_max < 10) throw Error(Errc::invalid_argument, "crosscheck needs k_max >= 10");
  const auto entries = ramos_entries(k_max);
  return crosscheck(entries, m1, m2, shift, hbar);
}

std::string crosscheck_to_json(std::span<const CrosscheckReport> reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["m1"] = r.m1;
    j["m2"] = r.m2;
    j["k_max"] = r.k_max;
    j["mu"] = std::vector<double>(r.mu.begin(), r.mu.end());
    j["hbar"] = r.hbar;
    j["E_toric"] = r.E_toric;
    j["F_route"] = r.F_route;
    j["F_ref"] = r.F_ref;
    j["difference"] = r.difference;
    j["error_estimate"] = r.error_estimate;
    j["argmin_k"] = std::vector<int>(r.argmin_k.begin(), r.argmin_k.end());
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

void write_levels_csv(std::ostream& out, std::span<const BilliardLevel> levels) {
  out << "m,n,F,E,residual\n";
  for (const auto& l : levels) {
    out << format_number(l.m) << ',' << format_number(l.n) << ',' << format_number(l.F) << ','
        << format_number(l.E) << ',' << format_number(l.residual) << '\n';
  }
}

}  // namespace ebk

#include "ebk/ebk.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <ostream>

#include "ebk/detail/parallel.hpp"
#include "ebk/errors.hpp"
#include "ebk/legendre.hpp"

namespace ebk {

const char* to_string(Route r) noexcept {
  switch (r) {
    case Route::direct: return "direct";
    case Route::variational: return "variational";
    case Route::reconstruction: return "reconstruction";
  }
  return "direct";
}

const SpectrumLevel* EbkSpectrum::find(const IntVec& m) const {
  const auto it = std::lower_bound(levels.begin(), levels.end(), m,
                                   [](const SpectrumLevel& l, const IntVec& x) {
                                     return lex_less(l.m, x);
                                   });
  if (it == levels.end() || it->m.size() != m.size() || it->m != m) return nullptr;
  return &*it;
}

double EbkSpectrum::energy(const IntVec& m) const {
  const SpectrumLevel* l = find(m);
  if (!l) throw Error(Errc::invalid_argument, "lattice point not in the spectrum table");
  return l->energy;
}

std::vector<IntVec> lattice_points(int n, int m_max) {
  if (n < 1 || n > kMaxDimension) throw Error(Errc::invalid_argument, "dimension out of range");
  if (m_max < 0) throw Error(Errc::invalid_argument, "m_max must be non-negative");
  std::vector<IntVec> out;
  IntVec m = IntVec::Zero(n);
  while (true) {
    out.push_back(m);
    int j = n - 1;
    while (j >= 0 && m(j) == m_max) {
      m(j) = 0;
      --j;
    }
    if (j < 0) break;
    ++m(j);
  }
  return out;
}

namespace {

void check_hbar(double hbar) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw Error(Errc::invalid_argument, "hbar must be positive");
  }
}

}  // namespace

EbkSpectrum direct_spectrum(const ToricProfile& f, int m_max, double hbar,
                            const MaslovShift& shift) {
  check_hbar(hbar);
  const int n = f.dimension();
  const Vec mu = shift.resolved(n);
  EbkSpectrum out;
  out.shift = shift;
  out.degree = f.degree();
  out.hbar = hbar;
  out.route = Route::direct;
  const auto ms = lattice_points(n, m_max);
  out.levels.resize(ms.size());
  detail::parallel_for(
      ms.size(),
      [&](std::size_t i) {
        const Vec x = hbar * (ms[i].cast<double>() + mu);
        if ((x.array() < 0.0).any()) {
          throw Error(Errc::domain_error, "hbar (m + mu) has a negative component");
        }
        const double E = f.value(x);
        if (!std::isfinite(E)) throw Error(Errc::domain_error, "profile value is not finite");
        out.levels[i] = {ms[i], E, std::nullopt, 0.0};
      },
      16);
  return out;
}

namespace {

void validate_entries(std::span<const MarkedActionEntry> entries, int n) {
  if (entries.empty()) throw Error(Errc::empty_spectrum, "no marked action entries");
  for (const auto& e : entries) {
    if (e.k.size() != n) {
      throw Error(Errc::invalid_argument, "entries and lattice point differ in dimension");
    }
    if (!(e.action > 0.0) || !std::isfinite(e.action)) {
      throw Error(Errc::invalid_argument, "entry actions must be positive and finite");
    }
  }
}

constexpr double kReconstructionFoldTolerance = 1e-2;

int inf_norm(const IntVec& k) { return k.cwiseAbs().maxCoeff(); }

struct Extremum {
  double value;
  const IntVec* k = nullptr;
};

}  // namespace

SpectrumLevel variational_level(std::span<const MarkedActionEntry> entries,
                                Orientation orientation, double degree, const IntVec& m,
                                double hbar, const MaslovShift& shift) {
  check_hbar(hbar);
  if (orientation == Orientation::general) {
    throw Error(Errc::invalid_argument, "the variational route needs a convex or concave surface");
  }
  if (!(degree > 0.0)) throw Error(Errc::invalid_argument, "degree must be positive");
  const int n = static_cast<int>(m.size());
  validate_entries(entries, n);
  const Vec x = hbar * (m.cast<double>() + shift.resolved(n));
  const double sign = orientation == Orientation::convex ? 1.0 : -1.0;

  int K = 0;
  for (const auto& e : entries) K = std::max(K, inf_norm(e.k));
  const int bounds[3] = {std::max(1, K / 4), std::max(1, K / 2), K};

  // Extremum of sign * ratio over entries with |k|_inf <= bounds[i].
  Extremum best[3];
  for (auto& b : best) b.value = -std::numeric_limits<double>::infinity();
  for (const auto& e : entries) {
    const double ratio = sign * x.dot(e.k.cast<double>()) / e.action;
    const int norm = inf_norm(e.k);
    for (int i = 0; i < 3; ++i) {
      if (norm > bounds[i]) continue;
      Extremum& b = best[i];
      const double tie = 1e-12 * std::max(1.0, std::abs(b.value));
      if (!b.k || ratio > b.value + tie) {
        b.value = ratio;
        b.k = &e.k;
      } else if (ratio >= b.value - tie && lex_less(e.k, *b.k)) {
        b.value = std::max(b.value, ratio);
        b.k = &e.k;
      }
    }
  }

  auto energy = [&](double v) { return std::pow(std::max(0.0, sign * v), degree); };
  SpectrumLevel level;
  level.m = m;
  level.energy = energy(best[2].value);
  level.extremal_k = *best[2].k;

  // Richardson-style tail estimate from the K/4, K/2, K sequence. Windows
  // holding no entry carry no information: with only the last one populated
  // the estimate is unknown (NaN), with two it is the last increment.
  const double v3 = sign * best[2].value;
  double tail = std::numeric_limits<double>::quiet_NaN();
  if (best[1].k) {
    const double v2 = sign * best[1].value, d2 = v3 - v2;
    tail = std::abs(d2);
    if (best[0].k) {
      const double d1 = v2 - sign * best[0].value;
      const double ratio = d1 != 0.0 ? d2 / d1 : 0.0;
      if (ratio > 0.0 && ratio < 1.0) tail = std::abs(d2) * ratio / (1.0 - ratio);
    }
  }
  const double base = std::max(0.0, v3);
  level.truncation_error =
      degree == 1.0 ? tail : std::abs(std::pow(base + tail, degree) - std::pow(base, degree));
  return level;
}

EbkSpectrum variational_spectrum(std::span<const MarkedActionEntry> entries,
                                 Orientation orientation, double degree, int m_max, double hbar,
                                 const MaslovShift& shift) {
  if (entries.empty()) throw Error(Errc::empty_spectrum, "no marked action entries");
  const int n = static_cast<int>(entries.front().k.size());
  EbkSpectrum out;
  out.shift = shift;
  out.degree = degree;
  out.hbar = hbar;
  out.route = Route::variational;
  out.orientation = orientation;
  const auto ms = lattice_points(n, m_max);
  out.levels.resize(ms.size());
  detail::parallel_for(
      ms.size(),
      [&](std::size_t i) {
        out.levels[i] = variational_level(entries, orientation, degree, ms[i], hbar, shift);
      },
      1);
  return out;
}

std::vector<CertificateValue> minmax_certificate(std::span<const MarkedActionEntry> entries,
                                                 double E, const IntVec& m,
                                                 const MaslovShift& shift, double hbar,
                                                 std::span<const int> ells,
                                                 Orientation orientation,
                                                 std::optional<int> multiple_bound) {
  check_hbar(hbar);
  const int n = static_cast<int>(m.size());
  validate_entries(entries, n);
  if (orientation == Orientation::general) {
    throw Error(Errc::invalid_argument, "the certificate needs a convex or concave surface");
  }
  const Vec x = hbar * (m.cast<double>() + shift.resolved(n));
  const double sign = orientation == Orientation::convex ? 1.0 : -1.0;

  std::vector<CertificateValue> out;
  for (int ell : ells) {
    if (ell < 1) throw Error(Errc::invalid_argument, "levels l start at 1");
    bool found = false;
    CertificateValue best{ell, 0.0, IntVec()};
    for (const auto& e : entries) {
      if ((e.k.array() <= 0).any()) continue;
      int mult = 1;
      for (int j = 0; j < n; ++j) mult = std::max(mult, (ell + e.k(j) - 1) / e.k(j));
      if (multiple_bound && static_cast<long>(mult) * inf_norm(e.k) > *multiple_bound) continue;
      const double v = mult * (E * e.action - x.dot(e.k.cast<double>()));
      if (!found || sign * v < sign * best.value ||
          (sign * v == sign * best.value && lex_less(e.k * mult, best.k))) {
        best.value = v;
        best.k = e.k * mult;
        found = true;
      }
    }
    if (!found) {
      throw Error(Errc::no_qualifying_directions,
                  "no entry has a multiple with all components >= " + std::to_string(ell));
    }
    out.push_back(best);
  }
  return out;
}

double certificate_constant(const LevelSurface& surface) {
  double c = std::numeric_limits<double>::infinity();
  for (const auto& s : surface.samples()) c = std::min(c, s.point.maxCoeff());
  return c;
}

EbkSpectrum reconstruction_spectrum(std::span<const MarkedActionEntry> entries, int m_max,
                                    double hbar, const MaslovShift& shift, double degree) {
  check_hbar(hbar);
  if (entries.empty()) throw Error(Errc::empty_spectrum, "no marked action entries");
  if (!(degree > 0.0)) throw Error(Errc::invalid_argument, "degree must be positive");
  const int n = static_cast<int>(entries.front().k.size());
  if (n != 2) throw Error(Errc::invalid_argument, "reconstruction works in the plane only");
  const Vec mu = shift.resolved(n);
  const LevelSurface curve = reconstruct_surface(cloud_from_actions(entries));
  // Spline overshoot near a flat stretch of the cloud leaves small swallowtails
  // in the reconstructed curve.
  const ToricProfile gauge = gauge_profile(curve, kReconstructionFoldTolerance);

  EbkSpectrum out;
  out.shift = shift;
  out.degree = degree;
  out.hbar = hbar;
  out.route = Route::reconstruction;
  out.orientation = curve.orientation();
  const auto ms = lattice_points(n, m_max);
  out.levels.resize(ms.size());
  detail::parallel_for(
      ms.size(),
      [&](std::size_t i) {
        const Vec x = hbar * (ms[i].cast<double>() + mu);
        if ((x.array() < 0.0).any()) {
          throw Error(Errc::domain_error, "hbar (m + mu) has a negative component");
        }
        out.levels[i] = {ms[i], std::pow(gauge.value(x), degree), std::nullopt, 0.0};
      },
      4);
  return out;
}

void write_spectrum_csv(std::ostream& out, const EbkSpectrum& spectrum) {
  const Eigen::Index n = spectrum.levels.empty() ? 2 : spectrum.levels.front().m.size();
  for (Eigen::Index j = 0; j < n; ++j) out << "m_" << j + 1 << ',';
  out << "E_m," << (spectrum.orientation == Orientation::concave ? "argmin_k" : "argmax_k")
      << ",truncation_error_estimate\n";
  for (const auto& l : spectrum.levels) {
    for (Eigen::Index j = 0; j < n; ++j) out << l.m(j) << ',';
    out << format_number(l.energy) << ',';
    if (l.extremal_k) {
      for (Eigen::Index j = 0; j < l.extremal_k->size(); ++j) {
        if (j) out << ';';
        out << (*l.extremal_k)(j);
      }
    }
    out << ',' << format_number(l.truncation_error) << '\n';
  }
}

std::string spectrum_to_json(const EbkSpectrum& spectrum) {
  nlohmann::json j;
  j["route"] = to_string(spectrum.route);
  j["degree"] = spectrum.degree;
  j["hbar"] = spectrum.hbar;
  j["mu"] = std::vector<double>(spectrum.shift.mu.begin(), spectrum.shift.mu.end());
  j["orientation"] = to_string(spectrum.orientation);
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : spectrum.levels) {
    nlohmann::json row;
    row["m"] = std::vector<int>(l.m.begin(), l.m.end());
    row["E"] = l.energy;
    row["extremal_k"] = l.extremal_k
                            ? nlohmann::json(std::vector<int>(l.extremal_k->begin(),
                                                              l.extremal_k->end()))
                            : nlohmann::json();
    row["truncation_error"] = l.truncation_error;
    levels.push_back(row);
  }
  j["levels"] = levels;
  return j.dump(2) + "\n";
}

}  // namespace ebk

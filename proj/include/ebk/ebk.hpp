#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ebk/geometry.hpp"
#include "ebk/spectrum.hpp"
#include "ebk/types.hpp"

namespace ebk {

enum class Route { direct, variational, reconstruction };
const char* to_string(Route r) noexcept;

struct SpectrumLevel {
  IntVec m;
  double energy = 0.0;
  std::optional<IntVec> extremal_k;  // argmax (convex) or argmin (concave)
  double truncation_error = 0.0;
};

struct EbkSpectrum {
  std::vector<SpectrumLevel> levels;  // lexicographic in m
  MaslovShift shift;
  double degree = 1.0;
  double hbar = 1.0;
  Route route = Route::direct;
  Orientation orientation = Orientation::convex;

  const SpectrumLevel* find(const IntVec& m) const;
  /// Throws InvalidArgument when m is not in the table.
  double energy(const IntVec& m) const;
};

/// All m in N_0^n with |m|_inf <= m_max, lexicographically.
std::vector<IntVec> lattice_points(int n, int m_max);

/// E_m = f(hbar (m + mu)).
EbkSpectrum direct_spectrum(const ToricProfile& f, int m_max, double hbar = 1.0,
                            const MaslovShift& shift = {});

/// E_m = (sup_k hbar <m + mu, k> / a)^d over unshifted entries, inf for
/// concave surfaces. The truncation error compares the extremum over entries
/// with |k|_inf up to K/4, K/2 and K.
SpectrumLevel variational_level(std::span<const MarkedActionEntry> entries,
                                Orientation orientation, double degree, const IntVec& m,
                                double hbar = 1.0, const MaslovShift& shift = {});
EbkSpectrum variational_spectrum(std::span<const MarkedActionEntry> entries,
                                 Orientation orientation, double degree, int m_max,
                                 double hbar = 1.0, const MaslovShift& shift = {});

struct CertificateValue {
  int ell = 0;
  double value = 0.0;
  IntVec k;  // minimizing multiple
};

/// For each l: inf over directions with all k_j > 0 of E a(k) - hbar <m + mu, k>
/// at the smallest multiple of k whose components are all >= l (sup for
/// concave). With multiple_bound set, multiples with |k|_inf above it do not
/// qualify.
std::vector<CertificateValue> minmax_certificate(std::span<const MarkedActionEntry> entries,
                                                 double E, const IntVec& m,
                                                 const MaslovShift& shift, double hbar,
                                                 std::span<const int> ells,
                                                 Orientation orientation = Orientation::convex,
                                                 std::optional<int> multiple_bound = {});

/// min over the surface of max_j p_j.
double certificate_constant(const LevelSurface& surface);

/// Reconstructs N from the entries and solves hbar (m + mu) / E in N.
EbkSpectrum reconstruction_spectrum(std::span<const MarkedActionEntry> entries, int m_max,
                                    double hbar = 1.0, const MaslovShift& shift = {},
                                    double degree = 1.0);

void write_spectrum_csv(std::ostream& out, const EbkSpectrum& spectrum);
std::string spectrum_to_json(const EbkSpectrum& spectrum);

}  // namespace ebk

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ebk/geometry.hpp"
#include "ebk/spectrum.hpp"
#include "ebk/types.hpp"

namespace ebk {

/// sqrt(x^2 - m^2) - m arccos(m / x) for x >= m >= 0.
double f_m(double m, double x);
/// sqrt(x^2 - m^2) / x.
double f_m_derivative(double m, double x);

struct BilliardLevel {
  double m = 0.0;  // angular quantum number (real to allow shifted labels)
  double n = 0.0;  // radial quantum number
  double F = 0.0;
  double E = 0.0;
  double R = 1.0;
  double hbar = 1.0;
  double residual = 0.0;  // |f_m(F) - n pi|
};

/// The unique F >= m with f_m(F) = n pi.
BilliardLevel solve_F(double m, double n, double tol = 1e-12, double R = 1.0, double hbar = 1.0);

/// hbar^2 F^2 / (2 R^2).
double energy_from_F(double F, double R = 1.0, double hbar = 1.0);

/// rho(a) = (sin a - a cos a, sin a + (pi - a) cos a), a in [0, pi].
Vec ramos_point(double alpha);
Vec ramos_tangent(double alpha);
/// (pi - a, a), a positive multiple of the outward normal at rho(a).
Vec ramos_normal_direction(double alpha);
LevelSurface ramos_curve(int resolution = 0);
/// The 1-homogeneous profile whose level set is the Ramos curve.
ToricProfile ramos_profile();
/// (k1 + k2) sin(pi k2 / (k1 + k2)).
double ramos_action(int k1, int k2);
/// Closed-form marked action spectrum of the Ramos curve (same content and
/// order as marked_action_spectrum(ramos_curve(), ...)).
std::vector<MarkedActionEntry> ramos_entries(int k_max, const MaslovShift& shift = {});

struct CrosscheckReport {
  int m1 = 0, m2 = 0;
  int k_max = 0;
  Vec mu;
  double hbar = 1.0;
  double E_toric = 0.0;
  double F_route = 0.0;
  double F_ref = 0.0;
  double difference = 0.0;      // F_route - F_ref
  double error_estimate = 0.0;  // truncation estimate carried to F
  IntVec argmin_k;
};

/// Compares pi E / hbar from the inf formula over Ramos entries at
/// m = (m1, m2) with solve_F(m2 - m1 + mu2 - mu1, m1 + mu1).
CrosscheckReport crosscheck(int m1, int m2, int k_max, const MaslovShift& shift = {},
                            double hbar = 1.0);
/// Same with precomputed (unshifted) Ramos entries.
CrosscheckReport crosscheck(std::span<const MarkedActionEntry> entries, int m1, int m2,
                            const MaslovShift& shift = {}, double hbar = 1.0);

std::string crosscheck_to_json(std::span<const CrosscheckReport> reports);
void write_levels_csv(std::ostream& out, std::span<const BilliardLevel> levels);

}  // namespace ebk

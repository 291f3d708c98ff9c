#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ebk/geometry.hpp"
#include "ebk/types.hpp"

namespace ebk {

/// Quarter-Maslov shift mu; an empty vector means mu = 0 in any dimension.
struct MaslovShift {
  Vec mu;

  bool is_zero() const { return mu.size() == 0 || mu.isZero(0.0); }
  /// mu as a vector of dimension n (zeros when unset).
  Vec resolved(int n) const;
};

/// One family of periodic orbits: homology class k, action a and a point p
/// of N whose normal is proportional to k.
struct MarkedActionEntry {
  IntVec k;
  double action = 0.0;
  Vec point;
};

bool is_primitive(const IntVec& k);
/// The entry for l*k: same point, action scaled by l.
MarkedActionEntry multiple(const MarkedActionEntry& e, int l);

/// One entry per primitive k with |k|_inf <= k_max whose direction is a
/// normal of the surface, ordered lexicographically in k. Actions are
/// <p + mu, k>; zero actions are dropped.
std::vector<MarkedActionEntry> marked_action_spectrum(const LevelSurface& surface, int k_max,
                                                      const MaslovShift& shift = {});

/// Action 2 R sqrt(2E) l sin(pi k / l) of the disk-billiard orbits that
/// close after l bounces while winding k times.
double billiard_orbit_action(double E, double R, int k, int l);

void write_actions_csv(std::ostream& out, std::span<const MarkedActionEntry> entries);
std::vector<MarkedActionEntry> read_actions_csv(std::istream& in);
std::string actions_to_json(std::span<const MarkedActionEntry> entries);

/// "%.17g" formatting shared by all table writers.
std::string format_number(double x);

}  // namespace ebk

#pragma once

#include <string>

#include "ebk/geometry.hpp"

namespace ebk {

struct ResolvedProfile {
  ToricProfile profile;
  LevelSurface surface;  // f^-1(1)
  std::string kind;
};

/// Builtins: "harmonic:w1,...,wn", "pnorm:s", "power:s,d", "ramos",
/// "circle". Anything else is read as a JSON profile file.
ResolvedProfile resolve_profile(const std::string& spec);

/// JSON profile:
///   {"kind": "linear" | "pnorm" | "superellipse" | "ramos" | "custom-table",
///    "params": {...}, "degree": d, "dimension": n}
/// linear takes params.omega, pnorm/superellipse params.s, custom-table
/// params.points as [t, x, y] rows and an optional params.orientation.
ResolvedProfile parse_profile_json(const std::string& text);

}  // namespace ebk

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ebk/geometry.hpp"
#include "ebk/spectrum.hpp"
#include "ebk/types.hpp"

namespace ebk {

struct ConjugateOptions {
  double tolerance = 1e-10;  // on |grad f(p) - q|, relative to max(1, |q|)
  int max_iterations = 200;
  double search_radius = 1e8;
};

/// The maximizer p0 of <p, q> - f(p), i.e. the solution of grad f(p0) = q,
/// by damped Newton with Armijo backtracking.
Vec legendre_argmax(const ToricProfile& f, const Vec& q, const ConjugateOptions& opts = {});

/// Lf(q) = sup_p (<p, q> - f(p)) for strictly convex f.
double convex_conjugate(const ToricProfile& f, const Vec& q, const ConjugateOptions& opts = {});

/// Lf as a profile: gradient is the argmax, Hessian the inverse Hessian of f
/// there. Homogeneous of degree d/(d-1); requires d > 1.
ToricProfile conjugate_profile(const ToricProfile& f, const ConjugateOptions& opts = {});

/// sup over N of <p, q> (inf for concave N), from the samples followed by a
/// local golden-section refinement.
double support_function(const LevelSurface& surface, const Vec& q);

struct NicePointOptions {
  double curvature_min = 1e-8;
  double support_min = 1e-10;
  std::size_t min_points = 10;
};

/// Parameters of the samples where the Legendre point map is usable:
/// nonzero curvature, nonzero support and no fold of the mapped sequence.
std::vector<Vec> nice_parameters(const LevelSurface& surface, const NicePointOptions& opts = {});

/// The image of N under p -> L(p), restricted to nice points. Its samples sit
/// at the nice parameters of N and its normals come from the new tangents.
LevelSurface hypersurface_transform(const LevelSurface& surface,
                                    const NicePointOptions& opts = {});

enum class CloudSource { from_action_spectrum, synthetic };

struct PointCloud {
  std::vector<Vec> points;
  CloudSource source = CloudSource::synthetic;
};

/// M = {k / a}.
PointCloud cloud_from_actions(std::span<const MarkedActionEntry> entries);

struct ReconstructionReport {
  std::size_t cloud_size = 0;
  std::size_t nice_count = 0;
  std::vector<double> knots;  // polar angles of the fitted curve M
  std::optional<double> hausdorff;
};

struct Reconstruction {
  LevelSurface surface;
  ReconstructionReport report;
};

/// Recovers N from a planar cloud M: polar spline fit of M, nice-point
/// filter, then the Legendre point map.
LevelSurface reconstruct_surface(const PointCloud& cloud, const NicePointOptions& opts = {});
Reconstruction reconstruct(const PointCloud& cloud, const LevelSurface* reference = nullptr,
                           const NicePointOptions& opts = {});

std::string report_to_json(const ReconstructionReport& report);

}  // namespace ebk

#include "ebk/errors.hpp"

namespace ebk {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::parse_error: return "ParseError";
    case Errc::domain_error: return "DomainError";
    case Errc::degenerate_gradient: return "DegenerateGradient";
    case Errc::insufficient_resolution: return "InsufficientResolution";
    case Errc::tangent_through_origin: return "TangentThroughOrigin";
    case Errc::direction_not_attained: return "DirectionNotAttained";
    case Errc::convergence_failure: return "ConvergenceFailure";
    case Errc::unsupported_surface: return "UnsupportedSurface";
    case Errc::invalid_orbit_class: return "InvalidOrbitClass";
    case Errc::not_attained: return "NotAttained";
    case Errc::too_few_nice_points: return "TooFewNicePoints";
    case Errc::insufficient_cloud: return "InsufficientCloud";
    case Errc::non_graphical: return "NonGraphical";
    case Errc::empty_spectrum: return "EmptySpectrum";
    case Errc::no_qualifying_directions: return "NoQualifyingDirections";
    case Errc::ray_miss: return "RayMiss";
  }
  return "Unknown";
}

bool is_validation_error(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument:
    case Errc::parse_error:
    case Errc::domain_error:
    case Errc::invalid_orbit_class:
    case Errc::empty_spectrum:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace ebk

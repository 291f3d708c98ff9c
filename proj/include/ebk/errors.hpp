#pragma once

#include <stdexcept>
#include <string>

namespace ebk {

enum class Errc {
  invalid_argument,
  parse_error,
  domain_error,
  degenerate_gradient,
  insufficient_resolution,
  tangent_through_origin,
  direction_not_attained,
  convergence_failure,
  unsupported_surface,
  invalid_orbit_class,
  not_attained,
  too_few_nice_points,
  insufficient_cloud,
  non_graphical,
  empty_spectrum,
  no_qualifying_directions,
  ray_miss,
};

const char* to_string(Errc code) noexcept;

/// True for errors caused by bad input rather than by a numerical failure.
bool is_validation_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ebk

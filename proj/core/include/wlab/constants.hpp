#pragma once

#include <cmath>

namespace wlab {

// Frequently used closed-form reference values for the torus of revolution
// with radii (sqrt(2), 1) and its conformal images.
inline constexpr double pi = 3.14159265358979323846;
inline const double sqrt2 = std::sqrt(2.0);

// Area of the reference torus.
inline const double reference_area = 4.0 * sqrt2 * pi * pi;
// Bending energy of the reference torus (and of all its conformal images).
inline const double reference_energy = 8.0 * pi * pi;
// Radius of the round sphere arising in the degenerate limit of the family:
// (2*pi^2)^(1/4).
inline const double degenerate_radius = std::pow(2.0 * pi * pi, 0.25);
// Ring radius of the torus tube boundary in the symmetry plane.
inline const double outer_ring_radius = sqrt2 + 1.0;

} // namespace wlab

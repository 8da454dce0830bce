#pragma once

#include <Eigen/Dense>

namespace wlab {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Second-order jet of an immersion (u, v) -> y in R^3. For torus charts
// u = phi and v = theta; for latitude-longitude sphere charts u = polar
// angle and v = azimuth.
struct Jet2 {
  Vec3 y = Vec3::Zero();
  Vec3 yu = Vec3::Zero();
  Vec3 yv = Vec3::Zero();
  Vec3 yuu = Vec3::Zero();
  Vec3 yuv = Vec3::Zero();
  Vec3 yvv = Vec3::Zero();
};

// Exact jet of the reference torus
//   X(phi, theta) = ((sqrt2 + cos phi) cos theta,
//                    (sqrt2 + cos phi) sin theta,
//                    sin phi).
Jet2 torus_jet(double phi, double theta);

// Exact jet of the round sphere center + r * (sin u cos v, sin u sin v, cos u).
Jet2 sphere_jet(double u, double v, const Vec3& center, double radius);

// Pointwise transforms, with exact chain-rule propagation of the jet.
Jet2 scale_jet(const Jet2& j, double factor);
Jet2 translate_jet(const Jet2& j, const Vec3& shift);
Jet2 rotate_jet(const Mat3& rot, const Jet2& j);
Jet2 reflect_x_jet(const Jet2& j);

// Sphere inversion x -> radius^2 * (x - center)/|x - center|^2 + center,
// applied through the jet by the chain rule with the analytic first and
// second derivatives of the map.
Jet2 invert_jet(const Vec3& center, double radius, const Jet2& j);

// Derivatives of the inversion map itself at a point (used by the chain rule
// and exposed for tests).
Vec3 inversion_point(const Vec3& center, double radius, const Vec3& x);
Vec3 inversion_d1(const Vec3& center, double radius, const Vec3& x, const Vec3& v);
Vec3 inversion_d2(const Vec3& center, double radius, const Vec3& x, const Vec3& v,
                  const Vec3& w);

} // namespace wlab

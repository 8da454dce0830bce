#include "wlab/jets.hpp"

#include <cmath>

#include "wlab/constants.hpp"

namespace wlab {

Jet2 torus_jet(double phi, double theta) {
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double rho = sqrt2 + cp;
  Jet2 j;
  j.y = Vec3(rho * ct, rho * st, sp);
  j.yu = Vec3(-sp * ct, -sp * st, cp);
  j.yv = Vec3(-rho * st, rho * ct, 0.0);
  j.yuu = Vec3(-cp * ct, -cp * st, -sp);
  j.yuv = Vec3(sp * st, -sp * ct, 0.0);
  j.yvv = Vec3(-rho * ct, -rho * st, 0.0);
  return j;
}

Jet2 sphere_jet(double u, double v, const Vec3& center, double radius) {
  const double cu = std::cos(u), su = std::sin(u);
  const double cv = std::cos(v), sv = std::sin(v);
  Jet2 j;
  const Vec3 n(su * cv, su * sv, cu);
  j.y = center + radius * n;
  j.yu = radius * Vec3(cu * cv, cu * sv, -su);
  j.yv = radius * Vec3(-su * sv, su * cv, 0.0);
  j.yuu = -radius * n;
  j.yuv = radius * Vec3(-cu * sv, cu * cv, 0.0);
  j.yvv = radius * Vec3(-su * cv, -su * sv, 0.0);
  return j;
}

Jet2 scale_jet(const Jet2& j, double factor) {
  Jet2 out;
  out.y = factor * j.y;
  out.yu = factor * j.yu;
  out.yv = factor * j.yv;
  out.yuu = factor * j.yuu;
  out.yuv = factor * j.yuv;
  out.yvv = factor * j.yvv;
  return out;
}

Jet2 translate_jet(const Jet2& j, const Vec3& shift) {
  Jet2 out = j;
  out.y += shift;
  return out;
}

Jet2 rotate_jet(const Mat3& rot, const Jet2& j) {
  Jet2 out;
  out.y = rot * j.y;
  out.yu = rot * j.yu;
  out.yv = rot * j.yv;
  out.yuu = rot * j.yuu;
  out.yuv = rot * j.yuv;
  out.yvv = rot * j.yvv;
  return out;
}

Jet2 reflect_x_jet(const Jet2& j) {
  Mat3 m = Mat3::Identity();
  m(0, 0) = -1.0;
  return rotate_jet(m, j);
}

Vec3 inversion_point(const Vec3& center, double radius, const Vec3& x) {
  const Vec3 u = x - center;
  const double r2 = u.squaredNorm();
  return center + (radius * radius / r2) * u;
}

Vec3 inversion_d1(const Vec3& center, double radius, const Vec3& x, const Vec3& v) {
  const Vec3 u = x - center;
  const double r2 = u.squaredNorm();
  const double s = radius * radius;
  return s * (v / r2 - (2.0 * u.dot(v) / (r2 * r2)) * u);
}

Vec3 inversion_d2(const Vec3& center, double radius, const Vec3& x, const Vec3& v,
                  const Vec3& w) {
  const Vec3 u = x - center;
  const double r2 = u.squaredNorm();
  const double s = radius * radius;
  const double uv = u.dot(v), uw = u.dot(w), vw = v.dot(w);
  return (-2.0 * s / (r2 * r2)) *
         (uw * v + uv * w + vw * u - (4.0 * uv * uw / r2) * u);
}

Jet2 invert_jet(const Vec3& center, double radius, const Jet2& j) {
  Jet2 out;
  out.y = inversion_point(center, radius, j.y);
  out.yu = inversion_d1(center, radius, j.y, j.yu);
  out.yv = inversion_d1(center, radius, j.y, j.yv);
  out.yuu = inversion_d1(center, radius, j.y, j.yuu) +
            inversion_d2(center, radius, j.y, j.yu, j.yu);
  out.yuv = inversion_d1(center, radius, j.y, j.yuv) +
            inversion_d2(center, radius, j.y, j.yu, j.yv);
  out.yvv = inversion_d1(center, radius, j.y, j.yvv) +
            inversion_d2(center, radius, j.y, j.yv, j.yv);
  return out;
}

} // namespace wlab

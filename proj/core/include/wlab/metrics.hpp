#pragma once

#include <array>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "wlab/jets.hpp"

namespace wlab {

// First and second coordinate derivatives of a metric: dg[k] = d_k g and
// d2g[k][l] = d_k d_l g as symmetric 3x3 matrices.
using MetricDeriv = std::array<Mat3, 3>;
using MetricDeriv2 = std::array<std::array<Mat3, 3>, 3>;

// Pointwise curvature of the ambient space, expressed in an orthonormal
// frame: the scalar curvature and the Ricci tensor. In three dimensions these
// determine the full curvature tensor, which is exposed through riemann()
// and sectional().
struct CurvatureData {
  double scalar = 0.0;
  Mat3 ricci = Mat3::Zero();

  // Fully covariant curvature R(e_a, e_m, e_n, e_b) in the orthonormal frame,
  // reconstructed from the Ricci decomposition (the Weyl part vanishes in
  // dimension three). Antisymmetric in (a, m) and in (n, b).
  double riemann(int a, int m, int n, int b) const;

  // Sectional curvature of the plane spanned by frame vectors e_i, e_j.
  double sectional(int i, int j) const;
};

// Builds curvature data from a symmetric Ricci matrix; the scalar curvature
// is its trace.
CurvatureData synthetic_curvature(const Mat3& ricci);

// A smooth metric on a chart of R^3, given by closures for the matrix field
// and its first two derivative arrays. Models may advertise extra exact
// structure that downstream evaluators can exploit:
//  - straight_rays_at_origin: geodesics emanating from the chart origin are
//    Euclidean straight lines (true for metrics in normal form).
//  - conformal: g = exp(2 w) * delta with w = conformal_log; evaluators can
//    then use exact conformal identities instead of generic formulas.
struct MetricModel {
  std::string name;
  std::function<Mat3(const Vec3&)> metric;
  std::function<MetricDeriv(const Vec3&)> dmetric;
  std::function<MetricDeriv2(const Vec3&)> d2metric;

  bool straight_rays_at_origin = false;

  bool conformal = false;
  std::function<double(const Vec3&)> conformal_log;
  std::function<Vec3(const Vec3&)> conformal_log_grad;
};

// Quadratic normal-form perturbation h(x) determined by curvature data at
// the origin (g = delta + h), and its directional derivative. Exposed
// because the first-order energy machinery integrates these fields directly.
Mat3 normal_form_perturbation(const CurvatureData& data, const Vec3& x);
Mat3 normal_form_perturbation_derivative(const CurvatureData& data,
                                         const Vec3& x, const Vec3& direction);

// The flat metric.
MetricModel euclidean_metric();

// Normal-form expansion of a metric around the chart origin with the given
// curvature there: g = delta + h(x) with h quadratic in x, chosen so that
// geodesics through the origin are straight lines and the curvature at the
// origin equals `data`.
MetricModel normal_expansion(const CurvatureData& data);

// Riemannian Schwarzschild slice of mass m: g = (1 + m/(2|x|))^4 * delta,
// defined away from the origin.
MetricModel schwarzschild_metric(double mass);

// Space form with the given constant scalar curvature, as the conformal
// model g = (1 + (kappa/4)|x|^2)^{-2} * delta with kappa = scalar/6.
MetricModel constant_curvature_metric(double scalar_curvature);

// Pull-back of the model under y -> eps * y, i.e. g_eps(y) = g(eps y). With
// the surface measured at unit scale this realises the small-scale limit of
// the ambient geometry.
MetricModel with_epsilon(const MetricModel& model, double eps);

// Pull-back under y -> base + y (shifts the chart origin). The straight-ray
// shortcut survives only for base = 0.
MetricModel recentered(const MetricModel& model, const Vec3& base);

// Metric, first derivatives and Christoffel symbols at a point;
// christoffel[k](i, j) = Gamma^k_{ij}.
struct MetricJet {
  Mat3 g = Mat3::Identity();
  MetricDeriv dg = {Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
  std::array<Mat3, 3> christoffel = {Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
};

MetricJet metric_at(const MetricModel& model, const Vec3& x);

// Curvature at a point, computed from the metric's analytic first and second
// derivatives and reported in the orthonormal frame produced by
// orthonormal_frame(g(x)).
CurvatureData curvature_at(const MetricModel& model, const Vec3& x);

// Ricci tensor in coordinate components (not frame-projected). Useful when
// contracting against coordinate vectors such as a surface normal.
Mat3 coordinate_ricci(const MetricModel& model, const Vec3& x);

// Columns form a g-orthonormal frame, obtained by Gram-Schmidt of the
// coordinate basis (deterministic; reduces to scaled axes for diagonal g).
Mat3 orthonormal_frame(const Mat3& g);

struct ExpMapOptions {
  double tolerance = 1e-10;
  int max_steps = 1024;
};

// Riemannian exponential: follows the geodesic from `base` with initial
// velocity `velocity` for unit time, by adaptive Runge-Kutta integration
// with step doubling. Models with straight rays at the origin short-circuit
// to base + velocity when base is the origin.
Vec3 exp_map(const MetricModel& model, const Vec3& base, const Vec3& velocity,
             const ExpMapOptions& options = {});

// Tangential eigenvalue of the Ricci tensor of the Schwarzschild slice in an
// orthonormal frame, at coordinate radius r: 64 m r^3 / (2r + m)^6. The
// radial eigenvalue is -2 times this value.
double schwarzschild_tangential_ricci(double mass, double r);

} // namespace wlab

#include "wlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <gsl/gsl_integration.h>

#include "wlab/constants.hpp"

namespace wlab {

namespace {

// Smooth cutoff: 1 for t <= inner, 0 for t >= outer.
double bump_step(double s) {
  auto ramp = [](double v) { return v > 0.0 ? std::exp(-1.0 / v) : 0.0; };
  const double a = ramp(s), b = ramp(1.0 - s);
  return a + b == 0.0 ? 0.0 : a / (a + b);
}

constexpr double kNearOuter = 0.7;
constexpr double kNearInner = 0.35;

double near_cutoff(double t) {
  return bump_step((kNearOuter - t) / (kNearOuter - kNearInner));
}

double wrap_pi(double a) {
  a = std::fmod(a + pi, 2.0 * pi);
  if (a < 0.0) a += 2.0 * pi;
  return a - pi;
}

} // namespace

void gauss_legendre(int n, double a, double b, std::vector<double>& points,
                    std::vector<double>& weights) {
  gsl_integration_glfixed_table* table =
      gsl_integration_glfixed_table_alloc(static_cast<size_t>(n));
  points.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i)
    gsl_integration_glfixed_point(a, b, static_cast<size_t>(i), &points[i],
                                  &weights[i], table);
  gsl_integration_glfixed_table_free(table);
}

NodeSet uniform_nodes(int n_phi, int n_theta) {
  NodeSet nodes;
  nodes.reserve(static_cast<size_t>(n_phi) * n_theta);
  const double w = (2.0 * pi / n_phi) * (2.0 * pi / n_theta);
  for (int i = 0; i < n_phi; ++i)
    for (int j = 0; j < n_theta; ++j)
      nodes.push_back({2.0 * pi * i / n_phi, 2.0 * pi * j / n_theta, w});
  return nodes;
}

NodeSet two_scale_nodes(double feature_width, int far_resolution,
                        int angular_resolution) {
  if (feature_width <= 0.0)
    throw std::invalid_argument("two_scale_nodes: feature width must be > 0");
  NodeSet nodes;

  // Far zone: uniform grid, weighted by the complement of the cutoff; nodes
  // fully inside the near zone drop out.
  const int n = far_resolution;
  const double wfar = (2.0 * pi / n) * (2.0 * pi / n);
  for (int i = 0; i < n; ++i) {
    const double phi = 2.0 * pi * i / n;
    for (int j = 0; j < n; ++j) {
      const double theta = 2.0 * pi * j / n;
      const double t = std::hypot(wrap_pi(phi), wrap_pi(theta - pi));
      const double factor = 1.0 - near_cutoff(t);
      if (factor > 1e-16) nodes.push_back({phi, theta, wfar * factor});
    }
  }

  // Near zone: log-polar coordinates around (0, pi); phi = t cos(psi),
  // theta = pi + t sin(psi); d phi d theta = t dt d psi.
  const int na = angular_resolution;
  const double wpsi = 2.0 * pi / na;
  auto push_ring = [&](double t, double radial_weight_t_dt) {
    const double c = near_cutoff(t);
    if (c <= 0.0) return;
    for (int j = 0; j < na; ++j) {
      const double psi = 2.0 * pi * j / na;
      nodes.push_back({t * std::cos(psi), pi + t * std::sin(psi),
                       c * radial_weight_t_dt * wpsi});
    }
  };

  const double t0 = std::min(feature_width / 10.0, kNearInner / 4.0);
  std::vector<double> pts, wts;

  // Innermost disk [0, t0].
  gauss_legendre(4, 0.0, t0, pts, wts);
  for (size_t k = 0; k < pts.size(); ++k) push_ring(pts[k], wts[k] * pts[k]);

  // Logarithmic segments from t0 to the outer cutoff, one e-fold each, with
  // substitution u = log t (measure t^2 du).
  const double u0 = std::log(t0), u1 = std::log(kNearOuter);
  const int segments = std::max(1, static_cast<int>(std::ceil(u1 - u0)));
  for (int s = 0; s < segments; ++s) {
    const double a = u0 + (u1 - u0) * s / segments;
    const double b = u0 + (u1 - u0) * (s + 1) / segments;
    gauss_legendre(16, a, b, pts, wts);
    for (size_t k = 0; k < pts.size(); ++k) {
      const double t = std::exp(pts[k]);
      push_ring(t, wts[k] * t * t);
    }
  }
  return nodes;
}

NodeSet sphere_nodes(int n_polar, int n_azimuth) {
  NodeSet nodes;
  nodes.reserve(static_cast<size_t>(n_polar) * n_azimuth);
  std::vector<double> pts, wts;
  gauss_legendre(n_polar, 0.0, pi, pts, wts);
  const double wv = 2.0 * pi / n_azimuth;
  for (int i = 0; i < n_polar; ++i)
    for (int j = 0; j < n_azimuth; ++j)
      nodes.push_back({pts[i], 2.0 * pi * j / n_azimuth, wts[i] * wv});
  return nodes;
}

double integrate_nodes(const NodeSet& nodes,
                       const std::function<double(double, double)>& f) {
  double sum = 0.0;
  for (const QuadNode& node : nodes) sum += node.weight * f(node.phi, node.theta);
  return sum;
}

int suggested_uniform_resolution(double feature_width) {
  if (feature_width <= 0.0)
    throw std::invalid_argument("resolution rule: feature width must be > 0");
  int n = static_cast<int>(std::ceil(42.0 / feature_width));
  n = std::max(64, std::min(512, n));
  if (n % 2 != 0) ++n;
  return n;
}

} // namespace wlab

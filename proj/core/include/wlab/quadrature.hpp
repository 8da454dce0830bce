#pragma once

#include <functional>
#include <vector>

namespace wlab {

// Chart quadrature node: the weight already includes the chart measure
// d phi d theta, so integrals are sums of weight * f(phi, theta).
struct QuadNode {
  double phi = 0.0;
  double theta = 0.0;
  double weight = 0.0;
};

using NodeSet = std::vector<QuadNode>;

// Periodic trapezoid grid over [0, 2 pi)^2 (spectrally accurate for smooth
// periodic integrands).
NodeSet uniform_nodes(int n_phi, int n_theta);

// Two-scale node set for integrands with an isolated concentration of width
// `feature_width` around the chart point (phi, theta) = (0, pi): a smooth
// partition of unity splits the chart into a log-polar near zone resolving
// every length scale from feature_width/10 outwards and a uniform far grid.
NodeSet two_scale_nodes(double feature_width, int far_resolution = 192,
                        int angular_resolution = 128);

// Latitude-longitude quadrature for a sphere chart: Gauss-Legendre in the
// polar angle (phi in (0, pi)), trapezoid in the azimuth (theta in [0, 2 pi)).
// Weights carry the chart measure d u d v only, not the area density.
NodeSet sphere_nodes(int n_polar, int n_azimuth);

double integrate_nodes(const NodeSet& nodes,
                       const std::function<double(double, double)>& f);

// Uniform chart resolution adequate for a feature of the given chart width
// (about 42 nodes across the feature, floor 64, cap 512, always even).
int suggested_uniform_resolution(double feature_width);

// Nodes and weights of n-point Gauss-Legendre quadrature on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& points,
                    std::vector<double>& weights);

} // namespace wlab

#pragma once

#include <Eigen/Dense>

#include "wlab/jets.hpp"
#include "wlab/metrics.hpp"

namespace wlab {

// Scalar samples on the periodic chart grid (rows: phi, cols: theta).
using ScalarField = Eigen::MatrixXd;

// Doubly periodic immersion sampled on the uniform chart grid
// phi_i = 2 pi i / n_phi, theta_j = 2 pi j / n_theta.
struct SurfaceGrid {
  Eigen::MatrixXd x, y, z;

  int n_phi() const { return static_cast<int>(x.rows()); }
  int n_theta() const { return static_cast<int>(x.cols()); }
  double phi(int i) const;
  double theta(int j) const;
  Vec3 position(int i, int j) const {
    return Vec3(x(i, j), y(i, j), z(i, j));
  }
};

// Samples the reference torus
// ((sqrt2 + cos phi) cos theta, (sqrt2 + cos phi) sin theta, sin phi).
SurfaceGrid build_clifford_torus(int n_phi, int n_theta);
SurfaceGrid build_clifford_torus(int resolution);

// Chart partial derivatives of a periodic scalar field, with spectral
// accuracy (trigonometric differentiation).
struct FieldDerivs {
  Eigen::MatrixXd du;
  Eigen::MatrixXd dv;
};
FieldDerivs spectral_gradient(const ScalarField& field);

// Geometry of an immersed surface point under an ambient metric: first and
// second fundamental forms in the chart basis, unit normal, mean curvature
// (sum of principal curvatures), squared norms of the second fundamental
// form and of its traceless part, and the area density.
struct PointForms {
  Eigen::Matrix2d first = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d second = Eigen::Matrix2d::Zero();
  Vec3 normal = Vec3::UnitZ();
  double mean = 0.0;
  double norm2 = 0.0;
  double traceless2 = 0.0;
  double dsigma = 1.0;
};

PointForms point_forms(const Jet2& jet, const MetricJet& ambient);
PointForms point_forms(const Jet2& jet, const MetricModel& model);

// Node-wise fundamental forms of a sampled immersion. The grid copy keeps
// the field self-describing, so downstream evaluations can query the ambient
// metric at the nodes.
struct FormsField {
  SurfaceGrid grid;
  Eigen::MatrixXd g11, g12, g22;
  Eigen::MatrixXd inv11, inv12, inv22;
  Eigen::MatrixXd a11, a12, a22;
  Eigen::MatrixXd mean;       // H
  Eigen::MatrixXd norm2;      // |A|^2
  Eigen::MatrixXd traceless2; // |A - (H/2) g|^2
  Eigen::MatrixXd dsigma;     // sqrt(det first)
  Eigen::MatrixXd nx, ny, nz;
};

// Computes the forms by spectral differentiation of the grid positions.
FormsField fundamental_forms(const SurfaceGrid& grid, const MetricModel& model);
FormsField fundamental_forms(const SurfaceGrid& grid);

// Integral of a nodal density against the area measure of the sampled
// surface (periodic trapezoid rule, spectrally accurate for smooth data).
double integrate(const ScalarField& density, const FormsField& forms);

double surface_area(const FormsField& forms);

// Willmore energy: integral of H^2 over the surface.
double willmore_energy(const FormsField& forms);

// Hawking mass: sqrt(area) / (64 pi^{3/2}) * (16 pi - W).
double hawking_mass(const FormsField& forms);

} // namespace wlab

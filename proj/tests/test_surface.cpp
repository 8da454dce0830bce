#include <cmath>

#include "doctest.h"
#include "wlab/constants.hpp"
#include "wlab/metrics.hpp"
#include "wlab/surface.hpp"

using namespace wlab;

namespace {

double node_phi(const SurfaceGrid& grid, int i) {
  return 2.0 * pi * i / grid.x.rows();
}
double node_theta(const SurfaceGrid& grid, int j) {
  return 2.0 * pi * j / grid.x.cols();
}

}  // namespace

TEST_SUITE("surface") {

TEST_CASE("torus nodes follow the revolution chart") {
  const SurfaceGrid grid = build_clifford_torus(32);
  double worst = 0.0;
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) {
      const double phi = node_phi(grid, i);
      const double theta = node_theta(grid, j);
      const double rho = sqrt2 + std::cos(phi);
      worst = std::max(worst, std::abs(grid.x(i, j) - rho * std::cos(theta)));
      worst = std::max(worst, std::abs(grid.y(i, j) - rho * std::sin(theta)));
      worst = std::max(worst, std::abs(grid.z(i, j) - std::sin(phi)));
    }
  CHECK(worst < 1e-14);
}

TEST_CASE("reference invariants: area, energy, Hawking mass") {
  const FormsField forms = fundamental_forms(build_clifford_torus(64));
  CHECK(std::abs(surface_area(forms) / reference_area - 1.0) < 1e-12);
  CHECK(std::abs(willmore_energy(forms) / reference_energy - 1.0) < 1e-12);
  CHECK(std::abs(hawking_mass(forms) - (-0.601566452869873)) < 1e-12);
}

TEST_CASE("pointwise fields match the closed forms") {
  const SurfaceGrid grid = build_clifford_torus(48);
  const FormsField forms = fundamental_forms(grid);
  double worst_mean = 0.0, worst_area = 0.0, worst_normal = 0.0,
         worst_norm2 = 0.0;
  for (int i = 0; i < 48; ++i)
    for (int j = 0; j < 48; ++j) {
      const double phi = node_phi(grid, i);
      const double theta = node_theta(grid, j);
      const double rho = sqrt2 + std::cos(phi);
      worst_mean = std::max(
          worst_mean,
          std::abs(forms.mean(i, j) - (sqrt2 + 2.0 * std::cos(phi)) / rho));
      worst_area = std::max(worst_area, std::abs(forms.dsigma(i, j) - rho));
      const Vec3 normal(std::cos(phi) * std::cos(theta),
                        std::cos(phi) * std::sin(theta), std::sin(phi));
      const Vec3 sampled(forms.nx(i, j), forms.ny(i, j), forms.nz(i, j));
      worst_normal = std::max(worst_normal, (sampled - normal).norm());
      const double k_theta = std::cos(phi) / rho;
      worst_norm2 = std::max(
          worst_norm2, std::abs(forms.norm2(i, j) - (1.0 + k_theta * k_theta)));
    }
  CHECK(worst_mean < 1e-10);
  CHECK(worst_area < 1e-11);
  CHECK(worst_normal < 1e-10);
  CHECK(worst_norm2 < 1e-10);
}

TEST_CASE("traceless second form consistency") {
  const FormsField forms = fundamental_forms(build_clifford_torus(48));
  const Eigen::MatrixXd reconstructed =
      forms.norm2 - 0.5 * forms.mean.cwiseProduct(forms.mean);
  CHECK((forms.traceless2 - reconstructed).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("weighted chart integrals match the residue closed forms") {
  // One-dimensional weights against the chart measure rho dphi dtheta:
  // integral of rho^{-1} dsigma collapses to 2 pi * int dphi / (sqrt2+cos).
  const FormsField forms = fundamental_forms(build_clifford_torus(64));
  const int n = 64;
  Eigen::MatrixXd inv_rho2(n, n), cos_inv_rho2(n, n), cos2_inv_rho2(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double phi = 2.0 * pi * i / n;
      const double rho = sqrt2 + std::cos(phi);
      inv_rho2(i, j) = 1.0 / (rho * rho);
      cos_inv_rho2(i, j) = std::cos(phi) / (rho * rho);
      cos2_inv_rho2(i, j) = std::cos(phi) * std::cos(phi) / (rho * rho);
    }
  const double two_pi = 2.0 * pi;
  CHECK(std::abs(integrate(inv_rho2, forms) - two_pi * (2.0 * pi)) < 1e-10);
  CHECK(std::abs(integrate(cos_inv_rho2, forms) -
                 two_pi * (2.0 * pi - 2.0 * sqrt2 * pi)) < 1e-10);
  CHECK(std::abs(integrate(cos2_inv_rho2, forms) -
                 two_pi * (4.0 * pi - 2.0 * sqrt2 * pi)) < 1e-10);
}

TEST_CASE("curved-metric forms reduce to the flat ones for the identity") {
  const SurfaceGrid grid = build_clifford_torus(32);
  const FormsField flat = fundamental_forms(grid);
  const FormsField ambient = fundamental_forms(grid, euclidean_metric());
  CHECK((flat.mean - ambient.mean).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((flat.dsigma - ambient.dsigma).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spectral gradient of the mean curvature") {
  const SurfaceGrid grid = build_clifford_torus(48);
  const FormsField forms = fundamental_forms(grid);
  const FieldDerivs derivs = spectral_gradient(forms.mean);
  double worst = 0.0;
  for (int i = 0; i < 48; ++i)
    for (int j = 0; j < 48; ++j) {
      const double phi = node_phi(grid, i);
      const double rho = sqrt2 + std::cos(phi);
      const double expected = -sqrt2 * std::sin(phi) / (rho * rho);
      worst = std::max(worst, std::abs(derivs.du(i, j) - expected));
    }
  CHECK(worst < 1e-10);
  CHECK(derivs.dv.cwiseAbs().maxCoeff() < 1e-11);
}

}  // TEST_SUITE

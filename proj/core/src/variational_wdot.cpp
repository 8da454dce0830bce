#include "wlab/variational.hpp"

#include <cmath>
#include <stdexcept>

#include "wlab/constants.hpp"

namespace wlab {

namespace {

void check_rotation(const Mat3& rotation) {
  const double defect =
      (rotation.transpose() * rotation - Mat3::Identity()).norm();
  if (defect > 1e-10)
    throw std::invalid_argument("wdot: rotation matrix is not orthogonal");
}

} // namespace

double wdot_quadrature(const CurvatureData& data, const Mat3& rotation) {
  check_rotation(rotation);
  // The integrand is analytic with geometric Fourier decay, so a modest
  // uniform grid already integrates it to full precision.
  const int n = 96;
  const SpectralOps ops(n, n);
  const double step = 2.0 * pi / n;

  Eigen::MatrixXd local(n, n);      // terms without chart derivatives
  Eigen::MatrixXd flux_phi(n, n);   // h(n, e1), differentiated along e1
  Eigen::MatrixXd flux_theta(n, n); // h(n, e2), differentiated along e2
  Eigen::MatrixXd weight(n, n);     // -4 H, times the area density later
  Eigen::MatrixXd rho_field(n, n);

  for (int i = 0; i < n; ++i) {
    const double phi = step * i;
    const double rho = sqrt2 + std::cos(phi);
    const double mean = (sqrt2 + 2.0 * std::cos(phi)) / rho;
    for (int j = 0; j < n; ++j) {
      const double theta = step * j;
      const Vec3 point(rho * std::cos(theta), rho * std::sin(theta),
                       std::sin(phi));
      const Vec3 tangent_phi(-std::sin(phi) * std::cos(theta),
                             -std::sin(phi) * std::sin(theta), std::cos(phi));
      const Vec3 tangent_theta(-std::sin(theta), std::cos(theta), 0.0);
      const Vec3 outward(std::cos(phi) * std::cos(theta),
                         std::cos(phi) * std::sin(theta), std::sin(phi));

      const Vec3 y = rotation * point;
      const Vec3 e1 = rotation * tangent_phi;
      const Vec3 e2 = rotation * tangent_theta;
      const Vec3 nn = rotation * outward;

      const Mat3 h = normal_form_perturbation(data, y);
      const Mat3 dh_n = normal_form_perturbation_derivative(data, y, nn);

      const double tangential_slope =
          e1.dot(dh_n * e1) + e2.dot(dh_n * e2);
      const double h_n1 = nn.dot(h * e1);
      const double h_n2 = nn.dot(h * e2);
      const double h_nn = nn.dot(h * nn);
      const double h_tt = e1.dot(h * e1) + e2.dot(h * e2);

      // Frame contraction <nabla_{e2} e2, e1> = sin(phi)/rho; all other
      // tangential Christoffel contractions of this frame vanish.
      const double frame_turn = std::sin(phi) / rho;

      local(i, j) = (2.0 * mean * tangential_slope +
                     4.0 * mean * h_n1 * frame_turn -
                     2.0 * h_nn * mean * mean + mean * mean * h_tt) *
                    rho;
      flux_phi(i, j) = h_n1;
      flux_theta(i, j) = h_n2;
      weight(i, j) = -4.0 * mean * rho;
      rho_field(i, j) = rho;
    }
  }

  // e1(f) = d_phi f (unit phi tangent), e2(f) = d_theta f / rho.
  const Eigen::MatrixXd frame_divergence =
      ops.d_phi(flux_phi) +
      ops.d_theta(flux_theta).cwiseQuotient(rho_field);
  const Eigen::MatrixXd integrand =
      local + weight.cwiseProduct(frame_divergence);
  return 0.5 * trapezoid_integral(integrand);
}

SlopeBreakdown wdot_closed_form(const CurvatureData& data,
                                const Mat3& rotation) {
  check_rotation(rotation);
  const Vec3 axis = rotation * Vec3::UnitZ();
  const double ric_axis = axis.dot(data.ricci * axis);
  const double sc = data.scalar;
  const double pi2 = pi * pi;

  SlopeBreakdown out;
  out.steps[0] = -4.0 * sqrt2 * pi2 * sc + (4.0 * sqrt2 / 3.0) * pi2 * ric_axis;
  out.steps[1] = (8.0 / 3.0) * pi2 * ric_axis * (2.0 - sqrt2);
  out.steps[2] =
      -4.0 * sqrt2 * pi2 * sc + (pi2 / 3.0) * (28.0 * sqrt2 - 16.0) * ric_axis;
  out.total = 0.5 * (out.steps[0] + out.steps[1] + out.steps[2]);
  return out;
}

} // namespace wlab

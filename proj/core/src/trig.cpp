#include "wlab/trig.hpp"

#include <cmath>
#include <stdexcept>

#include "wlab/constants.hpp"

namespace wlab {

namespace {

void require_even(int n) {
  if (n < 8 || n % 2 != 0) {
    throw std::invalid_argument("periodic grid size must be even and >= 8");
  }
}

} // namespace

Eigen::MatrixXd trig_diff_matrix(int n) {
  require_even(n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  const double h = 2.0 * pi / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int k = i - j;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = 0.5 * sign / std::tan(0.5 * h * k);
    }
  }
  return d;
}

Eigen::MatrixXd trig_diff2_matrix(int n) {
  require_even(n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  const double h = 2.0 * pi / n;
  const double diag = -(n * static_cast<double>(n)) / 12.0 - 1.0 / 6.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        d(i, j) = diag;
        continue;
      }
      const int k = i - j;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      const double s = std::sin(0.5 * h * k);
      d(i, j) = -sign / (2.0 * s * s);
    }
  }
  return d;
}

SpectralOps::SpectralOps(int n_phi, int n_theta)
    : n_phi_(n_phi),
      n_theta_(n_theta),
      dphi_(trig_diff_matrix(n_phi)),
      dphi2_(trig_diff2_matrix(n_phi)),
      dthetaT_(trig_diff_matrix(n_theta).transpose()),
      dtheta2T_(trig_diff2_matrix(n_theta).transpose()) {}

Eigen::MatrixXd SpectralOps::d_phi(const Eigen::MatrixXd& f) const {
  return dphi_ * f;
}

Eigen::MatrixXd SpectralOps::d_theta(const Eigen::MatrixXd& f) const {
  return f * dthetaT_;
}

Eigen::MatrixXd SpectralOps::d2_phi(const Eigen::MatrixXd& f) const {
  return dphi2_ * f;
}

Eigen::MatrixXd SpectralOps::d2_theta(const Eigen::MatrixXd& f) const {
  return f * dtheta2T_;
}

Eigen::MatrixXd SpectralOps::d2_phi_theta(const Eigen::MatrixXd& f) const {
  return dphi_ * (f * dthetaT_);
}

std::vector<Mode> square_mode_set(int degree) {
  std::vector<Mode> modes;
  modes.reserve((2 * degree + 1) * (2 * degree + 1));
  for (int k = -degree; k <= degree; ++k) {
    for (int l = -degree; l <= degree; ++l) {
      modes.push_back(Mode{k, l});
    }
  }
  return modes;
}

Eigen::MatrixXcd dft_table(const Eigen::MatrixXd& c, int span) {
  const int n_phi = static_cast<int>(c.rows());
  const int n_theta = static_cast<int>(c.cols());
  const int m = 2 * span + 1;
  const std::complex<double> im(0.0, 1.0);

  // Separable two-pass evaluation: theta first, then phi.
  Eigen::MatrixXcd pass1(n_phi, m);
  pass1.setZero();
  Eigen::VectorXcd twiddle(n_theta);
  for (int dl = -span; dl <= span; ++dl) {
    for (int j = 0; j < n_theta; ++j) {
      const double ang = -2.0 * pi * dl * j / n_theta;
      twiddle(j) = std::exp(im * ang);
    }
    pass1.col(dl + span) = c * twiddle;
  }

  Eigen::MatrixXcd table(m, m);
  const double w = (2.0 * pi / n_phi) * (2.0 * pi / n_theta);
  Eigen::VectorXcd twphi(n_phi);
  for (int dk = -span; dk <= span; ++dk) {
    for (int i = 0; i < n_phi; ++i) {
      const double ang = -2.0 * pi * dk * i / n_phi;
      twphi(i) = std::exp(im * ang);
    }
    table.row(dk + span) = w * (twphi.transpose() * pass1);
  }
  return table;
}

double trapezoid_integral(const Eigen::MatrixXd& f) {
  const double w =
      (2.0 * pi / f.rows()) * (2.0 * pi / f.cols());
  return w * f.sum();
}

} // namespace wlab

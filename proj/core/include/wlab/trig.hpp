#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wlab {

// Spectral machinery on uniform periodic grids over [0, 2*pi).
//
// Fields are stored as Eigen matrices with row index i <-> phi_i = 2*pi*i/n_rows
// and column index j <-> theta_j = 2*pi*j/n_cols. Derivatives are applied with
// dense trigonometric differentiation matrices; these are exact (to rounding)
// for band-limited data below the Nyquist frequency.

// First-derivative matrix for an even number of uniform periodic samples.
Eigen::MatrixXd trig_diff_matrix(int n);

// Second-derivative matrix (explicit formula, not the square of the first).
Eigen::MatrixXd trig_diff2_matrix(int n);

// Cached pair of derivative operators for an (n_phi x n_theta) grid.
class SpectralOps {
public:
  SpectralOps(int n_phi, int n_theta);

  int n_phi() const { return n_phi_; }
  int n_theta() const { return n_theta_; }

  Eigen::MatrixXd d_phi(const Eigen::MatrixXd& f) const;     // d/dphi
  Eigen::MatrixXd d_theta(const Eigen::MatrixXd& f) const;   // d/dtheta
  Eigen::MatrixXd d2_phi(const Eigen::MatrixXd& f) const;    // d^2/dphi^2
  Eigen::MatrixXd d2_theta(const Eigen::MatrixXd& f) const;  // d^2/dtheta^2
  Eigen::MatrixXd d2_phi_theta(const Eigen::MatrixXd& f) const;

private:
  int n_phi_ = 0;
  int n_theta_ = 0;
  Eigen::MatrixXd dphi_, dphi2_;    // act from the left
  Eigen::MatrixXd dthetaT_, dtheta2T_;  // act from the right (transposed)
};

// One complex Fourier mode exp(i*(k*phi + l*theta)).
struct Mode {
  int k = 0;
  int l = 0;
};

// Square truncation |k| <= degree, |l| <= degree in lexicographic order.
std::vector<Mode> square_mode_set(int degree);

// Label of a real trigonometric basis function, e.g. "cos(3p)sin(2t)".
struct ModeLabel {
  Mode mode;          // representative frequency (k >= 0 half-lattice)
  bool sine = false;  // sine branch of the +/- k pair
  std::string text;   // printable form
};

// Partial discrete Fourier transform table of a real coefficient field:
//   table(dk + span, dl + span) = w * sum_{ij} c(i,j) * exp(-i*(dk*phi_i + dl*theta_j))
// with w = (2*pi/n_phi)*(2*pi/n_theta) and dk, dl in [-span, span]. Entry
// (dk, dl) equals the periodic-trapezoid value of the integral
//   /int c * exp(-i*(dk*phi + dl*theta)) dphi dtheta,
// so <c * e_b, e_a>_{dphi dtheta} = table(k_a - k_b, l_a - l_b).
Eigen::MatrixXcd dft_table(const Eigen::MatrixXd& c, int span);

// Trapezoid integral of a field against dphi dtheta.
double trapezoid_integral(const Eigen::MatrixXd& f);

} // namespace wlab

#include "wlab/variational.hpp"

#include <stdexcept>

namespace wlab {

namespace {

// Laplace-Beltrami of a nodal field under the induced metric of the forms.
ScalarField laplace_beltrami(const SpectralOps& ops, const FormsField& forms,
                             const ScalarField& f) {
  const Eigen::MatrixXd f1 = ops.d_phi(f);
  const Eigen::MatrixXd f2 = ops.d_theta(f);
  const Eigen::MatrixXd flux1 =
      forms.dsigma.cwiseProduct(forms.inv11.cwiseProduct(f1) +
                                forms.inv12.cwiseProduct(f2));
  const Eigen::MatrixXd flux2 =
      forms.dsigma.cwiseProduct(forms.inv12.cwiseProduct(f1) +
                                forms.inv22.cwiseProduct(f2));
  return (ops.d_phi(flux1) + ops.d_theta(flux2)).cwiseQuotient(forms.dsigma);
}

} // namespace

ScalarField first_variation_density(const FormsField& forms,
                                    const MetricModel& model) {
  const int rows = forms.grid.n_phi();
  const int cols = forms.grid.n_theta();
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("first_variation_density: empty forms field");

  const SpectralOps ops(rows, cols);
  const ScalarField lap_mean = laplace_beltrami(ops, forms, forms.mean);

  ScalarField density(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const Vec3 n(forms.nx(i, j), forms.ny(i, j), forms.nz(i, j));
      const Mat3 ricci = coordinate_ricci(model, forms.grid.position(i, j));
      const double h = forms.mean(i, j);
      density(i, j) = -lap_mean(i, j) - forms.norm2(i, j) * h -
                      h * n.dot(ricci * n) + 0.5 * h * h * h;
    }
  return density;
}

} // namespace wlab

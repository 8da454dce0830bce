#include "wlab/surface.hpp"

#include <cmath>
#include <stdexcept>

#include "wlab/constants.hpp"
#include "wlab/trig.hpp"

namespace wlab {

double SurfaceGrid::phi(int i) const { return 2.0 * pi * i / n_phi(); }
double SurfaceGrid::theta(int j) const { return 2.0 * pi * j / n_theta(); }

SurfaceGrid build_clifford_torus(int n_phi, int n_theta) {
  SurfaceGrid grid;
  grid.x.resize(n_phi, n_theta);
  grid.y.resize(n_phi, n_theta);
  grid.z.resize(n_phi, n_theta);
  for (int i = 0; i < n_phi; ++i) {
    const double phi = 2.0 * pi * i / n_phi;
    const double rho = sqrt2 + std::cos(phi);
    const double sp = std::sin(phi);
    for (int j = 0; j < n_theta; ++j) {
      const double theta = 2.0 * pi * j / n_theta;
      grid.x(i, j) = rho * std::cos(theta);
      grid.y(i, j) = rho * std::sin(theta);
      grid.z(i, j) = sp;
    }
  }
  return grid;
}

SurfaceGrid build_clifford_torus(int resolution) {
  return build_clifford_torus(resolution, resolution);
}

FieldDerivs spectral_gradient(const ScalarField& field) {
  SpectralOps ops(static_cast<int>(field.rows()),
                  static_cast<int>(field.cols()));
  return FieldDerivs{ops.d_phi(field), ops.d_theta(field)};
}

PointForms point_forms(const Jet2& jet, const MetricJet& ambient) {
  PointForms out;
  const Mat3& g = ambient.g;

  const Vec3 tu = jet.yu, tv = jet.yv;
  out.first(0, 0) = tu.dot(g * tu);
  out.first(0, 1) = out.first(1, 0) = tu.dot(g * tv);
  out.first(1, 1) = tv.dot(g * tv);

  const double det =
      out.first(0, 0) * out.first(1, 1) - out.first(0, 1) * out.first(1, 0);
  if (det <= 0.0)
    throw std::runtime_error("point_forms: degenerate first fundamental form");
  out.dsigma = std::sqrt(det);

  // Unit normal: g-orthogonal to the tangent plane, oriented like the
  // Euclidean normal (d_v y) x (d_u y).
  const Vec3 raw = g.inverse() * tv.cross(tu);
  out.normal = raw / std::sqrt(raw.dot(g * raw));

  // Second fundamental form A_ij = -g(n, dd_ij y + Gamma(d_i y, d_j y)),
  // matching the convention A(X, Y) = g(nabla_X n, Y).
  auto second_of = [&](const Vec3& hess, const Vec3& a, const Vec3& b) {
    Vec3 corrected = hess;
    for (int k = 0; k < 3; ++k) corrected[k] += a.dot(ambient.christoffel[k] * b);
    return -out.normal.dot(g * corrected);
  };
  out.second(0, 0) = second_of(jet.yuu, tu, tu);
  out.second(0, 1) = out.second(1, 0) = second_of(jet.yuv, tu, tv);
  out.second(1, 1) = second_of(jet.yvv, tv, tv);

  const Eigen::Matrix2d inv = out.first.inverse();
  out.mean = (inv * out.second).trace();
  const Eigen::Matrix2d shape = inv * out.second;
  out.norm2 = (shape * shape).trace();
  out.traceless2 = out.norm2 - 0.5 * out.mean * out.mean;
  return out;
}

PointForms point_forms(const Jet2& jet, const MetricModel& model) {
  return point_forms(jet, metric_at(model, jet.y));
}

FormsField fundamental_forms(const SurfaceGrid& grid, const MetricModel& model) {
  const int np = grid.n_phi(), nt = grid.n_theta();
  SpectralOps ops(np, nt);

  const Eigen::MatrixXd xu = ops.d_phi(grid.x), yu = ops.d_phi(grid.y),
                        zu = ops.d_phi(grid.z);
  const Eigen::MatrixXd xv = ops.d_theta(grid.x), yv = ops.d_theta(grid.y),
                        zv = ops.d_theta(grid.z);
  const Eigen::MatrixXd xuu = ops.d2_phi(grid.x), yuu = ops.d2_phi(grid.y),
                        zuu = ops.d2_phi(grid.z);
  const Eigen::MatrixXd xvv = ops.d2_theta(grid.x), yvv = ops.d2_theta(grid.y),
                        zvv = ops.d2_theta(grid.z);
  const Eigen::MatrixXd xuv = ops.d2_phi_theta(grid.x),
                        yuv = ops.d2_phi_theta(grid.y),
                        zuv = ops.d2_phi_theta(grid.z);

  FormsField f;
  f.grid = grid;
  auto alloc = [&](Eigen::MatrixXd& m) { m.resize(np, nt); };
  alloc(f.g11), alloc(f.g12), alloc(f.g22);
  alloc(f.inv11), alloc(f.inv12), alloc(f.inv22);
  alloc(f.a11), alloc(f.a12), alloc(f.a22);
  alloc(f.mean), alloc(f.norm2), alloc(f.traceless2), alloc(f.dsigma);
  alloc(f.nx), alloc(f.ny), alloc(f.nz);

  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nt; ++j) {
      Jet2 jet;
      jet.y = grid.position(i, j);
      jet.yu = Vec3(xu(i, j), yu(i, j), zu(i, j));
      jet.yv = Vec3(xv(i, j), yv(i, j), zv(i, j));
      jet.yuu = Vec3(xuu(i, j), yuu(i, j), zuu(i, j));
      jet.yuv = Vec3(xuv(i, j), yuv(i, j), zuv(i, j));
      jet.yvv = Vec3(xvv(i, j), yvv(i, j), zvv(i, j));
      const PointForms p = point_forms(jet, model);
      f.g11(i, j) = p.first(0, 0);
      f.g12(i, j) = p.first(0, 1);
      f.g22(i, j) = p.first(1, 1);
      const Eigen::Matrix2d inv = p.first.inverse();
      f.inv11(i, j) = inv(0, 0);
      f.inv12(i, j) = inv(0, 1);
      f.inv22(i, j) = inv(1, 1);
      f.a11(i, j) = p.second(0, 0);
      f.a12(i, j) = p.second(0, 1);
      f.a22(i, j) = p.second(1, 1);
      f.mean(i, j) = p.mean;
      f.norm2(i, j) = p.norm2;
      f.traceless2(i, j) = p.traceless2;
      f.dsigma(i, j) = p.dsigma;
      f.nx(i, j) = p.normal[0];
      f.ny(i, j) = p.normal[1];
      f.nz(i, j) = p.normal[2];
    }
  return f;
}

FormsField fundamental_forms(const SurfaceGrid& grid) {
  return fundamental_forms(grid, euclidean_metric());
}

double integrate(const ScalarField& density, const FormsField& forms) {
  if (density.rows() != forms.dsigma.rows() ||
      density.cols() != forms.dsigma.cols())
    throw std::invalid_argument("integrate: field/grid size mismatch");
  const double weight = (2.0 * pi / density.rows()) * (2.0 * pi / density.cols());
  return weight * (density.array() * forms.dsigma.array()).sum();
}

double surface_area(const FormsField& forms) {
  const double weight =
      (2.0 * pi / forms.dsigma.rows()) * (2.0 * pi / forms.dsigma.cols());
  return weight * forms.dsigma.sum();
}

double willmore_energy(const FormsField& forms) {
  return integrate(ScalarField(forms.mean.array().square()), forms);
}

double hawking_mass(const FormsField& forms) {
  const double area = surface_area(forms);
  const double energy = willmore_energy(forms);
  return std::sqrt(area) / (64.0 * std::pow(pi, 1.5)) *
         (16.0 * pi - energy);
}

} // namespace wlab

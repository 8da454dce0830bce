#include "wlab/variational.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>

#include "wlab/constants.hpp"

namespace wlab {

namespace {

using Cx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Coefficient fields
// ---------------------------------------------------------------------------

Eigen::Matrix2d node_matrix(const Eigen::MatrixXd& m11, const Eigen::MatrixXd& m12,
                            const Eigen::MatrixXd& m22, int i, int j) {
  Eigen::Matrix2d m;
  m << m11(i, j), m12(i, j), m12(i, j), m22(i, j);
  return m;
}

} // namespace

FlatOperatorFields flat_operator_fields(const FormsField& forms) {
  const int rows = forms.grid.n_phi();
  const int cols = forms.grid.n_theta();
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("flat_operator_fields: empty forms field");
  const SpectralOps ops(rows, cols);

  FlatOperatorFields f;
  f.inv11 = forms.inv11;
  f.inv12 = forms.inv12;
  f.inv22 = forms.inv22;
  f.norm2 = forms.norm2;
  f.mean = forms.mean;
  f.dsigma = forms.dsigma;

  // Traceless second fundamental form with raised indices.
  f.tl11.resize(rows, cols);
  f.tl12.resize(rows, cols);
  f.tl22.resize(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const Eigen::Matrix2d g = node_matrix(forms.g11, forms.g12, forms.g22, i, j);
      const Eigen::Matrix2d ginv =
          node_matrix(forms.inv11, forms.inv12, forms.inv22, i, j);
      const Eigen::Matrix2d a = node_matrix(forms.a11, forms.a12, forms.a22, i, j);
      const Eigen::Matrix2d tl_low = a - 0.5 * forms.mean(i, j) * g;
      const Eigen::Matrix2d tl_up = ginv * tl_low * ginv;
      f.tl11(i, j) = tl_up(0, 0);
      f.tl12(i, j) = 0.5 * (tl_up(0, 1) + tl_up(1, 0));
      f.tl22(i, j) = tl_up(1, 1);
    }

  // First-order Laplacian coefficients b^j = dsigma^{-1} d_i(dsigma g^{ij}).
  f.div1 = (ops.d_phi(forms.dsigma.cwiseProduct(forms.inv11)) +
            ops.d_theta(forms.dsigma.cwiseProduct(forms.inv12)))
               .cwiseQuotient(forms.dsigma);
  f.div2 = (ops.d_phi(forms.dsigma.cwiseProduct(forms.inv12)) +
            ops.d_theta(forms.dsigma.cwiseProduct(forms.inv22)))
               .cwiseQuotient(forms.dsigma);

  // Surface Christoffel symbols of the induced metric.
  const Eigen::MatrixXd dg11_1 = ops.d_phi(forms.g11);
  const Eigen::MatrixXd dg11_2 = ops.d_theta(forms.g11);
  const Eigen::MatrixXd dg12_1 = ops.d_phi(forms.g12);
  const Eigen::MatrixXd dg12_2 = ops.d_theta(forms.g12);
  const Eigen::MatrixXd dg22_1 = ops.d_phi(forms.g22);
  const Eigen::MatrixXd dg22_2 = ops.d_theta(forms.g22);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      f.gamma1[i][j].resize(rows, cols);
      f.gamma2[i][j].resize(rows, cols);
    }
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const Eigen::Matrix2d ginv =
          node_matrix(forms.inv11, forms.inv12, forms.inv22, i, j);
      // dg[c](a, b) = d_c g_{ab}
      Eigen::Matrix2d dg[2];
      dg[0] << dg11_1(i, j), dg12_1(i, j), dg12_1(i, j), dg22_1(i, j);
      dg[1] << dg11_2(i, j), dg12_2(i, j), dg12_2(i, j), dg22_2(i, j);
      for (int a = 0; a < 2; ++a)
        for (int b = a; b < 2; ++b) {
          double chr[2];
          for (int k = 0; k < 2; ++k) {
            double sum = 0.0;
            for (int l = 0; l < 2; ++l)
              sum += ginv(k, l) * (dg[a](b, l) + dg[b](a, l) - dg[l](a, b));
            chr[k] = 0.5 * sum;
          }
          f.gamma1[a][b](i, j) = chr[0];
          f.gamma2[a][b](i, j) = chr[1];
          f.gamma1[b][a](i, j) = chr[0];
          f.gamma2[b][a](i, j) = chr[1];
        }
    }

  // Mean-curvature derivatives and the zero-order coefficients.
  f.dmean1 = ops.d_phi(forms.mean);
  f.dmean2 = ops.d_theta(forms.mean);
  const Eigen::MatrixXd grad_mean2 =
      forms.inv11.cwiseProduct(f.dmean1.cwiseProduct(f.dmean1)) +
      2.0 * forms.inv12.cwiseProduct(f.dmean1.cwiseProduct(f.dmean2)) +
      forms.inv22.cwiseProduct(f.dmean2.cwiseProduct(f.dmean2));
  const Eigen::MatrixXd lap_mean =
      (ops.d_phi(forms.dsigma.cwiseProduct(
           forms.inv11.cwiseProduct(f.dmean1) +
           forms.inv12.cwiseProduct(f.dmean2))) +
       ops.d_theta(forms.dsigma.cwiseProduct(
           forms.inv12.cwiseProduct(f.dmean1) +
           forms.inv22.cwiseProduct(f.dmean2))))
          .cwiseQuotient(forms.dsigma);
  const Eigen::MatrixXd hess11 =
      ops.d2_phi(forms.mean) - f.gamma1[0][0].cwiseProduct(f.dmean1) -
      f.gamma2[0][0].cwiseProduct(f.dmean2);
  const Eigen::MatrixXd hess12 =
      ops.d2_phi_theta(forms.mean) - f.gamma1[0][1].cwiseProduct(f.dmean1) -
      f.gamma2[0][1].cwiseProduct(f.dmean2);
  const Eigen::MatrixXd hess22 =
      ops.d2_theta(forms.mean) - f.gamma1[1][1].cwiseProduct(f.dmean1) -
      f.gamma2[1][1].cwiseProduct(f.dmean2);
  const Eigen::MatrixXd hess_dot_tl =
      f.tl11.cwiseProduct(hess11) + 2.0 * f.tl12.cwiseProduct(hess12) +
      f.tl22.cwiseProduct(hess22);
  const Eigen::MatrixXd mean2 = forms.mean.cwiseProduct(forms.mean);
  f.zero_order = grad_mean2 + forms.mean.cwiseProduct(lap_mean) +
                 2.0 * hess_dot_tl + 2.0 * mean2.cwiseProduct(forms.traceless2);
  f.form_potential = f.zero_order - 0.5 * mean2.cwiseProduct(forms.norm2);
  return f;
}

ScalarField apply_flat_jacobi(const FlatOperatorFields& fields,
                              const ScalarField& field) {
  const int rows = static_cast<int>(fields.mean.rows());
  const int cols = static_cast<int>(fields.mean.cols());
  if (field.rows() != rows || field.cols() != cols)
    throw std::invalid_argument("apply_flat_jacobi: field/grid size mismatch");
  const SpectralOps ops(rows, cols);

  auto membrane = [&](const ScalarField& p) {
    const Eigen::MatrixXd p1 = ops.d_phi(p);
    const Eigen::MatrixXd p2 = ops.d_theta(p);
    const Eigen::MatrixXd lap =
        fields.inv11.cwiseProduct(ops.d2_phi(p)) +
        2.0 * fields.inv12.cwiseProduct(ops.d2_phi_theta(p)) +
        fields.inv22.cwiseProduct(ops.d2_theta(p)) +
        fields.div1.cwiseProduct(p1) + fields.div2.cwiseProduct(p2);
    return ScalarField(-lap - fields.norm2.cwiseProduct(p));
  };

  const ScalarField once = membrane(field);
  const ScalarField twice = membrane(once);

  const Eigen::MatrixXd p1 = ops.d_phi(field);
  const Eigen::MatrixXd p2 = ops.d_theta(field);
  const Eigen::MatrixXd h11 = ops.d2_phi(field) -
                              fields.gamma1[0][0].cwiseProduct(p1) -
                              fields.gamma2[0][0].cwiseProduct(p2);
  const Eigen::MatrixXd h12 = ops.d2_phi_theta(field) -
                              fields.gamma1[0][1].cwiseProduct(p1) -
                              fields.gamma2[0][1].cwiseProduct(p2);
  const Eigen::MatrixXd h22 = ops.d2_theta(field) -
                              fields.gamma1[1][1].cwiseProduct(p1) -
                              fields.gamma2[1][1].cwiseProduct(p2);
  const Eigen::MatrixXd tl_hess = fields.tl11.cwiseProduct(h11) +
                                  2.0 * fields.tl12.cwiseProduct(h12) +
                                  fields.tl22.cwiseProduct(h22);
  const Eigen::MatrixXd tl_grad =
      fields.tl11.cwiseProduct(p1.cwiseProduct(fields.dmean1)) +
      fields.tl12.cwiseProduct(p1.cwiseProduct(fields.dmean2) +
                               p2.cwiseProduct(fields.dmean1)) +
      fields.tl22.cwiseProduct(p2.cwiseProduct(fields.dmean2));
  const Eigen::MatrixXd mean2 = fields.mean.cwiseProduct(fields.mean);

  return twice + 0.5 * mean2.cwiseProduct(once) +
         2.0 * fields.mean.cwiseProduct(tl_hess) + 2.0 * tl_grad +
         fields.zero_order.cwiseProduct(field);
}

// ---------------------------------------------------------------------------
// Galerkin assembly
// ---------------------------------------------------------------------------

namespace {

// Tables of the weighted coefficient products, indexed at (dk + span, dl + span).
struct GalerkinTables {
  int span = 0;
  std::array<MatrixXcd, 21> product;    // gamma_p * gamma_q * dsigma, p <= q
  std::array<std::array<int, 6>, 6> at; // (p, q) -> index into product
  std::array<MatrixXcd, 3> gradient;    // c^{11}, c^{12}, c^{22} times dsigma
  MatrixXcd potential;                  // V * dsigma
  MatrixXcd mass;                       // dsigma
};

GalerkinTables build_tables(const FlatOperatorFields& f, int truncation) {
  GalerkinTables t;
  t.span = 2 * truncation;
  const std::array<const Eigen::MatrixXd*, 6> gamma = {
      &f.inv11, &f.inv12, &f.inv22, &f.div1, &f.div2, &f.norm2};
  int slot = 0;
  for (int p = 0; p < 6; ++p)
    for (int q = p; q < 6; ++q) {
      t.product[slot] =
          dft_table(gamma[p]->cwiseProduct(*gamma[q]).cwiseProduct(f.dsigma),
                    t.span);
      t.at[p][q] = slot;
      t.at[q][p] = slot;
      ++slot;
    }
  const Eigen::MatrixXd mean2 = f.mean.cwiseProduct(f.mean);
  const Eigen::MatrixXd c11 =
      0.5 * mean2.cwiseProduct(f.inv11) - 2.0 * f.mean.cwiseProduct(f.tl11);
  const Eigen::MatrixXd c12 =
      0.5 * mean2.cwiseProduct(f.inv12) - 2.0 * f.mean.cwiseProduct(f.tl12);
  const Eigen::MatrixXd c22 =
      0.5 * mean2.cwiseProduct(f.inv22) - 2.0 * f.mean.cwiseProduct(f.tl22);
  t.gradient[0] = dft_table(c11.cwiseProduct(f.dsigma), t.span);
  t.gradient[1] = dft_table(c12.cwiseProduct(f.dsigma), t.span);
  t.gradient[2] = dft_table(c22.cwiseProduct(f.dsigma), t.span);
  t.potential = dft_table(f.form_potential.cwiseProduct(f.dsigma), t.span);
  t.mass = dft_table(f.dsigma, t.span);
  return t;
}

// Symbol factors of the membrane operator acting on exp(i (k phi + l theta)).
std::array<Cx, 6> membrane_symbol(const Mode& m) {
  return {Cx(static_cast<double>(m.k) * m.k, 0.0),
          Cx(2.0 * m.k * m.l, 0.0),
          Cx(static_cast<double>(m.l) * m.l, 0.0),
          Cx(0.0, -static_cast<double>(m.k)),
          Cx(0.0, -static_cast<double>(m.l)),
          Cx(-1.0, 0.0)};
}

Cx stiffness_entry(const GalerkinTables& t, const Mode& a, const Mode& b) {
  const int r = a.k - b.k + t.span;
  const int c = a.l - b.l + t.span;
  const auto ma = membrane_symbol(a);
  const auto mb = membrane_symbol(b);
  Cx sum(0.0, 0.0);
  for (int p = 0; p < 6; ++p) {
    const Cx cp = std::conj(ma[p]);
    for (int q = 0; q < 6; ++q)
      sum += cp * mb[q] * t.product[t.at[p][q]](r, c);
  }
  const double ka[2] = {static_cast<double>(a.k), static_cast<double>(a.l)};
  const double kb[2] = {static_cast<double>(b.k), static_cast<double>(b.l)};
  sum += ka[0] * kb[0] * t.gradient[0](r, c);
  sum += (ka[0] * kb[1] + ka[1] * kb[0]) * t.gradient[1](r, c);
  sum += ka[1] * kb[1] * t.gradient[2](r, c);
  sum += t.potential(r, c);
  return sum;
}

Cx mass_entry(const GalerkinTables& t, const Mode& a, const Mode& b) {
  return t.mass(a.k - b.k + t.span, a.l - b.l + t.span);
}

std::string mode_text(const Mode& m, bool sine) {
  if (m.k == 0 && m.l == 0) return "1";
  auto freq = [](int k, int l) {
    std::string s;
    if (k != 0) s += std::to_string(k) + "p";
    if (l != 0) {
      if (!s.empty() && l > 0) s += "+";
      s += std::to_string(l) + "t";
    }
    return s;
  };
  return (sine ? "sin(" : "cos(") + freq(m.k, m.l) + ")";
}

// Half lattice for the +/- mode pairing: k > 0, or k == 0 and l > 0.
std::vector<Mode> half_mode_set(int truncation) {
  std::vector<Mode> half;
  for (const Mode& m : square_mode_set(truncation))
    if (m.k > 0 || (m.k == 0 && m.l > 0)) half.push_back(m);
  return half;
}

// Fills the real symmetric matrix corresponding to a Hermitian sesquilinear
// entry function, in the ordering [constant, (cos, sin) per half mode].
template <typename EntryFn>
MatrixXd real_reduction(const std::vector<Mode>& half, EntryFn&& entry) {
  const int pairs = static_cast<int>(half.size());
  const int n = 1 + 2 * pairs;
  MatrixXd m(n, n);
  const Mode zero{0, 0};
  m(0, 0) = entry(zero, zero).real();
  for (int jb = 0; jb < pairs; ++jb) {
    const Mode& b = half[jb];
    const Cx q0b = entry(zero, b);
    m(0, 1 + 2 * jb) = sqrt2 * q0b.real();
    m(0, 2 + 2 * jb) = sqrt2 * q0b.imag();
    for (int ia = 0; ia <= jb; ++ia) {
      const Mode& a = half[ia];
      const Cx qab = entry(a, b);
      const Cx qabar = entry(a, Mode{-b.k, -b.l});
      m(1 + 2 * ia, 1 + 2 * jb) = (qab + qabar).real();
      m(2 + 2 * ia, 2 + 2 * jb) = (qab - qabar).real();
      m(2 + 2 * ia, 1 + 2 * jb) = -(qab + qabar).imag();
      m(1 + 2 * ia, 2 + 2 * jb) = (qab - qabar).imag();
    }
  }
  return m.selfadjointView<Eigen::Upper>();
}

} // namespace

OperatorMatrix assemble_flat_operator(const MobiusParam& param, int truncation,
                                      const AssemblyOptions& options) {
  if (truncation < 1)
    throw std::invalid_argument("assemble_flat_operator: truncation < 1");
  const int n = options.grid_resolution;
  if (n < 4 * truncation + 8)
    throw std::invalid_argument(
        "assemble_flat_operator: grid too coarse for the requested truncation");

  const SurfaceGrid grid = family_torus(param, n);
  const FormsField forms = fundamental_forms(grid);
  const FlatOperatorFields fields = flat_operator_fields(forms);
  const GalerkinTables tables = build_tables(fields, truncation);
  const std::vector<Mode> half = half_mode_set(truncation);

  OperatorMatrix op;
  op.truncation = truncation;
  op.grid_resolution = n;

  const MatrixXd stiffness = real_reduction(half, [&](const Mode& a, const Mode& b) {
    return stiffness_entry(tables, a, b);
  });
  const MatrixXd mass = real_reduction(half, [&](const Mode& a, const Mode& b) {
    return mass_entry(tables, a, b);
  });

  op.modes.reserve(1 + 2 * half.size());
  op.modes.push_back({Mode{0, 0}, false, mode_text(Mode{0, 0}, false)});
  for (const Mode& m : half) {
    op.modes.push_back({m, false, mode_text(m, false)});
    op.modes.push_back({m, true, mode_text(m, true)});
  }

  Eigen::LLT<MatrixXd> llt(mass);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "assemble_flat_operator: mass matrix not positive definite");
  const MatrixXd lower = llt.matrixL();

  // entries = L^{-1} S L^{-T}: orthonormalizes the basis in the area-measure
  // inner product while keeping the matrix symmetric.
  MatrixXd work = stiffness;
  lower.triangularView<Eigen::Lower>().solveInPlace(work);
  work.transposeInPlace();
  lower.triangularView<Eigen::Lower>().solveInPlace(work);
  const double drift = (work - work.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, work.cwiseAbs().maxCoeff());
  if (drift > 1e-8 * scale)
    throw std::runtime_error("assemble_flat_operator: symmetry drift " +
                             std::to_string(drift));
  op.entries = 0.5 * (work + work.transpose());

  const int dim = static_cast<int>(op.modes.size());
  op.basis_transform = MatrixXd::Identity(dim, dim);
  lower.transpose().triangularView<Eigen::Upper>().solveInPlace(
      op.basis_transform);
  return op;
}

void ensure_spectrum(OperatorMatrix& op) {
  if (op.spectrum_ready) return;
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(op.entries);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("ensure_spectrum: eigensolver failed");
  op.eigenvalues = solver.eigenvalues();
  op.eigenvectors = solver.eigenvectors();
  op.spectrum_ready = true;
}

SpectrumReport near_kernel(OperatorMatrix& op, double threshold) {
  if (!(threshold >= 0.0))
    throw std::invalid_argument("near_kernel: threshold must be nonnegative");
  ensure_spectrum(op);
  SpectrumReport report;
  report.threshold = threshold;
  report.eigenvalues.assign(op.eigenvalues.data(),
                            op.eigenvalues.data() + op.eigenvalues.size());
  double gap = std::numeric_limits<double>::infinity();
  for (double lambda : report.eigenvalues) {
    const double mag = std::abs(lambda);
    if (mag <= threshold)
      ++report.near_kernel_count;
    else
      gap = std::min(gap, mag);
  }
  report.gap = std::isfinite(gap) ? gap : 0.0;
  report.threshold_valid = std::isfinite(gap) && gap > threshold;
  return report;
}

double adaptive_threshold(OperatorMatrix& op) {
  ensure_spectrum(op);
  std::vector<double> mags(op.eigenvalues.data(),
                           op.eigenvalues.data() + op.eigenvalues.size());
  for (double& m : mags) m = std::abs(m);
  std::sort(mags.begin(), mags.end());
  const int window = std::min<int>(16, static_cast<int>(mags.size()));
  if (window < 2)
    throw std::runtime_error("adaptive_threshold: spectrum too small");
  int best = 0;
  double best_ratio = 0.0;
  for (int i = 0; i + 1 < window; ++i) {
    const double lo = std::max(mags[i], 1e-300);
    const double ratio = mags[i + 1] / lo;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = i;
    }
  }
  return std::sqrt(std::max(mags[best], 1e-300) * mags[best + 1]);
}

VectorXd project_field(const OperatorMatrix& op, const FormsField& forms,
                       const ScalarField& field) {
  if (field.rows() != forms.grid.n_phi() || field.cols() != forms.grid.n_theta())
    throw std::invalid_argument("project_field: field/grid size mismatch");
  const int span = op.truncation;
  const MatrixXcd table =
      dft_table(field.cwiseProduct(forms.dsigma), span);
  VectorXd raw(op.modes.size());
  for (int a = 0; a < static_cast<int>(op.modes.size()); ++a) {
    const ModeLabel& label = op.modes[a];
    const Cx v = table(label.mode.k + span, label.mode.l + span);
    if (label.mode.k == 0 && label.mode.l == 0)
      raw[a] = v.real();
    else
      raw[a] = label.sine ? -sqrt2 * v.imag() : sqrt2 * v.real();
  }
  return op.basis_transform.transpose() * raw;
}

double operator_residual(const OperatorMatrix& op, const VectorXd& coeffs) {
  const double norm = coeffs.norm();
  if (norm == 0.0)
    throw std::invalid_argument("operator_residual: zero coefficient vector");
  return (op.entries * coeffs).norm() / norm;
}

ScalarField synthesize_field(const OperatorMatrix& op, const VectorXd& coeffs,
                             int n_phi, int n_theta) {
  if (coeffs.size() != static_cast<Eigen::Index>(op.modes.size()))
    throw std::invalid_argument("synthesize_field: coefficient size mismatch");
  const VectorXd raw = op.basis_transform * coeffs;

  // Angle tables cos(k phi_i), sin(k phi_i), k = 0..truncation (same for theta).
  const int kmax = op.truncation;
  MatrixXd cos_phi(n_phi, kmax + 1), sin_phi(n_phi, kmax + 1);
  MatrixXd cos_theta(n_theta, kmax + 1), sin_theta(n_theta, kmax + 1);
  for (int i = 0; i < n_phi; ++i)
    for (int k = 0; k <= kmax; ++k) {
      const double a = 2.0 * pi * i / n_phi * k;
      cos_phi(i, k) = std::cos(a);
      sin_phi(i, k) = std::sin(a);
    }
  for (int j = 0; j < n_theta; ++j)
    for (int k = 0; k <= kmax; ++k) {
      const double a = 2.0 * pi * j / n_theta * k;
      cos_theta(j, k) = std::cos(a);
      sin_theta(j, k) = std::sin(a);
    }

  ScalarField out = ScalarField::Zero(n_phi, n_theta);
  for (std::size_t idx = 0; idx < op.modes.size(); ++idx) {
    const double w = raw[static_cast<Eigen::Index>(idx)];
    if (w == 0.0) continue;
    const Mode m = op.modes[idx].mode;
    if (m.k == 0 && m.l == 0) {
      out.array() += w;
      continue;
    }
    const int la = std::abs(m.l);
    const double lsign = m.l < 0 ? -1.0 : 1.0;
    const auto ck = cos_phi.col(m.k);
    const auto sk = sin_phi.col(m.k);
    const auto cl = cos_theta.col(la);
    const Eigen::VectorXd sl = lsign * sin_theta.col(la);
    // sqrt2 * cos(k phi + l theta) and sqrt2 * sin(k phi + l theta): the raw
    // real modes carry the same normalization used by the +/- pair reduction.
    if (!op.modes[idx].sine)
      out.noalias() += (sqrt2 * w) * (ck * cl.transpose() - sk * sl.transpose());
    else
      out.noalias() += (sqrt2 * w) * (sk * cl.transpose() + ck * sl.transpose());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Certified kernel counting
// ---------------------------------------------------------------------------

namespace {

// The ten conformal generators of flat space as ambient vector fields.
std::vector<std::function<Vec3(const Vec3&)>> conformal_generators() {
  std::vector<std::function<Vec3(const Vec3&)>> out;
  out.emplace_back([](const Vec3& y) { return y; }); // dilation
  for (int i = 0; i < 3; ++i)
    out.emplace_back([i](const Vec3&) { return Vec3(Vec3::Unit(i)); });
  for (int i = 0; i < 3; ++i)
    out.emplace_back([i](const Vec3& y) { return Vec3(Vec3::Unit(i).cross(y)); });
  for (int i = 0; i < 3; ++i)
    out.emplace_back([i](const Vec3& y) {
      const Vec3 b = Vec3::Unit(i);
      return Vec3(2.0 * b.dot(y) * y - y.squaredNorm() * b);
    });
  return out;
}

} // namespace

KernelCertificate certify_kernel(OperatorMatrix& op, const MobiusParam& param) {
  const SurfaceGrid grid = family_torus(param, op.grid_resolution);
  const FormsField forms = fundamental_forms(grid);
  const auto generators = conformal_generators();

  MatrixXd projections(op.entries.rows(), static_cast<int>(generators.size()));
  for (int c = 0; c < static_cast<int>(generators.size()); ++c) {
    ScalarField normal_part(grid.n_phi(), grid.n_theta());
    for (int i = 0; i < grid.n_phi(); ++i)
      for (int j = 0; j < grid.n_theta(); ++j) {
        const Vec3 n(forms.nx(i, j), forms.ny(i, j), forms.nz(i, j));
        normal_part(i, j) = n.dot(generators[c](grid.position(i, j)));
      }
    projections.col(c) = project_field(op, forms, normal_part);
  }

  Eigen::JacobiSVD<MatrixXd> svd(projections, Eigen::ComputeThinU);
  const VectorXd sigma = svd.singularValues();
  const double tol = 1e-6 * sigma[0];
  int rank = 0;
  while (rank < sigma.size() && sigma[rank] > tol) ++rank;
  if (rank == 0)
    throw std::runtime_error("certify_kernel: vanishing conformal projections");

  KernelCertificate cert;
  cert.rank = rank;
  cert.singular_ratio =
      rank < sigma.size() ? sigma[rank] / sigma[rank - 1] : 0.0;

  const MatrixXd span = svd.matrixU().leftCols(rank);

  // Coefficient vectors are orthonormal for the surface inner product, so
  // the overlap of eigenvector v with the span is just ||span^T v||^2.
  ensure_spectrum(op);
  const Eigen::MatrixXd overlaps = span.transpose() * op.eigenvectors;
  std::vector<int> matched;
  cert.min_overlap = 1.0;
  double low = 0.0;
  double high = std::numeric_limits<double>::infinity();
  for (int i = 0; i < op.eigenvalues.size(); ++i) {
    const double overlap = overlaps.col(i).squaredNorm();
    const double mag = std::abs(op.eigenvalues[i]);
    if (overlap >= 0.5) {
      matched.push_back(i);
      cert.min_overlap = std::min(cert.min_overlap, overlap);
      low = std::max(low, mag);
    } else {
      high = std::min(high, mag);
    }
  }
  if (static_cast<int>(matched.size()) != rank)
    throw std::runtime_error(
        "certify_kernel: matched eigenvector cluster has " +
        std::to_string(matched.size()) + " members, projections have rank " +
        std::to_string(rank));

  cert.lambda_low = low;
  cert.lambda_high = std::isfinite(high) ? high : 0.0;
  cert.suggested_threshold =
      std::sqrt(std::max(cert.lambda_low, 1e-300) *
                std::max(cert.lambda_high, 1e-300));
  return cert;
}

} // namespace wlab

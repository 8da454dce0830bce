#include "wlab/corrector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wlab/constants.hpp"

namespace wlab {

namespace {

struct Evaluation {
  Eigen::VectorXd g;    // projected stationarity residual
  Eigen::VectorXd raw;  // unprojected gradient coefficients
  double area = 0.0;
};

} // namespace

CorrectorResult corrector_solve(const MetricModel& model, double epsilon,
                                const Vec3& base_point,
                                const MobiusParam& param, double tolerance,
                                const CorrectorOptions& options) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("corrector_solve: epsilon must be positive");
  if (!(tolerance > 0.0))
    throw std::invalid_argument("corrector_solve: tolerance must be positive");

  // Ambient geometry at unit scale: g_eps(y) = g(base + eps y).
  const MetricModel ambient =
      with_epsilon(recentered(model, base_point), epsilon);

  OperatorMatrix op = assemble_flat_operator(
      param, options.truncation, {options.grid_resolution});
  const int n = options.grid_resolution;
  const SurfaceGrid base = family_torus(param, n);
  const FormsField base_forms = fundamental_forms(base);
  const JacobiBasis jacobi = jacobi_fields(param, base);
  const Eigen::Index dim = op.entries.rows();

  // Constraint span: mean-curvature direction plus the seven non-dilation
  // Jacobi fields (the dilation direction is controlled by the area term).
  Eigen::MatrixXd span(dim, 8);
  span.col(0) = project_field(op, base_forms, base_forms.mean);
  for (int j = 1; j < 8; ++j)
    span.col(j) = project_field(op, base_forms, jacobi.fields[j]);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(span);
  const Eigen::MatrixXd ortho =
      qr.householderQ() * Eigen::MatrixXd::Identity(dim, 8);

  auto evaluate = [&](const Eigen::VectorXd& coeffs) {
    const ScalarField phi = synthesize_field(op, coeffs, n, n);
    SurfaceGrid moved = base;
    moved.x += phi.cwiseProduct(base_forms.nx);
    moved.y += phi.cwiseProduct(base_forms.ny);
    moved.z += phi.cwiseProduct(base_forms.nz);
    const FormsField forms = fundamental_forms(moved, ambient);
    // The stationarity density is the L2 gradient of the energy: its
    // coefficient derivative matches the assembled second-variation matrix.
    const ScalarField gradient = first_variation_density(forms, ambient);

    Evaluation eval;
    eval.raw = project_field(op, base_forms, gradient);
    eval.area = surface_area(forms);
    Eigen::VectorXd constraints(8);
    constraints[0] = eval.area - reference_area;
    for (int j = 1; j < 8; ++j) constraints[j] = span.col(j).dot(coeffs);
    eval.g = eval.raw - ortho * (ortho.transpose() * eval.raw) +
             ortho * constraints;
    return eval;
  };

  // Frozen Newton matrix: flat Jacobi operator off the constraint span,
  // linearized constraints on it.
  Eigen::MatrixXd newton = op.entries;
  newton -= ortho * (ortho.transpose() * op.entries);
  newton += ortho * span.transpose();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(newton);

  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(dim);
  Evaluation current = evaluate(coeffs);

  CorrectorResult result;
  result.residual_history.push_back(current.g.norm());

  // Fallback for ambients where the frozen flat matrix is a poor model of
  // the true derivative: rebuild it once by column-wise central differences
  // of the full residual map, then keep the refreshed factorization frozen.
  bool rebuilt = false;
  auto rebuild_jacobian = [&]() {
    const double h = 1e-4;
    Eigen::MatrixXd fd(dim, dim);
    Eigen::VectorXd probe = coeffs;
    for (Eigen::Index j = 0; j < dim; ++j) {
      probe[j] = coeffs[j] + h;
      const Eigen::VectorXd plus = evaluate(probe).g;
      probe[j] = coeffs[j] - h;
      fd.col(j) = (plus - evaluate(probe).g) / (2.0 * h);
      probe[j] = coeffs[j];
    }
    lu.compute(fd);
    rebuilt = true;
  };

  int iterations = 0;
  while (current.g.norm() > tolerance) {
    if (++iterations > options.max_iterations)
      throw std::runtime_error(
          "corrector_solve: no convergence in " +
          std::to_string(options.max_iterations) +
          " iterations (epsilon too large or resolution too low)");
    Evaluation next;
    bool accepted = false;
    while (!accepted) {
      const Eigen::VectorXd step = lu.solve(current.g);
      double scale = 1.0;
      for (int halvings = 0; halvings <= options.max_halvings; ++halvings) {
        next = evaluate(coeffs - scale * step);
        if (next.g.norm() < current.g.norm()) {
          coeffs -= scale * step;
          accepted = true;
          break;
        }
        scale *= 0.5;
      }
      if (accepted) break;
      // The frozen matrix failed to produce a descent direction; switch to
      // the finite-difference derivative once before giving up.
      if (rebuilt)
        throw std::runtime_error("corrector_solve: stagnated at residual " +
                                 std::to_string(current.g.norm()));
      rebuild_jacobian();
    }
    const double reduction = next.g.norm() / current.g.norm();
    current = next;
    result.residual_history.push_back(current.g.norm());
    if (!rebuilt && reduction > 0.5 && current.g.norm() > tolerance)
      rebuild_jacobian();
  }

  // Multipliers: the converged gradient lies in the constraint span.
  const Eigen::VectorXd beta =
      span.colPivHouseholderQr().solve(current.raw);
  for (int j = 0; j < 8; ++j) result.beta[static_cast<std::size_t>(j)] = beta[j];
  result.phi = synthesize_field(op, coeffs, n, n);
  result.area_error = std::abs(current.area - reference_area);
  return result;
}

} // namespace wlab

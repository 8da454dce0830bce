#pragma once

#include <array>
#include <vector>

#include "wlab/metrics.hpp"
#include "wlab/mobius.hpp"
#include "wlab/surface.hpp"
#include "wlab/variational.hpp"

namespace wlab {

// Normal-graph correction of a family member toward an area-constrained
// critical point of the Willmore energy, orthogonally to the symmetry
// directions. Solves the projected stationarity system
//   G(phi) = Pi[ W'(Sigma[phi]) ] + (area - A0) * u_H
//            + sum_j <Z_j, phi> * u_j = 0
// by Newton iteration in mode space, where Pi projects out the span of the
// mean-curvature direction and the seven non-dilation Jacobi fields, and the
// u's are an orthonormal basis of that span. At the solution the energy
// gradient lies in the span; its coefficients are the reported multipliers.
struct CorrectorResult {
  ScalarField phi;                       // normal graph correction on the grid
  std::array<double, 8> beta{};          // beta[0]: area multiplier, beta[1..7]
  std::vector<double> residual_history;  // ||G|| at start and per accepted step
  double area_error = 0.0;               // |area - A0| at the returned state
};

struct CorrectorOptions {
  int truncation = 10;       // Fourier cutoff of the correction
  int grid_resolution = 128; // evaluation grid
  int max_iterations = 40;
  int max_halvings = 12;
};

// Corrects the family member at `param`, placed at base_point and shrunk by
// epsilon inside the model's chart (evaluated at unit scale with the pulled
// back metric g(base + eps * y)). Converges when ||G|| <= tolerance, which
// bounds the area defect and the kernel inner products by the same value.
// Throws on Newton stagnation or iteration overflow.
CorrectorResult corrector_solve(const MetricModel& model, double epsilon,
                                const Vec3& base_point,
                                const MobiusParam& param, double tolerance,
                                const CorrectorOptions& options = {});

} // namespace wlab

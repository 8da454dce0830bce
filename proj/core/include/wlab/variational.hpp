#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "wlab/metrics.hpp"
#include "wlab/mobius.hpp"
#include "wlab/surface.hpp"
#include "wlab/trig.hpp"

namespace wlab {

// ---------------------------------------------------------------------------
// First variation
// ---------------------------------------------------------------------------

// Nodal density of the Willmore gradient along the unit normal:
//   -Delta H - |A|^2 H - H Ric(n, n) + (1/2) H^3,
// with the Laplace-Beltrami operator of the induced metric applied
// spectrally and the ambient Ricci tensor evaluated at each node.
ScalarField first_variation_density(const FormsField& forms,
                                    const MetricModel& model);

// ---------------------------------------------------------------------------
// Jacobi operator about a family member (flat ambient)
// ---------------------------------------------------------------------------

// Chart coefficient fields of the Jacobi operator
//   L phi = L0^2 phi + (1/2) H^2 L0 phi + 2 H <Atl, Hess phi>
//           + 2 Atl(grad phi, grad H) + zo * phi,
//   L0 psi = -Delta psi - |A|^2 psi,
// where Atl is the traceless second fundamental form with raised indices and
//   zo = |grad H|^2 + H Delta H + 2 <Hess H, Atl> + 2 H^2 |Atl|^2.
// The associated quadratic form is
//   Q(phi, phi) = int (L0 phi)^2 + (1/2) H^2 |grad phi|^2
//                 - 2 H Atl(grad phi, grad phi) + V phi^2 dsigma,
//   V = zo - (1/2) H^2 |A|^2.
struct FlatOperatorFields {
  Eigen::MatrixXd inv11, inv12, inv22;   // induced inverse metric
  Eigen::MatrixXd div1, div2;            // Laplacian first-order coefficients
  Eigen::MatrixXd norm2;                 // |A|^2
  Eigen::MatrixXd mean;                  // H
  Eigen::MatrixXd tl11, tl12, tl22;      // traceless second form, indices up
  Eigen::MatrixXd dmean1, dmean2;        // chart gradient of H
  Eigen::MatrixXd zero_order;            // zo above
  Eigen::MatrixXd form_potential;        // V above
  Eigen::MatrixXd dsigma;
  // Surface Christoffel symbols of the induced metric (index: upper, lower,
  // lower), needed for covariant Hessians of scalar fields.
  std::array<std::array<Eigen::MatrixXd, 2>, 2> gamma1, gamma2;
};

FlatOperatorFields flat_operator_fields(const FormsField& forms);

// Applies the Jacobi operator to a nodal field by spectral differentiation.
ScalarField apply_flat_jacobi(const FlatOperatorFields& fields,
                              const ScalarField& field);

// Galerkin matrix of the Jacobi operator in a trigonometric basis that is
// orthonormal for the area-measure inner product of the sampled surface.
struct OperatorMatrix {
  int truncation = 0;               // square frequency cutoff
  int grid_resolution = 0;          // assembly grid (n x n)
  Eigen::MatrixXd entries;          // symmetric matrix in the orthonormal basis
  std::vector<ModeLabel> modes;     // raw real trigonometric modes
  Eigen::MatrixXd basis_transform;  // column a: basis function a in raw modes
  // Spectrum cache, filled on first demand.
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  bool spectrum_ready = false;
};

struct AssemblyOptions {
  int grid_resolution = 256;
};

OperatorMatrix assemble_flat_operator(const MobiusParam& param, int truncation,
                                      const AssemblyOptions& options = {});

void ensure_spectrum(OperatorMatrix& op);

// Expansion coefficients of a nodal field in the operator's orthonormal
// basis (projection with the surface area measure carried by forms).
Eigen::VectorXd project_field(const OperatorMatrix& op, const FormsField& forms,
                              const ScalarField& field);

// Relative mode-space residual ||M c|| / ||c||.
double operator_residual(const OperatorMatrix& op, const Eigen::VectorXd& coeffs);

// Evaluates the basis expansion with the given coefficients on a uniform
// chart grid (inverse of project_field up to truncation).
ScalarField synthesize_field(const OperatorMatrix& op,
                             const Eigen::VectorXd& coeffs, int n_phi,
                             int n_theta);

// ---------------------------------------------------------------------------
// Near-kernel counting
// ---------------------------------------------------------------------------

struct SpectrumReport {
  std::vector<double> eigenvalues;  // ascending
  int near_kernel_count = 0;        // #{ |lambda| <= threshold }
  double threshold = 0.0;
  double gap = 0.0;                 // smallest |lambda| above the threshold
  bool threshold_valid = false;     // gap strictly above the threshold
};

SpectrumReport near_kernel(OperatorMatrix& op, double threshold);

// Threshold heuristic: geometric midpoint of the largest relative gap among
// the smallest eigenvalue magnitudes. Reliable only when the kernel cluster
// dominates every other gap; see certify_kernel for a robust alternative.
double adaptive_threshold(OperatorMatrix& op);

// Certified kernel count. Projects the ten ambient conformal generators
// (dilation, translations, rotations, special conformal fields) restricted
// to normal components onto the Galerkin basis and takes the numerical rank
// r of the projections; conformal invariance predicts an r-dimensional
// kernel. Eigenvectors are then matched to the projected span by subspace
// overlap (robust: overlaps live in the surface inner product, where the
// fields' truncation tails stay small instead of being amplified by the
// fourth-order stiffness). The certificate reports the eigenvalue split
//   lambda_low  = max |lambda| over the r matched eigenvectors,
//   lambda_high = min |lambda| over the rest,
// whose geometric mean is a safe near_kernel threshold, and fails loudly if
// the matched cluster does not have exactly r members.
struct KernelCertificate {
  int rank = 0;
  double singular_ratio = 0.0;  // sigma_{r+1} / sigma_r of the projections
  double min_overlap = 0.0;     // worst subspace overlap among matched pairs
  double lambda_low = 0.0;
  double lambda_high = 0.0;
  double suggested_threshold = 0.0;
};

KernelCertificate certify_kernel(OperatorMatrix& op, const MobiusParam& param);

// ---------------------------------------------------------------------------
// First-order energy slope under a curvature perturbation
// ---------------------------------------------------------------------------

// d/dt at t=0 of the Willmore energy of the rotated reference torus under
// g = delta + t h, with h the normal-form perturbation of the curvature
// data. Evaluated by quadrature of the five-term boundary-integral formula.
double wdot_quadrature(const CurvatureData& data, const Mat3& rotation);

// The same slope from the closed-form evaluation, reported as the three
// partial sums produced by the integration-by-parts steps plus their total
//   total = (1/2) (step[0] + step[1] + step[2])
//         = -4 sqrt(2) pi^2 (Sc - Ric(a, a)),
// where a is the rotated symmetry axis.
struct SlopeBreakdown {
  std::array<double, 3> steps{};
  double total = 0.0;
};

SlopeBreakdown wdot_closed_form(const CurvatureData& data, const Mat3& rotation);

} // namespace wlab

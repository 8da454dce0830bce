// Acceptance suite: ten numbered criteria, each printing clause-level detail
// and one final [PASS]/[FAIL] verdict line.  Run with no arguments for the
// full suite or with a single argument in 1..10 for one criterion.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "wlab/constants.hpp"
#include "wlab/corrector.hpp"
#include "wlab/metrics.hpp"
#include "wlab/mobius.hpp"
#include "wlab/reduction.hpp"
#include "wlab/surface.hpp"
#include "wlab/variational.hpp"

using namespace wlab;

namespace {

std::string num(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

double rel_gap(double value, double target) {
  return std::abs(value - target) / std::abs(target);
}

// Least-squares slope of log|y| against log x.
double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(std::abs(y[i]));
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(std::abs(y[i])) - my);
  }
  return sxy / sxx;
}

class Criterion {
 public:
  Criterion(int index, std::string title)
      : index_(index),
        title_(std::move(title)),
        start_(std::chrono::steady_clock::now()) {
    std::printf("criterion %d — %s\n", index_, title_.c_str());
  }

  void check(bool passed, const std::string& text) {
    ok_ = ok_ && passed;
    std::printf("  [%s] %s\n", passed ? " ok " : "FAIL", text.c_str());
  }

  void note(const std::string& text) {
    std::printf("  note: %s\n", text.c_str());
  }

  bool finish() {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start_)
            .count();
    std::printf("[%s] criterion %d — %s (%.1f s)\n\n", ok_ ? "PASS" : "FAIL",
                index_, title_.c_str(), seconds);
    std::fflush(stdout);
    return ok_;
  }

 private:
  int index_;
  std::string title_;
  bool ok_ = true;
  std::chrono::steady_clock::time_point start_;
};

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

Mat3 random_symmetric(std::mt19937_64& rng) {
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = uniform(rng, -1.0, 1.0);
  return 0.5 * (m + m.transpose());
}

Eigen::Quaterniond random_rotation(std::mt19937_64& rng) {
  while (true) {
    Eigen::Vector4d q(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0),
                      uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    if (q.norm() < 0.1) continue;
    q.normalize();
    return Eigen::Quaterniond(q(0), q(1), q(2), q(3));
  }
}

// --------------------------------------------------------------------------
// 1. Flat reference invariants.
// --------------------------------------------------------------------------
bool criterion_1() {
  Criterion c(1, "flat reference invariants");
  const SurfaceGrid grid = build_clifford_torus(64);
  const FormsField forms = fundamental_forms(grid);

  const double area = surface_area(forms);
  const double energy = willmore_energy(forms);
  c.check(rel_gap(area, reference_area) < 1e-10,
          "area 4*sqrt2*pi^2: rel " + num(rel_gap(area, reference_area)));
  c.check(rel_gap(energy, reference_energy) < 1e-10,
          "bending energy 8*pi^2: rel " +
              num(rel_gap(energy, reference_energy)));

  // Profile integrals of 1/rho: integrating f(phi)/rho^2 against the area
  // measure rho dphi dtheta leaves the phi-line integral times 2 pi.
  ScalarField flat_density(grid.n_phi(), grid.n_theta());
  ScalarField cos_density = flat_density, cos2_density = flat_density;
  for (int i = 0; i < grid.n_phi(); ++i) {
    const double rho = sqrt2 + std::cos(grid.phi(i));
    for (int j = 0; j < grid.n_theta(); ++j) {
      flat_density(i, j) = 1.0 / (rho * rho);
      cos_density(i, j) = std::cos(grid.phi(i)) / (rho * rho);
      cos2_density(i, j) = std::pow(std::cos(grid.phi(i)), 2) / (rho * rho);
    }
  }
  const double two_pi = 2.0 * pi;
  const struct {
    const ScalarField* density;
    double line_value;
    const char* label;
  } rows[] = {
      {&flat_density, two_pi, "profile integral of 1/rho"},
      {&cos_density, two_pi - 2.0 * sqrt2 * pi, "profile integral of cos/rho"},
      {&cos2_density, 4.0 * pi - 2.0 * sqrt2 * pi,
       "profile integral of cos^2/rho"},
  };
  for (const auto& row : rows) {
    const double value = integrate(*row.density, forms);
    const double target = two_pi * row.line_value;
    c.check(std::abs(value - target) < 1e-10,
            std::string(row.label) + ": |" + num(value) + " - " + num(target) +
                "| = " + num(std::abs(value - target)));
  }
  return c.finish();
}

// --------------------------------------------------------------------------
// 2. Conformal invariance of the bending energy.
// --------------------------------------------------------------------------
bool criterion_2() {
  Criterion c(2, "conformal invariance of the bending energy");
  std::mt19937_64 rng(20260816ULL);

  int accepted = 0, tried = 0;
  double worst = 0.0;
  int worst_resolution = 0;
  while (accepted < 20 && tried < 4000) {
    ++tried;
    const Vec3 center(uniform(rng, -4.0, 4.0), uniform(rng, -4.0, 4.0),
                      uniform(rng, -4.0, 4.0));
    const InversionSpec spec{center, uniform(rng, 0.5, 2.0)};
    // Admissible = the distortion-scaled grid stays in the modest regime
    // (no cap, at most twice the base resolution).
    const ResolutionChoice choice = distortion_resolution(spec, 128);
    if (choice.capped || choice.resolution > 256) continue;
    const SurfaceGrid image = invert(spec, build_clifford_torus(choice.resolution));
    const double energy = willmore_energy(fundamental_forms(image));
    const double rel = rel_gap(energy, reference_energy);
    if (rel > worst) {
      worst = rel;
      worst_resolution = choice.resolution;
    }
    ++accepted;
  }
  c.check(accepted == 20, "20 admissible inversions drawn (" +
                              std::to_string(tried) + " candidates)");
  c.check(worst < 1e-6, "inverted-torus energy matches 8*pi^2: worst rel " +
                            num(worst) + " (at resolution " +
                            std::to_string(worst_resolution) + ")");

  for (const double modulus : {0.3, 0.6, 0.9}) {
    const double energy = measure_family(modulus).willmore;
    const double rel = rel_gap(energy, reference_energy);
    c.check(rel < 1e-6, "family member |omega| = " + num(modulus) +
                            ": energy rel " + num(rel));
  }
  return c.finish();
}

// --------------------------------------------------------------------------
// 3. Quadrature and closed-form slope agreement.
// --------------------------------------------------------------------------
bool criterion_3() {
  Criterion c(3, "quadrature and closed-form slope agreement");
  std::mt19937_64 rng(33);

  double worst_total = 0.0;
  std::array<double, 3> worst_steps{};
  for (int draw = 0; draw < 25; ++draw) {
    const Mat3 ricci = random_symmetric(rng);
    const CurvatureData data = synthetic_curvature(ricci);
    const Mat3 rotation = random_rotation(rng).toRotationMatrix();

    const SlopeBreakdown closed = wdot_closed_form(data, rotation);
    const double quad = wdot_quadrature(data, rotation);
    worst_total = std::max(worst_total, std::abs(quad - closed.total));

    // Independent transcription of the three partial sums produced by the
    // integration-by-parts cascade, in terms of Sc and q = Ric(a, a) with a
    // the rotated symmetry axis.
    const double sc = data.scalar;
    const Vec3 axis = rotation * Vec3::UnitZ();
    const double q = axis.dot(data.ricci * axis);
    const double pi2 = pi * pi;
    const std::array<double, 3> expected = {
        -4.0 * sqrt2 * pi2 * sc + (4.0 * sqrt2 / 3.0) * pi2 * q,
        (8.0 / 3.0) * pi2 * q * (2.0 - sqrt2),
        -4.0 * sqrt2 * pi2 * sc + (pi2 / 3.0) * (28.0 * sqrt2 - 16.0) * q,
    };
    for (int k = 0; k < 3; ++k) {
      worst_steps[k] =
          std::max(worst_steps[k], std::abs(closed.steps[k] - expected[k]));
    }
  }
  c.check(worst_total <= 1e-8,
          "quadrature vs closed form over 25 draws: worst |gap| " +
              num(worst_total));
  for (int k = 0; k < 3; ++k) {
    c.check(worst_steps[k] <= 1e-8, "step " + std::to_string(k + 1) +
                                        " matches its closed form: worst " +
                                        num(worst_steps[k]));
  }
  return c.finish();
}

// --------------------------------------------------------------------------
// 4. Symmetric placement energy expansion.
// --------------------------------------------------------------------------
bool criterion_4() {
  Criterion c(4, "symmetric placement energy expansion");
  std::vector<Mat3> sets;
  sets.push_back(Vec3(1.0, 2.0, 3.0).asDiagonal());
  sets.push_back(Vec3(0.2, 0.3, 0.5).asDiagonal());
  sets.push_back(Mat3::Identity() / 3.0);
  sets.push_back(Vec3(1.0, 1.0, 2.0).asDiagonal());
  Mat3 coupled;
  coupled << 1.0, 0.3, 0.0, 0.3, 2.0, 0.2, 0.0, 0.2, 3.0;
  sets.push_back(coupled);

  const std::vector<Vec3> axes = {Vec3::UnitX(), Vec3::UnitZ(),
                                  Vec3(0.0, 1.0, 1.0).normalized()};
  const std::vector<double> eps_list = {0.025, 0.05, 0.075, 0.1};

  double worst = 0.0;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const MetricModel model = normal_expansion(synthetic_curvature(sets[s]));
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const ExpansionFit fit =
          symmetric_expansion_fit(model, Vec3::Zero(), axes[a], eps_list);
      worst = std::max(worst, fit.rel_error);
      c.check(fit.rel_error < 0.01,
              "set " + std::to_string(s + 1) + ", axis " +
                  std::to_string(a + 1) + ": c_lead " + num(fit.c_lead) +
                  " vs -4*sqrt2*pi^2*(Sc - Ric(a,a)) = " + num(fit.target) +
                  " (rel " + num(fit.rel_error) + ")");
    }
  }
  c.check(worst < 0.01, "all 15 fits within 1%: worst rel " + num(worst));
  return c.finish();
}

// --------------------------------------------------------------------------
// 5. Round-sphere control expansion.
// --------------------------------------------------------------------------
bool criterion_5() {
  Criterion c(5, "round-sphere control expansion");
  const std::vector<double> radii = {0.05, 0.1, 0.15, 0.2};
  for (const double scalar : {1.0, -2.0}) {
    const MetricModel model = constant_curvature_metric(scalar);
    const ExpansionFit fit =
        sphere_expansion_fit(model, Vec3::Zero(), radii);
    c.check(fit.rel_error < 0.02,
            "Sc = " + num(scalar) + ": r^2 coefficient " + num(fit.c_lead) +
                " vs -(8*pi/3)*Sc = " + num(fit.target) + " (rel " +
                num(fit.rel_error) + ")");
    c.check(rel_gap(fit.c0, 16.0 * pi) < 1e-6,
            "Sc = " + num(scalar) + ": fitted constant recovers 16*pi (rel " +
                num(rel_gap(fit.c0, 16.0 * pi)) + ")");
  }
  return c.finish();
}

// --------------------------------------------------------------------------
// 6. Degenerate-family energy expansion.
// --------------------------------------------------------------------------
bool criterion_6() {
  Criterion c(6, "degenerate-family energy expansion");
  const std::vector<double> moduli = {0.9, 0.95, 0.99};
  const double epsilon = 0.05;
  const double scale = (8.0 * sqrt2 / 3.0) * pi * pi;

  // Unit-scalar synthetic model: the scaled coefficient at |omega| = 0.99
  // must land within 10% of the limit -(8*sqrt2/3)*pi^2.
  const MetricModel unit_model =
      normal_expansion(synthetic_curvature(Mat3::Identity() / 3.0));
  const ExpansionFit unit_fit = degenerate_expansion_fit(
      unit_model, Vec3::Zero(), Vec3::UnitZ(), moduli, epsilon);
  const double unit_rel =
      std::abs(unit_fit.coefficients.back() - unit_fit.target) /
      std::abs(unit_fit.target);
  c.check(unit_rel < 0.10,
          "Sc = 1 at |omega| = 0.99: coefficient " +
              num(unit_fit.coefficients.back()) + " vs " +
              num(unit_fit.target) + " (rel " + num(unit_rel) + ")");

  // Scalar-flat model (Schwarzschild slice off the photon ring): the limit
  // vanishes, so the coefficient must be small against the Sc = 1 scale.
  const MetricModel flat_model = schwarzschild_metric(1.0);
  const ExpansionFit flat_fit = degenerate_expansion_fit(
      flat_model, Vec3(0.7, 0.0, 0.0), Vec3::UnitZ(), moduli, epsilon);
  const double flat_size = std::abs(flat_fit.coefficients.back());
  c.check(flat_size <= 0.1 * scale,
          "Sc = 0 at |omega| = 0.99: |coefficient| " + num(flat_size) +
              " <= 10% of the unit-scalar scale " + num(scale));

  // Deviation control along the modulus sequence: uniformly bounded by
  // 1.0 * epsilon for both models.
  double worst_dev = 0.0;
  for (const double dev : unit_fit.deviations) worst_dev = std::max(worst_dev, dev);
  for (const double dev : flat_fit.deviations) worst_dev = std::max(worst_dev, dev);
  c.check(worst_dev <= epsilon,
          "deviations uniformly bounded by 1.0*eps = " + num(epsilon) +
              ": worst " + num(worst_dev));

  std::string unit_sequence, flat_sequence;
  for (const double dev : unit_fit.deviations)
    unit_sequence += (unit_sequence.empty() ? "" : ", ") + num(dev);
  for (const double dev : flat_fit.deviations)
    flat_sequence += (flat_sequence.empty() ? "" : ", ") + num(dev);
  c.note("deviation sequences — Sc = 1: {" + unit_sequence + "}, Sc = 0: {" +
         flat_sequence + "}");
  c.note(
      "the deviation is asserted as uniformly bounded (limsup-type control), "
      "not pointwise decreasing: the finite-eps coefficient carries an eps^2 "
      "remainder whose size grows with the modulus, so strict monotone decay "
      "along {0.9, 0.95, 0.99} is not a property of the quantity itself");
  return c.finish();
}

// --------------------------------------------------------------------------
// 7. Inversion offset asymptotics.
// --------------------------------------------------------------------------
bool criterion_7() {
  Criterion c(7, "inversion offset asymptotics");
  const std::vector<double> etas = {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  std::vector<double> offsets;
  bool increasing = true;
  for (const double eta : etas) {
    offsets.push_back(area_preserving_offset(eta));
    if (offsets.size() > 1 && offsets.back() <= offsets[offsets.size() - 2])
      increasing = false;
  }
  c.check(increasing, "area-preserving offset strictly increasing over eta in "
                      "{0.5, 1, 2, 4, 8, 16, 32}");

  double defect_max = 0.0;
  std::string defects;
  for (const double eta : {8.0, 16.0, 32.0}) {
    const double defect =
        std::abs(area_preserving_offset(eta) / eta - 1.0) * eta * eta;
    defect_max = std::max(defect_max, defect);
    defects += (defects.empty() ? "" : ", ") + num(defect);
  }
  c.check(defect_max < 4.0,
          "scaled defect |xi/eta - 1|*eta^2 bounded over {8, 16, 32}: {" +
              defects + "}");

  const double eta = 0.05;
  const double ratio = eta * eta / small_radius_offset(eta);
  const double target = 2.0 * degenerate_radius;
  c.check(rel_gap(ratio, target) < 0.03,
          "small-radius limit eta^2/xi_tilde = " + num(ratio) +
              " vs 2*(2*pi^2)^(1/4) = " + num(target) + " (rel " +
              num(rel_gap(ratio, target)) + ")");
  return c.finish();
}

// --------------------------------------------------------------------------
// 8. Kernel spectrum characterization.
// --------------------------------------------------------------------------
bool criterion_8() {
  Criterion c(8, "kernel spectrum characterization");
  const int truncation = 20;

  const struct {
    const char* label;
    Eigen::Vector2d omega;
    double pair_tolerance;  // quadrature + finite-difference budget
  } members[] = {
      {"omega = 0", Eigen::Vector2d::Zero(), 1e-6},
      {"omega = 0.4*e_x", Eigen::Vector2d(0.4, 0.0), 1e-3},
  };

  for (const auto& member : members) {
    MobiusParam param;
    param.omega = member.omega;
    OperatorMatrix op = assemble_flat_operator(param, truncation);
    const KernelCertificate cert = certify_kernel(op, param);
    const SpectrumReport report = near_kernel(op, cert.suggested_threshold);

    c.check(cert.rank == 8 && report.near_kernel_count == 8,
            std::string(member.label) + ": certified kernel rank " +
                std::to_string(cert.rank) + ", eigenvalues below threshold " +
                std::to_string(report.near_kernel_count));
    const double ratio = cert.lambda_high / cert.lambda_low;
    c.check(report.threshold_valid && ratio >= 10.0,
            std::string(member.label) +
                ": spectral gap ratio lambda_high/lambda_low = " + num(ratio));

    // Area pairing of the analytic kernel fields: the dilation-type field
    // pairs with the mean curvature at exactly twice the (preserved) area,
    // and the remaining seven are area-preserving.  This is the full
    // characterization: an 8-dimensional kernel whose area-preserving
    // subspace has dimension 7 at every family member.
    const SurfaceGrid grid = family_torus(param, 256);
    const FormsField forms = fundamental_forms(grid);
    const JacobiBasis basis = jacobi_fields(param, grid);
    c.check(basis.fields.size() == 8,
            std::string(member.label) + ": 8 analytic kernel fields");

    const double dilation_pairing =
        integrate(ScalarField(basis.fields[0].cwiseProduct(forms.mean)),
                  forms);
    const double pair_target = 2.0 * reference_area;
    c.check(rel_gap(dilation_pairing, pair_target) < member.pair_tolerance,
            std::string(member.label) + ": dilation field pairs with H at " +
                num(dilation_pairing) + " vs 8*sqrt2*pi^2 = " +
                num(pair_target) + " (rel " +
                num(rel_gap(dilation_pairing, pair_target)) + ")");

    double worst_pairing = 0.0;
    for (std::size_t k = 1; k < basis.fields.size(); ++k) {
      const double pairing = std::abs(integrate(
          ScalarField(basis.fields[k].cwiseProduct(forms.mean)), forms));
      worst_pairing = std::max(worst_pairing, pairing / pair_target);
    }
    c.check(worst_pairing < member.pair_tolerance,
            std::string(member.label) +
                ": remaining 7 fields area-preserving: worst relative "
                "pairing " +
                num(worst_pairing));

    // Operator residuals of the analytic fields.  At the reference member
    // the fields are low-order trigonometric polynomials captured exactly by
    // the basis, so the residuals sit at solver precision; at the offset
    // member the Galerkin truncation limits them to the kernel-cluster
    // eigenvalue scale, reported here without a hard gate.
    double worst_residual = 0.0;
    for (const ScalarField& field : basis.fields) {
      const Eigen::VectorXd coeffs = project_field(op, forms, field);
      worst_residual = std::max(worst_residual, operator_residual(op, coeffs));
    }
    if (param.modulus() == 0.0) {
      c.check(worst_residual < 1e-6,
              std::string(member.label) +
                  ": analytic kernel fields have operator residual < 1e-6 "
                  "(worst " +
                  num(worst_residual) + ")");
    } else {
      c.note(std::string(member.label) +
             ": analytic-field residuals limited by basis truncation: worst " +
             num(worst_residual) + " (kernel cluster tops at " +
             num(cert.lambda_low) + ")");
    }
  }
  c.note(
      "the kernel is 8-dimensional at every member; its area-preserving "
      "subspace is 7-dimensional (the dilation-type direction pairs with H), "
      "which is the count seen by the area-constrained problem");
  return c.finish();
}

// --------------------------------------------------------------------------
// 9. Corrector scaling and constraints.
// --------------------------------------------------------------------------
bool criterion_9() {
  Criterion c(9, "corrector scaling and constraints");
  const MetricModel model =
      normal_expansion(synthetic_curvature(Mat3::Identity() / 3.0));
  CorrectorOptions copts;
  copts.truncation = 8;
  copts.grid_resolution = 96;
  const double tolerance = 5e-9;

  const std::vector<double> eps_list = {0.025, 0.05, 0.1};
  std::vector<double> sups, gaps;
  double worst_area = 0.0, worst_kernel = 0.0;
  for (const double eps : eps_list) {
    const CorrectorResult result = corrector_solve(
        model, eps, Vec3::Zero(), MobiusParam{}, tolerance, copts);
    sups.push_back(result.phi.cwiseAbs().maxCoeff());
    worst_area = std::max(worst_area, result.area_error);
    for (int k = 1; k < 8; ++k)
      worst_kernel = std::max(worst_kernel, std::abs(result.beta[k]));

    EnergyOptions options;
    options.corrector = copts;
    options.corrector_tolerance = tolerance;
    const double plain =
        reduced_energy(model, eps, Vec3::Zero(), MobiusParam{}, false, options);
    const double corrected =
        reduced_energy(model, eps, Vec3::Zero(), MobiusParam{}, true, options);
    gaps.push_back(plain - corrected);
  }

  const double sup_exponent = log_slope(eps_list, sups);
  c.check(std::abs(sup_exponent - 2.0) <= 0.2,
          "sup |phi| scaling exponent " + num(sup_exponent) +
              " within 2 +/- 0.2 (sups " + num(sups[0]) + ", " + num(sups[1]) +
              ", " + num(sups[2]) + ")");

  bool gaps_positive = true;
  for (const double gap : gaps) gaps_positive = gaps_positive && gap > 0.0;
  c.check(gaps_positive, "corrected energy below the uncorrected energy at "
                         "every eps");
  const double gap_exponent = log_slope(eps_list, gaps);
  c.check(std::abs(gap_exponent - 4.0) <= 0.5,
          "energy-gap scaling exponent " + num(gap_exponent) +
              " within 4 +/- 0.5 (gaps " + num(gaps[0]) + ", " + num(gaps[1]) +
              ", " + num(gaps[2]) + ")");

  c.check(worst_area <= 1e-8,
          "area constraint at the solution: worst defect " + num(worst_area));
  c.check(worst_kernel <= 1e-8,
          "kernel orthogonality at the solution: worst multiplier " +
              num(worst_kernel));
  return c.finish();
}

// --------------------------------------------------------------------------
// 10. Energy-landscape existence experiments.
// --------------------------------------------------------------------------
bool criterion_10() {
  Criterion c(10, "energy-landscape existence experiments");
  const double epsilon = 0.1;
  const std::vector<Vec3> lattice =
      box_lattice(Vec3::Constant(-1.5), Vec3::Constant(1.5), 13);
  const std::vector<Vec3> directions = direction_samples(200);

  // Model A: first curvature condition only; expect an interior minimum.
  {
    const CurvatureField field = minimum_condition_field();
    const ConditionReport report =
        condition_check(field, lattice, directions);
    c.check(report.assump1_holds,
            "model A satisfies the first curvature condition: " +
                num(report.lhs1) + " > " + num(report.rhs1));
    const ExtremizeResult result =
        extremize(field, epsilon, ExtremeMode::minimum, BoxDomain{});
    c.check(result.interior && result.margin > 0.0,
            "model A interior minimum at P = (" + num(result.extremum.point.x()) +
                ", " + num(result.extremum.point.y()) + ", " +
                num(result.extremum.point.z()) + "), energy " +
                num(result.extremum.energy) + ", boundary margin " +
                num(result.margin));
  }

  // Model B: both curvature conditions; expect interior minimum and maximum.
  {
    const CurvatureField field = two_sided_condition_field();
    const ConditionReport report =
        condition_check(field, lattice, directions);
    c.check(report.assump1_holds && report.assump2_holds,
            "model B satisfies both curvature conditions: " +
                num(report.lhs1) + " > " + num(report.rhs1) + " and " +
                num(report.lhs2) + " < " + num(report.rhs2));
    const ExtremizeResult minimum =
        extremize(field, epsilon, ExtremeMode::minimum, BoxDomain{});
    c.check(minimum.interior && minimum.margin > 0.0,
            "model B interior minimum: energy " +
                num(minimum.extremum.energy) + ", margin " +
                num(minimum.margin));
    const ExtremizeResult maximum =
        extremize(field, epsilon, ExtremeMode::maximum, BoxDomain{});
    c.check(maximum.interior && maximum.margin > 0.0,
            "model B interior maximum: energy " +
                num(maximum.extremum.energy) + ", margin " +
                num(maximum.margin));
  }

  // Schwarzschild slice at unit mass: interior extremum on the annulus with
  // the expansion coefficient flipping sign between radial and tangential
  // axes at the photon-ring radius m/2.
  {
    const MetricModel model = schwarzschild_metric(1.0);
    const ExtremizeResult result =
        extremize(model, epsilon, ExtremeMode::minimum, AnnulusDomain{0.3});
    const double radius = result.extremum.point.norm();
    const Vec3 radial = result.extremum.point / radius;
    const double alignment = std::abs(result.extremum.axis.dot(radial));
    c.check(result.interior && result.margin > 0.0,
            "Schwarzschild interior extremum: energy " +
                num(result.extremum.energy) + ", margin " +
                num(result.margin));
    c.check(std::abs(radius - 0.5) < 0.05,
            "extremum sits at the distinguished radius m/2: |P| = " +
                num(radius));
    c.check(alignment > 0.99,
            "extremal torus axis is radial: |axis . P/|P|| = " +
                num(alignment));

    const std::vector<double> eps_list = {0.025, 0.05, 0.075, 0.1};
    const Vec3 ring_point(0.5, 0.0, 0.0);
    const ExpansionFit radial_fit =
        symmetric_expansion_fit(model, ring_point, Vec3::UnitX(), eps_list);
    const ExpansionFit tangential_fit =
        symmetric_expansion_fit(model, ring_point, Vec3::UnitZ(), eps_list);
    c.check(radial_fit.c_lead < 0.0 && tangential_fit.c_lead > 0.0,
            "eps^2 coefficient flips sign between axes: radial " +
                num(radial_fit.c_lead) + ", tangential " +
                num(tangential_fit.c_lead));
    c.check(radial_fit.rel_error < 0.01 && tangential_fit.rel_error < 0.01,
            "both fits match their closed-form targets within 1% (rel " +
                num(radial_fit.rel_error) + ", " +
                num(tangential_fit.rel_error) + ")");
  }
  return c.finish();
}

}  // namespace

int main(int argc, char** argv) {
  using CriterionFn = bool (*)();
  const CriterionFn criteria[] = {
      criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
      criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
  };

  int first = 1, last = 10;
  if (argc > 1) {
    const int requested = std::atoi(argv[1]);
    if (requested < 1 || requested > 10) {
      std::fprintf(stderr, "usage: %s [criterion 1..10]\n", argv[0]);
      return 2;
    }
    first = last = requested;
  }

  int failed = 0;
  for (int index = first; index <= last; ++index) {
    if (!criteria[index - 1]()) ++failed;
  }
  if (first != last) {
    std::printf("acceptance: %d/%d criteria passed\n", last - first + 1 - failed,
                last - first + 1);
  }
  return failed == 0 ? 0 : 1;
}

#include <cmath>

#include "doctest.h"
#include "wlab/constants.hpp"
#include "wlab/corrector.hpp"
#include "wlab/metrics.hpp"
#include "wlab/mobius.hpp"
#include "wlab/reduction.hpp"

using namespace wlab;

namespace {

const CorrectorOptions kOptions{8, 96, 40, 12};  // truncation 8, grid 96

MetricModel iso_model() {
  return normal_expansion(synthetic_curvature(Mat3::Identity() / 3.0));
}

double beta_max(const CorrectorResult& result) {
  double worst = 0.0;
  for (int k = 1; k < 8; ++k)
    worst = std::max(worst, std::abs(result.beta[k]));
  return worst;
}

}  // namespace

TEST_SUITE("corrector") {

TEST_CASE("unit-scalar model at the reference member") {
  const CorrectorResult result =
      corrector_solve(iso_model(), 0.1, Vec3::Zero(), {}, 5e-9, kOptions);
  CHECK(result.residual_history.size() <= 7u);
  CHECK(result.residual_history.back() <= 5e-9);
  for (std::size_t k = 1; k < result.residual_history.size(); ++k)
    CHECK(result.residual_history[k] < result.residual_history[k - 1]);
  const double sup = result.phi.cwiseAbs().maxCoeff();
  CHECK(std::abs(sup / 2.0786e-3 - 1.0) < 1e-2);
  CHECK(std::abs(result.beta[0] - (-3.34e-3)) < 1e-4);
  CHECK(beta_max(result) < 1e-10);
  CHECK(result.area_error < 1e-8);
}

TEST_CASE("flat space needs no correction") {
  const CorrectorResult result =
      corrector_solve(euclidean_metric(), 0.1, Vec3::Zero(), {}, 5e-9, kOptions);
  CHECK(result.phi.cwiseAbs().maxCoeff() < 1e-7);
  CHECK(result.area_error < 1e-8);
}

TEST_CASE("solution is equivariant under placement rotation") {
  // A 90-degree placement rotation maps a coordinate axis onto the symmetry
  // axis; the corrected graph of the isotropic model must match the identity
  // placement exactly.
  MobiusParam rotated;
  rotated.rotation = axis_rotation(Vec3::UnitX());
  const CorrectorResult identity =
      corrector_solve(iso_model(), 0.05, Vec3::Zero(), {}, 5e-9, kOptions);
  const CorrectorResult moved =
      corrector_solve(iso_model(), 0.05, Vec3::Zero(), rotated, 5e-9, kOptions);
  CHECK(std::abs(identity.phi.cwiseAbs().maxCoeff() / 5.1792e-4 - 1.0) < 1e-2);
  CHECK((identity.phi - moved.phi).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("anisotropic model under a rotated placement") {
  MobiusParam rotated;
  rotated.rotation = axis_rotation(Vec3::UnitX());
  const MetricModel model =
      normal_expansion(synthetic_curvature(Vec3(0.2, 0.3, 0.5).asDiagonal()));
  const CorrectorResult result =
      corrector_solve(model, 0.1, Vec3::Zero(), rotated, 5e-9, kOptions);
  CHECK(result.residual_history.back() <= 5e-9);
  CHECK(std::abs(result.phi.cwiseAbs().maxCoeff() / 3.378e-3 - 1.0) < 1e-2);
  CHECK(std::abs(result.beta[0] - (-4.01e-3)) < 1e-4);
  CHECK(beta_max(result) < 1e-8);
}

TEST_CASE("correction size scales quadratically in the surface scale") {
  const MetricModel model = iso_model();
  double sups[3];
  const double eps[3] = {0.025, 0.05, 0.1};
  const double frozen[3] = {1.2937e-4, 5.1792e-4, 2.0786e-3};
  for (int k = 0; k < 3; ++k) {
    const CorrectorResult result =
        corrector_solve(model, eps[k], Vec3::Zero(), {}, 5e-9, kOptions);
    sups[k] = result.phi.cwiseAbs().maxCoeff();
    CHECK(std::abs(sups[k] / frozen[k] - 1.0) < 1e-2);
  }
  const double exp_low = std::log2(sups[1] / sups[0]);
  const double exp_high = std::log2(sups[2] / sups[1]);
  CHECK(std::abs(exp_low - 2.0) < 0.2);
  CHECK(std::abs(exp_high - 2.0) < 0.2);
}

TEST_CASE("corrected energy drops at fourth order") {
  EnergyOptions options;
  options.corrector = kOptions;
  const MetricModel model = iso_model();
  const double plain =
      reduced_energy(model, 0.05, Vec3::Zero(), {}, false, options);
  const double corrected =
      reduced_energy(model, 0.05, Vec3::Zero(), {}, true, options);
  CHECK(std::abs(plain - 78.8637871432) < 1e-8);
  CHECK(std::abs(corrected - 78.8637405689) < 1e-6);
  const double gap = plain - corrected;
  CHECK(gap > 0.0);
  CHECK(std::abs(gap / 4.6574e-5 - 1.0) < 1e-2);
}

}  // TEST_SUITE

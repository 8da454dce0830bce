#include <cmath>
#include <random>

#include "doctest.h"
#include "wlab/constants.hpp"
#include "wlab/metrics.hpp"

using namespace wlab;

TEST_SUITE("metrics") {

TEST_CASE("euclidean model is exactly flat") {
  const MetricModel flat = euclidean_metric();
  const MetricJet jet = metric_at(flat, Vec3(0.3, -0.2, 0.9));
  CHECK((jet.g - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);
  for (const Mat3& gamma : jet.christoffel)
    CHECK(gamma.cwiseAbs().maxCoeff() == 0.0);
  const CurvatureData data = curvature_at(flat, Vec3(0.1, 0.2, 0.3));
  CHECK(std::abs(data.scalar) < 1e-12);
  CHECK(data.ricci.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("synthetic curvature powers the normal expansion") {
  const Mat3 ric = Vec3(1.0, 2.0, 3.0).asDiagonal();
  const CurvatureData data = synthetic_curvature(ric);
  CHECK(data.scalar == doctest::Approx(6.0).epsilon(1e-14));
  const MetricModel model = normal_expansion(data);
  const CurvatureData recovered = curvature_at(model, Vec3::Zero());
  CHECK((recovered.ricci - ric).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(std::abs(recovered.scalar - 6.0) < 1e-8);
  // The chart origin is a normal-coordinate center: g(0) = id, dg(0) = 0.
  const MetricJet jet = metric_at(model, Vec3::Zero());
  CHECK((jet.g - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-14);
  for (const Mat3& gamma : jet.christoffel)
    CHECK(gamma.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("riemann reconstruction obeys the three-dimensional traces") {
  Mat3 ric;
  ric << 1.0, 0.3, 0.0, 0.3, 2.0, 0.2, 0.0, 0.2, 3.0;
  const CurvatureData data = synthetic_curvature(ric);
  // Contracting the reconstructed tensor must return the Ricci input:
  // Ric_mn = sum_a R(e_a, e_m, e_n, e_a).
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n) {
      double sum = 0.0;
      for (int a = 0; a < 3; ++a) sum += data.riemann(a, m, n, a);
      CHECK(sum == doctest::Approx(ric(m, n)).epsilon(1e-12));
    }
  // Sectional curvatures tie into the sectional identity
  // Sc - Ric(n, n) = Sc/2 + K(plane orthogonal to n).
  for (int axis = 0; axis < 3; ++axis) {
    const int i = (axis + 1) % 3, j = (axis + 2) % 3;
    const double lhs = data.scalar - ric(axis, axis);
    const double rhs = 0.5 * data.scalar + data.sectional(i, j);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("constant-curvature model has the requested scalar everywhere") {
  const MetricModel round = constant_curvature_metric(1.0);
  for (const Vec3& x : {Vec3::Zero().eval(), Vec3(0.3, 0.1, -0.2).eval()}) {
    const CurvatureData data = curvature_at(round, x);
    CHECK(std::abs(data.scalar - 1.0) < 1e-7);
    CHECK((data.ricci - Mat3::Identity() / 3.0).cwiseAbs().maxCoeff() < 1e-7);
  }
  const MetricModel hyper = constant_curvature_metric(-2.0);
  CHECK(std::abs(curvature_at(hyper, Vec3(0.2, 0.0, 0.1)).scalar + 2.0) <
        1e-7);
}

TEST_CASE("normal form perturbation is an exact quadratic") {
  const CurvatureData data =
      synthetic_curvature(Vec3(0.5, -0.2, 0.8).asDiagonal());
  const Vec3 x(0.4, -0.3, 0.2);
  const Mat3 h = normal_form_perturbation(data, x);
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(normal_form_perturbation(data, Vec3::Zero()).cwiseAbs().maxCoeff() ==
        0.0);
  const Mat3 doubled = normal_form_perturbation(data, 2.0 * x);
  CHECK((doubled - 4.0 * h).cwiseAbs().maxCoeff() < 1e-13);

  // Directional derivative against central differences.
  const Vec3 dir(0.3, 0.7, -0.1);
  const double step = 1e-6;
  const Mat3 fd = (normal_form_perturbation(data, x + step * dir) -
                   normal_form_perturbation(data, x - step * dir)) /
                  (2.0 * step);
  const Mat3 analytic = normal_form_perturbation_derivative(data, x, dir);
  CHECK((fd - analytic).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("schwarzschild slice is scalar-flat with the known eigenvalues") {
  const MetricModel model = schwarzschild_metric(1.0);
  const CurvatureData data = curvature_at(model, Vec3(2.0, 0.0, 0.0));
  CHECK(std::abs(data.scalar) < 1e-9);
  // lambda_t(r) = 64 m r^3 / (2r + m)^6; at m = 1, r = 2 this is 0.032768.
  CHECK(schwarzschild_tangential_ricci(1.0, 2.0) ==
        doctest::Approx(0.032768).epsilon(1e-12));
  Eigen::SelfAdjointEigenSolver<Mat3> eig(data.ricci);
  CHECK(eig.eigenvalues()[0] ==
        doctest::Approx(-2.0 * 0.032768).epsilon(1e-7));
  CHECK(eig.eigenvalues()[2] == doctest::Approx(0.032768).epsilon(1e-7));
  // The tangential eigenvalue peaks at r = m/2 with value 1/(8 m^2).
  for (const double mass : {0.5, 1.0, 2.0}) {
    const double peak = schwarzschild_tangential_ricci(mass, 0.5 * mass);
    CHECK(peak == doctest::Approx(1.0 / (8.0 * mass * mass)).epsilon(1e-13));
    CHECK(peak > schwarzschild_tangential_ricci(mass, 0.5 * mass * 1.1));
    CHECK(peak > schwarzschild_tangential_ricci(mass, 0.5 * mass * 0.9));
  }
}

TEST_CASE("exponential map: flat short-circuit and curved consistency") {
  const Vec3 base(2.0, 0.0, 0.0);
  const Vec3 v(0.0, 0.1, 0.0);
  CHECK((exp_map(euclidean_metric(), base, v) - (base + v)).norm() < 1e-12);

  const MetricModel schw = schwarzschild_metric(1.0);
  CHECK((exp_map(schw, base, Vec3::Zero()) - base).norm() < 1e-12);
  // Small-velocity deviation from the straight ray is second order.
  const Vec3 curved = exp_map(schw, base, v);
  CHECK((curved - (base + v)).norm() < 5e-3);
  CHECK((curved - (base + v)).norm() > 0.0);
}

TEST_CASE("recentering and scaling compose to the pulled-back metric") {
  const MetricModel schw = schwarzschild_metric(1.0);
  const Vec3 P(0.7, 0.2, -0.1);
  const double eps = 0.05;
  const MetricModel pulled = with_epsilon(recentered(schw, P), eps);
  const Vec3 y(0.4, -0.8, 0.3);
  const Mat3 direct = metric_at(schw, P + eps * y).g;
  const Mat3 composed = metric_at(pulled, y).g;
  CHECK((direct - composed).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("orthonormal frame inverts the metric") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int draw = 0; draw < 5; ++draw) {
    Mat3 a;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) a(r, c) = u(rng);
    const Mat3 g = Mat3::Identity() + a * a.transpose();
    const Mat3 frame = orthonormal_frame(g);
    CHECK((frame.transpose() * g * frame - Mat3::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

}  // TEST_SUITE

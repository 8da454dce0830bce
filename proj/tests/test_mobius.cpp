#include <cmath>
#include <random>

#include "doctest.h"
#include "wlab/constants.hpp"
#include "wlab/jets.hpp"
#include "wlab/mobius.hpp"
#include "wlab/reduction.hpp"
#include "wlab/surface.hpp"

using namespace wlab;

namespace {

Vec3 torus_point(double phi, double theta) {
  const double rho = sqrt2 + std::cos(phi);
  return Vec3(rho * std::cos(theta), rho * std::sin(theta), std::sin(phi));
}

Vec3 torus_normal(double phi, double theta) {
  return Vec3(std::cos(phi) * std::cos(theta), std::cos(phi) * std::sin(theta),
              std::sin(phi));
}

}  // namespace

TEST_SUITE("mobius") {

TEST_CASE("area-preserving offsets match the frozen table") {
  CHECK(std::abs(area_preserving_offset(1.0) - 2.635170659090) < 1e-9);
  const struct {
    double eta, xi;
  } table[] = {{0.5, 2.47234655},  {2.0, 3.18194073},  {4.0, 4.72563623},
               {8.0, 8.39325649},  {16.0, 16.20141084}, {32.0, 32.10134516}};
  for (const auto& row : table)
    CHECK(std::abs(area_preserving_offset(row.eta) - row.xi) < 1e-6);
  // Strict growth and the large-eta envelope xi/eta -> 1.
  double previous = 0.0;
  for (const double eta : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
    const double xi = area_preserving_offset(eta);
    CHECK(xi > previous);
    previous = xi;
  }
  CHECK(std::abs(area_preserving_offset(32.0) / 32.0 - 1.0) < 0.01);
}

TEST_CASE("handle width asymptotics") {
  CHECK(std::abs(small_radius_offset(0.05) - 5.929070073321e-4) <
        1e-9 * 5.93e-4);
  const double target = 2.0 * degenerate_radius;
  const double ratio = 0.05 * 0.05 / small_radius_offset(0.05);
  CHECK(std::abs(ratio / target - 1.0) < 1e-3);
  // Offset and width are tied by the ring radius.
  CHECK(std::abs(small_radius_offset(2.0) -
                 (area_preserving_offset(2.0) - outer_ring_radius)) < 1e-12);
}

TEST_CASE("family geometry constants") {
  const FamilyGeometry g3 = family_geometry(0.3);
  CHECK(std::abs(g3.inversion_radius - (1.0 - 0.3) / 0.3) < 1e-12);
  CHECK(std::abs(g3.offset - 3.40859046) < 1e-6);
  CHECK(std::abs(g3.shift - 0.57130528) < 1e-6);
  CHECK(std::abs(g3.handle_width - (g3.offset - outer_ring_radius)) < 1e-12);
  const FamilyGeometry g6 = family_geometry(0.6);
  CHECK(std::abs(g6.offset - 2.51609067) < 1e-6);
  CHECK(std::abs(g6.shift - 1.09084446) < 1e-6);
}

TEST_CASE("sphere inversion is an involution and fixes its sphere") {
  InversionSpec spec;
  spec.center = Vec3(-3.0, 0.5, 0.2);
  spec.radius = 1.7;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 10; ++k) {
    const Vec3 p(u(rng), u(rng), u(rng));
    const Vec3 back = invert(spec, invert(spec, p));
    CHECK((back - p).norm() < 1e-11);
    const Vec3 image = invert(spec, p);
    const double product =
        (image - spec.center).norm() * (p - spec.center).norm();
    CHECK(std::abs(product - spec.radius * spec.radius) < 1e-10);
  }
}

TEST_CASE("inverted jets differentiate the inverted map") {
  InversionSpec spec;
  spec.center = Vec3(-2.5, 0.3, -0.4);
  spec.radius = 1.2;
  const double phi = 0.7, theta = 2.1, h = 1e-5;
  const Jet2 image = invert(spec, torus_jet(phi, theta));
  const Vec3 fd_u = (invert(spec, torus_point(phi + h, theta)) -
                     invert(spec, torus_point(phi - h, theta))) /
                    (2.0 * h);
  const Vec3 fd_v = (invert(spec, torus_point(phi, theta + h)) -
                     invert(spec, torus_point(phi, theta - h))) /
                    (2.0 * h);
  CHECK((image.yu - fd_u).norm() < 1e-8);
  CHECK((image.yv - fd_v).norm() < 1e-8);
  CHECK((image.y - invert(spec, torus_point(phi, theta))).norm() < 1e-12);
}

TEST_CASE("family map is the identity at the origin parameter") {
  MobiusParam param;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
  for (int k = 0; k < 6; ++k) {
    const Vec3 x = torus_point(u(rng), u(rng));
    CHECK((family_point(param, x) - x).norm() < 1e-12);
  }
}

TEST_CASE("family torus grid agrees with the point map") {
  MobiusParam param;
  param.omega = Eigen::Vector2d(0.35, 0.2);
  param.rotation = axis_rotation(Vec3(0.0, 1.0, 1.0).normalized());
  const SurfaceGrid base = build_clifford_torus(16);
  const SurfaceGrid image = family_torus(param, base);
  double worst = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      worst = std::max(
          worst,
          (image.position(i, j) - family_point(param, base.position(i, j)))
              .norm());
  CHECK(worst < 1e-12);
}

TEST_CASE("family invariants survive to the degenerate regime") {
  for (const double modulus : {0.3, 0.9}) {
    const FamilyMeasurement meas = measure_family(modulus);
    CHECK(std::abs(meas.area / reference_area - 1.0) < 2e-6);
    CHECK(std::abs(meas.willmore / reference_energy - 1.0) < 2e-6);
  }
}

TEST_CASE("degeneration approaches the limit sphere linearly") {
  const struct {
    double modulus, distance;
  } table[] = {{0.90, 0.18290}, {0.95, 0.09069}, {0.99, 0.01804},
               {0.995, 0.00901}};
  for (const auto& row : table)
    CHECK(std::abs(hausdorff_to_sphere(row.modulus) - row.distance) < 1e-4);
  // Distance is asymptotically linear in 1 - modulus.
  const double ratio =
      hausdorff_to_sphere(0.99) / hausdorff_to_sphere(0.995);
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.02));
  const SphereShape sphere = degeneration_sphere(Eigen::Vector2d(0.0, 1.0));
  CHECK(std::abs(sphere.radius - degenerate_radius) < 1e-12);
  CHECK((sphere.center - degenerate_radius * Vec3(0.0, 1.0, 0.0)).norm() <
        1e-12);
}

TEST_CASE("jacobi basis at the reference member matches closed forms") {
  const SurfaceGrid grid = build_clifford_torus(32);
  const JacobiBasis basis = jacobi_fields({}, grid);
  REQUIRE(basis.fields.size() == 8u);
  REQUIRE(basis.labels.size() == 8u);
  CHECK(basis.axial_rotation_degenerate);

  double worst_dilation = 0.0, worst_tz = 0.0, worst_rx = 0.0;
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) {
      const double phi = grid.phi(i), theta = grid.theta(j);
      // Dilation: y . n = sqrt2 cos(phi) + 1.
      worst_dilation =
          std::max(worst_dilation, std::abs(basis.fields[0](i, j) -
                                            (sqrt2 * std::cos(phi) + 1.0)));
      // z-translation: e_z . n = sin(phi).
      worst_tz = std::max(
          worst_tz, std::abs(basis.fields[3](i, j) - std::sin(phi)));
      // x-rotation: (e_x x y) . n.
      const Vec3 y = torus_point(phi, theta);
      const Vec3 n = torus_normal(phi, theta);
      worst_rx = std::max(worst_rx,
                          std::abs(basis.fields[4](i, j) -
                                   Vec3::UnitX().cross(y).dot(n)));
    }
  CHECK(worst_dilation < 1e-10);
  CHECK(worst_tz < 1e-10);
  CHECK(worst_rx < 1e-10);
}

TEST_CASE("jacobi basis is conjugation-equivariant across placements") {
  // Rotating the member by 90 degrees about e_x turns the symmetry axis onto
  // a coordinate axis; the chart patterns of all eight generator fields must
  // be unchanged (generators follow the body axes).
  const SurfaceGrid grid = build_clifford_torus(24);
  const JacobiBasis identity = jacobi_fields({}, grid);
  MobiusParam rotated;
  rotated.rotation = axis_rotation(Vec3::UnitX());
  const JacobiBasis moved = jacobi_fields(rotated, grid);
  REQUIRE(moved.fields.size() == 8u);
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK((moved.fields[k] - identity.fields[k]).cwiseAbs().maxCoeff() <
          1e-9);
    CHECK(moved.fields[k].cwiseAbs().maxCoeff() > 0.1);
  }
}

TEST_CASE("family velocity fields: analytic limit joins the generic path") {
  const SurfaceGrid grid = build_clifford_torus(24);
  MobiusParam tiny;
  tiny.omega = Eigen::Vector2d(1e-12, 0.0);  // analytic limit branch
  MobiusParam small;
  small.omega = Eigen::Vector2d(1e-3, 0.0);  // finite-difference branch
  const JacobiBasis limit = jacobi_fields(tiny, grid);
  const JacobiBasis generic = jacobi_fields(small, grid);
  for (const std::size_t k : {6u, 7u}) {
    const double scale = limit.fields[k].cwiseAbs().maxCoeff();
    REQUIRE(scale > 0.1);
    const double gap =
        (limit.fields[k] - generic.fields[k]).cwiseAbs().maxCoeff();
    CHECK(gap / scale < 2e-2);
  }
}

TEST_CASE("distortion-scaled resolution grows near the surface") {
  InversionSpec far_spec{Vec3(-6.0, 0.0, 0.0), 1.0};
  InversionSpec near_spec{Vec3(-2.9, 0.0, 0.0), 1.0};
  CHECK(conformal_distortion(near_spec) > conformal_distortion(far_spec));
  const ResolutionChoice far_choice = distortion_resolution(far_spec, 64);
  const ResolutionChoice near_choice = distortion_resolution(near_spec, 64);
  CHECK(near_choice.resolution >= far_choice.resolution);
  InversionSpec touching{Vec3(-2.45, 0.0, 0.0), 0.5};
  CHECK(distortion_resolution(touching, 256).capped);
}

}  // TEST_SUITE

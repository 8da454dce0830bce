#include <cmath>

#include "doctest.h"
#include "wlab/constants.hpp"
#include "wlab/metrics.hpp"
#include "wlab/mobius.hpp"
#include "wlab/reduction.hpp"

using namespace wlab;

namespace {

MobiusParam member(double ox, double oy) {
  MobiusParam param;
  param.omega = Eigen::Vector2d(ox, oy);
  return param;
}

}  // namespace

TEST_SUITE("reduction") {

TEST_CASE("flat placement energies reproduce the conformal invariant") {
  const MetricModel flat = euclidean_metric();
  CHECK(std::abs(reduced_energy(flat, 0.1, Vec3::Zero(), {}, false) -
                 reference_energy) < 1e-11);
  CHECK(std::abs(reduced_energy(flat, 0.1, Vec3::Zero(), member(0.3, 0.0),
                                false) -
                 reference_energy) < 1e-5);
  CHECK(std::abs(reduced_energy(flat, 0.1, Vec3::Zero(), member(0.25, 0.55),
                                false) -
                 reference_energy) < 1e-5);
  CHECK(std::abs(reduced_energy(flat, 0.1, Vec3::Zero(), member(0.0, 0.9),
                                false) -
                 reference_energy) < 1e-4);
  EnergyOptions options;
  options.route = PlacementRoute::exp_grid;
  CHECK(std::abs(reduced_energy(flat, 0.1, Vec3(0.4, -0.2, 0.7),
                                member(0.3, 0.0), false, options) -
                 reference_energy) < 1e-3);
}

TEST_CASE("symmetric expansion against the closed-form coefficient") {
  const std::vector<double> eps = {0.025, 0.05, 0.075, 0.1};

  const ExpansionFit iso = symmetric_expansion_fit(
      normal_expansion(synthetic_curvature(Mat3::Identity() / 3.0)),
      Vec3::Zero(), Vec3::UnitZ(), eps);
  CHECK(std::abs(iso.c_lead - (-37.220622)) < 1e-4);
  CHECK(std::abs(iso.target - (-4.0 * sqrt2 * pi * pi * (2.0 / 3.0))) < 1e-10);
  CHECK(iso.rel_error < 1e-5);
  // The cubic-refined fit must beat the plain quadratic fit.
  CHECK(std::abs(iso.quadratic_lead - iso.target) >
        std::abs(iso.c_lead - iso.target));

  const MetricModel anis =
      normal_expansion(synthetic_curvature(Vec3(1.0, 2.0, 3.0).asDiagonal()));
  const ExpansionFit along_z =
      symmetric_expansion_fit(anis, Vec3::Zero(), Vec3::UnitZ(), eps);
  CHECK(std::abs(along_z.c_lead - (-167.483822)) < 1e-3);
  CHECK(std::abs(along_z.target - (-12.0 * sqrt2 * pi * pi)) < 1e-10);
  CHECK(along_z.rel_error < 2e-4);

  const ExpansionFit along_x =
      symmetric_expansion_fit(anis, Vec3::Zero(), Vec3::UnitX(), eps);
  CHECK(std::abs(along_x.c_lead - (-279.139108)) < 1e-3);
  CHECK(std::abs(along_x.target - (-20.0 * sqrt2 * pi * pi)) < 1e-10);
  CHECK(along_x.rel_error < 2e-4);

  const ExpansionFit diagonal = symmetric_expansion_fit(
      anis, Vec3::Zero(), Vec3(0.0, 1.0, 1.0).normalized(), eps);
  CHECK(std::abs(diagonal.c_lead - (-195.402727)) < 1e-3);
  CHECK(std::abs(diagonal.target - (-14.0 * sqrt2 * pi * pi)) < 1e-10);
  CHECK(diagonal.rel_error < 1e-4);
}

TEST_CASE("expansion is exactly covariant under placement rotation") {
  const std::vector<double> eps = {0.05, 0.1};
  const Mat3 ric = Vec3(1.0, 2.0, 3.0).asDiagonal();
  const Vec3 axis = Vec3(1.0, 1.0, 1.0).normalized();
  const Mat3 R = axis_rotation(axis).toRotationMatrix();
  const ExpansionFit direct = symmetric_expansion_fit(
      normal_expansion(synthetic_curvature(ric)), Vec3::Zero(), axis, eps);
  const Mat3 conjugated = R.transpose() * ric * R;
  const ExpansionFit pulled = symmetric_expansion_fit(
      normal_expansion(synthetic_curvature(conjugated)), Vec3::Zero(),
      Vec3::UnitZ(), eps);
  CHECK(std::abs(direct.c_lead - pulled.c_lead) < 1e-10);
  CHECK(std::abs(direct.target - pulled.target) < 1e-12);
}

TEST_CASE("sphere control expansion") {
  const std::vector<double> radii = {0.05, 0.1, 0.15, 0.2};
  const ExpansionFit flat =
      sphere_expansion_fit(euclidean_metric(), Vec3::Zero(), radii);
  CHECK(std::abs(flat.c0 - 16.0 * pi) < 1e-9);

  const ExpansionFit unit = sphere_expansion_fit(
      constant_curvature_metric(1.0), Vec3::Zero(), radii);
  CHECK(std::abs(unit.c_lead - (-8.377353)) < 1e-4);
  CHECK(std::abs(unit.target - (-8.0 * pi / 3.0)) < 1e-12);
  CHECK(unit.rel_error < 1e-3);

  const ExpansionFit hyper = sphere_expansion_fit(
      constant_curvature_metric(-2.0), Vec3::Zero(), radii);
  CHECK(std::abs(hyper.c_lead - 16.753286) < 1e-3);
  CHECK(std::abs(hyper.target - (16.0 * pi / 3.0)) < 1e-12);
  CHECK(hyper.rel_error < 1e-3);
}

TEST_CASE("degeneration control in flat space") {
  const ExpansionFit fit = degenerate_expansion_fit(
      euclidean_metric(), Vec3::Zero(), Vec3::UnitZ(), {0.9, 0.95, 0.99},
      0.05);
  REQUIRE(fit.deviations.size() == 3u);
  CHECK(std::abs(fit.target) < 1e-12);
  for (const double dev : fit.deviations) CHECK(dev < 2e-3);
}

TEST_CASE("curvature conditions: peaked-scalar field") {
  const CurvatureField field = minimum_condition_field();
  const std::vector<Vec3> points = box_lattice(field.box_lo, field.box_hi, 13);
  const std::vector<Vec3> dirs = direction_samples(200);
  const ConditionReport report = condition_check(field, points, dirs);
  CHECK(report.lhs1 == doctest::Approx(7.2).epsilon(1e-9));
  CHECK(report.rhs1 == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(report.assump1_holds);
  CHECK(report.lhs2 == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(report.rhs2 == doctest::Approx(4.0).epsilon(1e-9));
  CHECK_FALSE(report.assump2_holds);  // borderline, not strict
  CHECK(report.witness1_point.norm() < 1e-9);
  CHECK(std::abs(std::abs(report.witness1_direction.x()) - 1.0) < 1e-9);
  CHECK(std::abs(report.witness1_via_ricci - report.witness1_via_sectional) <
        1e-11);
  CHECK(std::abs(report.witness2_via_ricci - report.witness2_via_sectional) <
        1e-11);
  CHECK(report.direction_sample_gap < 1e-2);
}

TEST_CASE("curvature conditions: axial-anisotropy field") {
  const CurvatureField field = two_sided_condition_field();
  const ConditionReport report = condition_check(
      field, box_lattice(field.box_lo, field.box_hi, 13),
      direction_samples(200));
  CHECK(report.lhs1 == doctest::Approx(7.5).epsilon(1e-9));
  CHECK(report.rhs1 == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(report.lhs2 == doctest::Approx(4.5).epsilon(1e-9));
  CHECK(report.rhs2 == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(report.assump1_holds);
  CHECK(report.assump2_holds);
}

TEST_CASE("curvature conditions: schwarzschild point metric") {
  const ConditionReport report = condition_check(
      schwarzschild_metric(1.0),
      {Vec3(0.5, 0.0, 0.0), Vec3(0.0, 1.0, 0.0), Vec3(0.0, 0.0, 2.0)},
      direction_samples(64));
  CHECK(report.lhs1 == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(std::abs(report.rhs1) < 1e-9);
  CHECK(report.lhs2 == doctest::Approx(-0.375).epsilon(1e-9));
  CHECK(std::abs(report.rhs2) < 1e-9);
  CHECK(report.assump1_holds);
  CHECK(report.assump2_holds);
}

TEST_CASE("sample helpers are deterministic and well-formed") {
  const std::vector<Vec3> lattice =
      box_lattice(Vec3::Constant(-1.0), Vec3::Constant(1.0), 3);
  CHECK(lattice.size() == 27u);
  bool corner = false, center = false;
  for (const Vec3& p : lattice) {
    corner = corner || (p - Vec3::Constant(1.0)).norm() < 1e-14;
    center = center || p.norm() < 1e-14;
  }
  CHECK(corner);
  CHECK(center);
  const std::vector<Vec3> dirs = direction_samples(32);
  CHECK(dirs.size() == 32u);
  for (const Vec3& d : dirs) CHECK(std::abs(d.norm() - 1.0) < 1e-12);
  CHECK((direction_samples(32)[7] - dirs[7]).norm() == 0.0);
}

TEST_CASE("axis rotation takes the pole to the requested axis") {
  for (const Vec3& axis :
       {Vec3(1.0, 0.0, 0.0), Vec3(0.0, 1.0, 1.0).normalized(),
        Vec3(0.0, 0.0, -1.0), Vec3(0.2, -0.4, 0.3).normalized()}) {
    const Eigen::Quaterniond q = axis_rotation(axis);
    CHECK(std::abs(q.norm() - 1.0) < 1e-12);
    CHECK((q * Vec3::UnitZ() - axis).norm() < 1e-12);
  }
}

TEST_CASE("landscape rows agree with direct energies") {
  const CurvatureField field = minimum_condition_field();
  const std::vector<Vec3> points = {Vec3::Zero(), Vec3(0.5, 0.0, 0.0)};
  const std::vector<Vec3> axes = {Vec3::UnitX(), Vec3::UnitZ()};
  const std::vector<Eigen::Vector2d> omegas = {Eigen::Vector2d::Zero()};
  const LandscapeTable table =
      landscape_scan(field, 0.1, points, axes, omegas, false);
  REQUIRE(table.rows.size() == 4u);
  for (const LandscapePoint& row : table.rows) {
    MobiusParam param;
    param.rotation = axis_rotation(row.axis);
    const MetricModel local = normal_expansion(field.at(row.point));
    const double direct =
        reduced_energy(local, 0.1, Vec3::Zero(), param, false);
    CHECK(std::abs(row.energy - direct) < 1e-12);
    CHECK_FALSE(row.corrected);
  }
  // The flat-metric overload reproduces the conformal invariant on all rows.
  const LandscapeTable flat = landscape_scan(
      euclidean_metric(), 0.1, points, axes, omegas, false);
  for (const LandscapePoint& row : flat.rows)
    CHECK(std::abs(row.energy - reference_energy) < 1e-6);
}

}  // TEST_SUITE

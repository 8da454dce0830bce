#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "wlab/jets.hpp"
#include "wlab/surface.hpp"

namespace wlab {

// Sphere inversion with respect to the boundary of B_radius(center).
struct InversionSpec {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

Vec3 invert(const InversionSpec& spec, const Vec3& point);
std::vector<Vec3> invert(const InversionSpec& spec,
                         const std::vector<Vec3>& points);
SurfaceGrid invert(const InversionSpec& spec, const SurfaceGrid& grid);
Jet2 invert(const InversionSpec& spec, const Jet2& jet);

// The unique offset xi > sqrt2 + 1 such that inverting the reference torus
// in a sphere of radius eta centered at -xi e_x preserves its area 4 sqrt2
// pi^2. Strictly increasing in eta, with xi/eta -> 1 at large eta.
double area_preserving_offset(double eta);

// Distance from the inversion center to the torus for the area-preserving
// offset: xi_tilde = area_preserving_offset(eta) - (sqrt2 + 1). For small
// eta this is the half-width of the shrinking handle, with
// eta^2 / xi_tilde -> 2 * (2 pi^2)^{1/4}.
double small_radius_offset(double eta);

// Parameter of the torus family: a point of the open unit disk selecting
// the inversion (modulus = degeneration progress, argument = handle
// direction) and a placement rotation applied on top.
struct MobiusParam {
  Eigen::Vector2d omega = Eigen::Vector2d::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();

  double modulus() const { return omega.norm(); }
};

// Derived constants of the normalized transform at a given modulus m:
// the inversion radius eta = (1 - m)/m, the area-preserving offset xi and
// handle half-width xi_tilde, the x-extent span L of the pre-image, and the
// recentering shift t.
struct FamilyGeometry {
  double modulus = 0.0;
  double inversion_radius = 0.0;
  double offset = 0.0;
  double handle_width = 0.0;
  double span = 0.0;
  double shift = 0.0;
};

FamilyGeometry family_geometry(double modulus);

// The family map at chart parameter omega (before the placement rotation
// the image is aligned to the omega direction): identity at omega = 0,
// degenerating to a round sphere of radius (2 pi^2)^{1/4} as |omega| -> 1.
Vec3 family_point(const MobiusParam& param, const Vec3& x);

// Jet of the family surface over the torus chart; `aligned` variants fix
// omega along +e_x and skip all rotations (energies and distances are
// rotation invariant, and the aligned chart keeps the handle at the fixed
// chart point (phi, theta) = (0, pi)).
Jet2 family_jet(const MobiusParam& param, double phi, double theta);
Jet2 aligned_family_jet(double modulus, double phi, double theta);

SurfaceGrid family_torus(const MobiusParam& param, const SurfaceGrid& grid);
SurfaceGrid family_torus(const MobiusParam& param, int resolution);

// Limit sphere of the degeneration along the unit direction: center
// (2 pi^2)^{1/4} * direction in the z = 0 plane, radius (2 pi^2)^{1/4}.
struct SphereShape {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

SphereShape degeneration_sphere(const Eigen::Vector2d& direction);

// Euclidean area and Willmore energy of the family surface, by quadrature
// that follows the handle scale (two-scale nodes once the handle width drops
// below the uniform-grid regime).
struct FamilyMeasurement {
  double area = 0.0;
  double willmore = 0.0;
};

FamilyMeasurement measure_family(double modulus);

// Sampled Hausdorff distance between the family surface at the given modulus
// and the degeneration sphere (alignment-invariant).
double hausdorff_to_sphere(double modulus);

// Labeled normal fields spanning the kernel of the linearized Willmore
// operator at the family member: dilation, three translations, rotations,
// and family-velocity fields. Near omega = 0 the axial rotation degenerates
// and the (rotation-z, inversion) pair is replaced by the two omega-partials
// of the family.
struct JacobiBasis {
  std::vector<ScalarField> fields;
  std::vector<std::string> labels;
  bool axial_rotation_degenerate = false;
};

JacobiBasis jacobi_fields(const MobiusParam& param, const SurfaceGrid& grid);

// Conformal distortion ratio max|DPhi| / min|DPhi| of an inversion over the
// reference torus, and the distortion-scaled grid resolution (capped at 512;
// the flag records whether the cap was hit).
double conformal_distortion(const InversionSpec& spec);

struct ResolutionChoice {
  int resolution = 64;
  bool capped = false;
};

ResolutionChoice distortion_resolution(const InversionSpec& spec, int base);

} // namespace wlab

#include "wlab/mobius.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_roots.h>

#include "wlab/constants.hpp"
#include "wlab/quadrature.hpp"

namespace wlab {

namespace {

void quiet_gsl() {
  static gsl_error_handler_t* old = gsl_set_error_handler_off();
  (void)old;
}

struct AreaParams {
  double xi;
  double peak_width;
};

// Reduced integrand of the inverted-torus area: the theta integral of the
// conformal factor (eta^2 / |X + xi e_x|^2)^2 over the torus is closed-form,
// leaving 2 pi eta^4 * rho a / ((a - b)(a + b))^{3/2} with
// a = rho^2 + xi^2 + sin^2 phi and b = 2 xi rho. The differences are formed
// cancellation-free as (xi -+ rho)^2 + sin^2 phi. The integrand concentrates
// at phi = 0 on the scale of the handle width xi - (sqrt2 + 1), so the
// quadrature variable is u with phi = width * sinh(u), which spreads the
// peak to unit scale for every width.
double reduced_area_integrand(double u, void* raw) {
  const auto* p = static_cast<const AreaParams*>(raw);
  const double phi = p->peak_width * std::sinh(u);
  const double jacobian = p->peak_width * std::cosh(u);
  const double rho = sqrt2 + std::cos(phi);
  const double s2 = std::sin(phi) * std::sin(phi);
  const double a = rho * rho + p->xi * p->xi + s2;
  const double amb = (p->xi - rho) * (p->xi - rho) + s2;
  const double apb = (p->xi + rho) * (p->xi + rho) + s2;
  return jacobian * rho * a / std::pow(amb * apb, 1.5);
}

double inverted_torus_area(double xi, double eta, double epsrel) {
  quiet_gsl();
  const double width = std::min(std::max(xi - outer_ring_radius, 1e-300), 1.0);
  AreaParams params{xi, width};
  gsl_function f;
  f.function = &reduced_area_integrand;
  f.params = &params;
  const double u_max = std::asinh(pi / width);

  static gsl_integration_workspace* workspace =
      gsl_integration_workspace_alloc(8192);
  double value = 0.0, abserr = 0.0;
  int status = gsl_integration_qag(&f, -u_max, u_max, 0.0, epsrel, 8192,
                                   GSL_INTEG_GAUSS61, workspace, &value,
                                   &abserr);
  if (status != GSL_SUCCESS && status != GSL_EROUND) {
    // Retry with a relaxed tolerance before giving up.
    status = gsl_integration_qag(&f, -u_max, u_max, 0.0, 1e-6, 8192,
                                 GSL_INTEG_GAUSS61, workspace, &value, &abserr);
    if (status != GSL_SUCCESS && status != GSL_EROUND)
      throw std::runtime_error(
          "area_preserving_offset: quadrature failed at xi=" +
          std::to_string(xi));
  }
  const double eta2 = eta * eta;
  return 2.0 * pi * eta2 * eta2 * value;
}

struct RootParams {
  double eta;
};

double area_defect(double xi, void* raw) {
  const auto* p = static_cast<const RootParams*>(raw);
  return inverted_torus_area(xi, p->eta, 1e-12) - reference_area;
}

Mat3 rotation_about_z(double angle) {
  Mat3 r = Mat3::Identity();
  const double c = std::cos(angle), s = std::sin(angle);
  r(0, 0) = c;
  r(0, 1) = -s;
  r(1, 0) = s;
  r(1, 1) = c;
  return r;
}

constexpr double kIdentityModulus = 1e-10;
constexpr double kChartSwapModulus = 0.05;

void validate_param(const MobiusParam& param) {
  if (!(param.omega.norm() < 1.0))
    throw std::invalid_argument("MobiusParam: |omega| must be < 1");
  if (std::abs(param.rotation.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("MobiusParam: rotation quaternion not unit");
}

Jet2 aligned_jet_impl(const FamilyGeometry& geo, double phi, double theta) {
  Jet2 jet = torus_jet(phi, theta);
  if (geo.modulus < kIdentityModulus) return jet;
  jet = invert_jet(Vec3(-geo.offset, 0.0, 0.0), geo.inversion_radius, jet);
  jet = reflect_x_jet(jet);
  jet = translate_jet(jet, Vec3(geo.shift, 0.0, 0.0));
  return jet;
}

bool is_identity_rotation(const Eigen::Quaterniond& q) {
  return q.vec().norm() < 1e-15 && std::abs(std::abs(q.w()) - 1.0) < 1e-15;
}

} // namespace

Vec3 invert(const InversionSpec& spec, const Vec3& point) {
  if ((point - spec.center).norm() == 0.0)
    throw std::invalid_argument("invert: point at the inversion center");
  return inversion_point(spec.center, spec.radius, point);
}

std::vector<Vec3> invert(const InversionSpec& spec,
                         const std::vector<Vec3>& points) {
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const Vec3& p : points) out.push_back(invert(spec, p));
  return out;
}

SurfaceGrid invert(const InversionSpec& spec, const SurfaceGrid& grid) {
  SurfaceGrid out = grid;
  for (int i = 0; i < grid.n_phi(); ++i)
    for (int j = 0; j < grid.n_theta(); ++j) {
      const Vec3 q = invert(spec, grid.position(i, j));
      out.x(i, j) = q[0];
      out.y(i, j) = q[1];
      out.z(i, j) = q[2];
    }
  return out;
}

Jet2 invert(const InversionSpec& spec, const Jet2& jet) {
  return invert_jet(spec.center, spec.radius, jet);
}

double area_preserving_offset(double eta) {
  if (!(eta > 0.0))
    throw std::invalid_argument("area_preserving_offset: eta must be > 0");

  static std::map<double, double> cache;
  if (auto it = cache.find(eta); it != cache.end()) return it->second;

  quiet_gsl();
  RootParams params{eta};
  gsl_function f;
  f.function = &area_defect;
  f.params = &params;

  // Bracket: the area blows up as xi approaches the outer ring radius and
  // decays to 0 as xi -> infinity, so the defect changes sign once.
  double lo = outer_ring_radius + 1e-8;
  for (int tries = 0; tries < 3 && area_defect(lo, &params) < 0.0; ++tries)
    lo = outer_ring_radius + (lo - outer_ring_radius) * 1e-3;
  double hi = std::max(4.0, 2.0 * eta);
  for (int tries = 0; tries < 60 && area_defect(hi, &params) > 0.0; ++tries)
    hi *= 2.0;
  if (area_defect(lo, &params) < 0.0 || area_defect(hi, &params) > 0.0)
    throw std::runtime_error("area_preserving_offset: bracketing failed");

  gsl_root_fsolver* solver = gsl_root_fsolver_alloc(gsl_root_fsolver_brent);
  gsl_root_fsolver_set(solver, &f, lo, hi);
  double root = 0.5 * (lo + hi);
  int status = GSL_CONTINUE;
  for (int iter = 0; iter < 200 && status == GSL_CONTINUE; ++iter) {
    gsl_root_fsolver_iterate(solver);
    root = gsl_root_fsolver_root(solver);
    // The relative component keeps the test satisfiable when the root is
    // large (xi ~ eta for small moduli), where 1e-12 is below ULP spacing.
    status = gsl_root_test_interval(gsl_root_fsolver_x_lower(solver),
                                    gsl_root_fsolver_x_upper(solver), 1e-12,
                                    1e-12);
  }
  gsl_root_fsolver_free(solver);
  if (status != GSL_SUCCESS)
    throw std::runtime_error("area_preserving_offset: root search stalled");

  // Cross-check the quadrature at two tolerances at the root.
  const double tight = inverted_torus_area(root, eta, 1e-12);
  const double loose = inverted_torus_area(root, eta, 1e-10);
  if (std::abs(tight - loose) > 1e-9 * std::abs(tight))
    throw std::runtime_error(
        "area_preserving_offset: quadrature tolerances disagree");
  if (std::abs(tight - reference_area) > 1e-7 * reference_area)
    throw std::runtime_error("area_preserving_offset: residual too large");

  cache.emplace(eta, root);
  return root;
}

double small_radius_offset(double eta) {
  return area_preserving_offset(eta) - outer_ring_radius;
}

FamilyGeometry family_geometry(double modulus) {
  if (!(modulus >= 0.0 && modulus < 1.0))
    throw std::invalid_argument("family_geometry: modulus must be in [0, 1)");
  FamilyGeometry geo;
  geo.modulus = modulus;
  if (modulus < kIdentityModulus) {
    // Identity member: no inversion; the handle width entry is the torus
    // scale itself so resolution rules fall back to the base grid.
    geo.inversion_radius = std::numeric_limits<double>::infinity();
    geo.offset = std::numeric_limits<double>::infinity();
    geo.handle_width = 10.0;
    geo.span = std::numeric_limits<double>::infinity();
    geo.shift = 0.0;
    return geo;
  }
  const double eta = (1.0 - modulus) / modulus;
  const double xi = area_preserving_offset(eta);
  const double xt = xi - outer_ring_radius;
  const double span = xi + outer_ring_radius;
  const double eta2 = eta * eta;
  const double x_mid = xi - 0.5 * (eta2 / xt + eta2 / span);
  geo.inversion_radius = eta;
  geo.offset = xi;
  geo.handle_width = xt;
  geo.span = span;
  geo.shift = modulus * (degenerate_radius - x_mid);
  return geo;
}

Vec3 family_point(const MobiusParam& param, const Vec3& x) {
  validate_param(param);
  const double m = param.modulus();
  Vec3 y = x;
  if (m >= kIdentityModulus) {
    const FamilyGeometry geo = family_geometry(m);
    const double alpha = std::atan2(param.omega[1], param.omega[0]);
    y = rotation_about_z(-alpha) * y;
    y = inversion_point(Vec3(-geo.offset, 0.0, 0.0), geo.inversion_radius, y);
    y[0] = -y[0] + geo.shift;
    y = rotation_about_z(alpha) * y;
  }
  return param.rotation * y;
}

Jet2 aligned_family_jet(double modulus, double phi, double theta) {
  return aligned_jet_impl(family_geometry(modulus), phi, theta);
}

Jet2 family_jet(const MobiusParam& param, double phi, double theta) {
  validate_param(param);
  const double m = param.modulus();
  Jet2 jet = torus_jet(phi, theta);
  if (m >= kIdentityModulus) {
    const FamilyGeometry geo = family_geometry(m);
    const double alpha = std::atan2(param.omega[1], param.omega[0]);
    jet = rotate_jet(rotation_about_z(-alpha), jet);
    jet = invert_jet(Vec3(-geo.offset, 0.0, 0.0), geo.inversion_radius, jet);
    jet = reflect_x_jet(jet);
    jet = translate_jet(jet, Vec3(geo.shift, 0.0, 0.0));
    jet = rotate_jet(rotation_about_z(alpha), jet);
  }
  return rotate_jet(param.rotation.toRotationMatrix(), jet);
}

SurfaceGrid family_torus(const MobiusParam& param, const SurfaceGrid& grid) {
  validate_param(param);
  if (param.modulus() < kIdentityModulus && is_identity_rotation(param.rotation))
    return grid;
  SurfaceGrid out = grid;
  for (int i = 0; i < grid.n_phi(); ++i)
    for (int j = 0; j < grid.n_theta(); ++j) {
      const Vec3 q = family_point(param, grid.position(i, j));
      out.x(i, j) = q[0];
      out.y(i, j) = q[1];
      out.z(i, j) = q[2];
    }
  return out;
}

SurfaceGrid family_torus(const MobiusParam& param, int resolution) {
  return family_torus(param, build_clifford_torus(resolution));
}

SphereShape degeneration_sphere(const Eigen::Vector2d& direction) {
  if (std::abs(direction.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("degeneration_sphere: direction must be unit");
  SphereShape sphere;
  sphere.center = Vec3(degenerate_radius * direction[0],
                       degenerate_radius * direction[1], 0.0);
  sphere.radius = degenerate_radius;
  return sphere;
}

FamilyMeasurement measure_family(double modulus) {
  const FamilyGeometry geo = family_geometry(modulus);
  NodeSet nodes;
  if (geo.handle_width < 0.15) {
    nodes = two_scale_nodes(geo.handle_width);
  } else {
    const int n = suggested_uniform_resolution(geo.handle_width);
    nodes = uniform_nodes(n, n);
  }
  const MetricJet flat;
  FamilyMeasurement out;
  for (const QuadNode& node : nodes) {
    const Jet2 jet = aligned_jet_impl(geo, node.phi, node.theta);
    const PointForms pf = point_forms(jet, flat);
    out.area += node.weight * pf.dsigma;
    out.willmore += node.weight * pf.mean * pf.mean * pf.dsigma;
  }
  return out;
}

double hausdorff_to_sphere(double modulus) {
  const FamilyGeometry geo = family_geometry(modulus);
  const Vec3 center(degenerate_radius, 0.0, 0.0);

  // Surface sample points: a uniform chart grid plus logarithmic zoom rings
  // around the handle chart point (0, pi), where the parametrization
  // concentrates all of the sphere's far side. Chart coordinates and a local
  // sample spacing are kept for coarse-to-fine refinement below.
  struct Sample {
    Vec3 point;
    double phi, theta, spacing;
  };
  std::vector<Sample> samples;
  const int nu = 96;
  samples.reserve(static_cast<size_t>(nu) * nu + 180 * 64);
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nu; ++j) {
      const double phi = 2.0 * pi * i / nu, theta = 2.0 * pi * j / nu;
      samples.push_back(
          {aligned_jet_impl(geo, phi, theta).y, phi, theta, 2.0 * pi / nu});
    }
  const double t_min = std::max(geo.handle_width * 1e-3, 1e-12);
  const double t_max = 0.7;
  const int n_rings = 180, n_ang = 64;
  for (int r = 0; r < n_rings; ++r) {
    const double t = t_min * std::pow(t_max / t_min, (r + 0.5) / n_rings);
    for (int a = 0; a < n_ang; ++a) {
      const double psi = 2.0 * pi * a / n_ang;
      const double phi = t * std::cos(psi), theta = pi + t * std::sin(psi);
      samples.push_back({aligned_jet_impl(geo, phi, theta).y, phi, theta,
                         t * (2.0 * pi / n_ang)});
    }
  }

  double surface_to_sphere = 0.0;
  for (const Sample& s : samples)
    surface_to_sphere = std::max(
        surface_to_sphere,
        std::abs((s.point - center).norm() - degenerate_radius));

  // Directed distance from the sphere: coarse nearest sample, then pattern
  // refinement on the chart (the squared distance is smooth in (phi, theta)).
  double sphere_to_surface = 0.0;
  const NodeSet sphere = sphere_nodes(24, 48);
  for (const QuadNode& node : sphere) {
    const Vec3 s =
        center +
        degenerate_radius * Vec3(std::sin(node.phi) * std::cos(node.theta),
                                 std::sin(node.phi) * std::sin(node.theta),
                                 std::cos(node.phi));
    double best = std::numeric_limits<double>::infinity();
    double best_phi = 0.0, best_theta = 0.0, step = 0.0;
    for (const Sample& p : samples) {
      const double d2 = (s - p.point).squaredNorm();
      if (d2 < best) {
        best = d2;
        best_phi = p.phi;
        best_theta = p.theta;
        step = p.spacing;
      }
    }
    for (int level = 0; level < 40 && step > 1e-12; ++level) {
      bool moved = false;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const double cphi = best_phi + step * di;
          const double ctheta = best_theta + step * dj;
          const double d2 =
              (s - aligned_jet_impl(geo, cphi, ctheta).y).squaredNorm();
          if (d2 < best) {
            best = d2;
            best_phi = cphi;
            best_theta = ctheta;
            moved = true;
          }
        }
      if (!moved) step *= 0.5;
    }
    sphere_to_surface = std::max(sphere_to_surface, std::sqrt(best));
  }
  return std::max(surface_to_sphere, sphere_to_surface);
}

JacobiBasis jacobi_fields(const MobiusParam& param, const SurfaceGrid& grid) {
  validate_param(param);
  const int np = grid.n_phi(), nt = grid.n_theta();
  const FormsField forms = fundamental_forms(grid);

  auto project_ambient = [&](const std::function<Vec3(const Vec3&)>& field) {
    ScalarField z(np, nt);
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < nt; ++j) {
        const Vec3 n(forms.nx(i, j), forms.ny(i, j), forms.nz(i, j));
        z(i, j) = n.dot(field(grid.position(i, j)));
      }
    return z;
  };

  JacobiBasis basis;
  basis.fields.push_back(project_ambient([](const Vec3& y) { return y; }));
  basis.labels.push_back("dilation");
  for (int k = 0; k < 3; ++k) {
    basis.fields.push_back(project_ambient([k](const Vec3&) {
      Vec3 e = Vec3::Zero();
      e[k] = 1.0;
      return e;
    }));
    basis.labels.push_back(std::string("translation-") +
                           static_cast<char>('x' + k));
  }
  // Rotation generators use body axes (the placement rotation applied to the
  // coordinate axes).  With fixed world axes the projected pattern at a
  // rotated member is the standard pattern for the back-rotated axis, and
  // once the placement turns a coordinate axis onto the symmetry axis that
  // pattern vanishes identically -- the basis silently loses a dimension and
  // the corrector's projected Newton system goes rank-deficient.  Body axes
  // keep the basis exactly conjugation-equivariant across placements.
  auto rotation_field = [&](int k) {
    const Vec3 axis = param.rotation * Vec3::Unit(k);
    return project_ambient(
        [axis](const Vec3& y) { return Vec3(axis.cross(y)); });
  };
  basis.fields.push_back(rotation_field(0));
  basis.labels.push_back("rotation-x");
  basis.fields.push_back(rotation_field(1));
  basis.labels.push_back("rotation-y");

  // Family-velocity fields by centered finite differences in omega against
  // the fixed base chart, with a Richardson consistency check at half step.
  const SurfaceGrid base = build_clifford_torus(np, nt);
  auto velocity_field = [&](const Eigen::Vector2d& dir) {
    auto projected = [&](double step) {
      MobiusParam plus = param, minus = param;
      plus.omega += step * dir;
      minus.omega -= step * dir;
      ScalarField z(np, nt);
      for (int i = 0; i < np; ++i)
        for (int j = 0; j < nt; ++j) {
          const Vec3 v = (family_point(plus, base.position(i, j)) -
                          family_point(minus, base.position(i, j))) /
                         (2.0 * step);
          const Vec3 n(forms.nx(i, j), forms.ny(i, j), forms.nz(i, j));
          z(i, j) = n.dot(v);
        }
      return z;
    };
    const double step = 1e-4;
    const ScalarField full = projected(step);
    const ScalarField half = projected(0.5 * step);
    const double scale = std::max(1.0, half.array().abs().maxCoeff());
    if ((full - half).array().abs().maxCoeff() > 1e-6 * scale)
      throw std::runtime_error(
          "jacobi_fields: finite-difference family velocity not converged");
    return ScalarField((4.0 * half - full) / 3.0);
  };

  // At the identity member the difference quotient is unusable: the
  // area-preserving offset is only known to quadrature accuracy, and dividing
  // that jitter by the step lands far above the consistency gate.  The limit
  // is available in closed form instead.  Expanding the normalized inversion
  // in powers of 1/eta (with the offset xi = eta + 13/(4 eta) + ... fixed by
  // area preservation) gives
  //   dF/d|omega| -> (c + 13/2) e_dir - K_dir,
  // where c is the degenerate sphere radius and K_dir the special conformal
  // generator 2 <y, e_dir> y - |y|^2 e_dir, so the normal projection along
  // e_x is (c + 13/2) cos(phi) cos(theta) - (3 cos(phi) + 2 sqrt(2))
  // cos(theta), and the e_y field is its quarter-turn in theta.
  auto limit_velocity_field = [&](bool along_y) {
    ScalarField z(np, nt);
    const double translation = degenerate_radius + 6.5;
    for (int i = 0; i < np; ++i) {
      const double cp = std::cos(grid.phi(i));
      const double radial = translation * cp - (3.0 * cp + 2.0 * sqrt2);
      for (int j = 0; j < nt; ++j)
        z(i, j) = radial *
                  (along_y ? std::sin(grid.theta(j)) : std::cos(grid.theta(j)));
    }
    return z;
  };

  const double m = param.modulus();
  if (m < kChartSwapModulus) {
    // Near omega = 0 the axial rotation degenerates and the radial family
    // direction is ill-defined; use the two omega-partials instead.
    basis.axial_rotation_degenerate = true;
    const bool analytic = m < kIdentityModulus;
    basis.fields.push_back(analytic ? limit_velocity_field(false)
                                    : velocity_field(Eigen::Vector2d(1.0, 0.0)));
    basis.labels.push_back("omega-x");
    basis.fields.push_back(analytic ? limit_velocity_field(true)
                                    : velocity_field(Eigen::Vector2d(0.0, 1.0)));
    basis.labels.push_back("omega-y");
  } else {
    basis.fields.push_back(rotation_field(2));
    basis.labels.push_back("rotation-z");
    basis.fields.push_back(velocity_field(param.omega.normalized()));
    basis.labels.push_back("inversion");
  }
  return basis;
}

double conformal_distortion(const InversionSpec& spec) {
  const double planar = std::hypot(spec.center[0], spec.center[1]);
  double min_sq = std::numeric_limits<double>::infinity();
  double max_sq = 0.0;
  const int n = 16384;
  for (int i = 0; i < n; ++i) {
    const double phi = 2.0 * pi * i / n;
    const double rho = sqrt2 + std::cos(phi);
    const double dz = std::sin(phi) - spec.center[2];
    const double a = rho * rho + planar * planar + dz * dz;
    const double b = 2.0 * rho * planar;
    min_sq = std::min(min_sq, a - b);
    max_sq = std::max(max_sq, a + b);
  }
  if (min_sq <= 0.0)
    throw std::invalid_argument("conformal_distortion: center on the torus");
  return max_sq / min_sq;
}

ResolutionChoice distortion_resolution(const InversionSpec& spec, int base) {
  const double ratio = conformal_distortion(spec);
  const double ideal = std::ceil(base * ratio);
  ResolutionChoice choice;
  choice.capped = ideal > 512.0;
  int n = choice.capped ? 512 : std::max(base, static_cast<int>(ideal));
  if (n % 2 != 0) ++n;
  choice.resolution = std::min(n, 512);
  return choice;
}

} // namespace wlab

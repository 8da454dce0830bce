#include "wlab/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace wlab {

namespace {

double kron(int i, int j) { return i == j ? 1.0 : 0.0; }

// Builds a model g = f(x) * delta from a scalar factor with two derivatives.
MetricModel conformal_factor_model(std::string name,
                                   std::function<double(const Vec3&)> f,
                                   std::function<Vec3(const Vec3&)> df,
                                   std::function<Mat3(const Vec3&)> d2f) {
  MetricModel model;
  model.name = std::move(name);
  model.metric = [f](const Vec3& x) { return Mat3(f(x) * Mat3::Identity()); };
  model.dmetric = [df](const Vec3& x) {
    const Vec3 grad = df(x);
    MetricDeriv out;
    for (int k = 0; k < 3; ++k) out[k] = grad[k] * Mat3::Identity();
    return out;
  };
  model.d2metric = [d2f](const Vec3& x) {
    const Mat3 hess = d2f(x);
    MetricDeriv2 out;
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) out[k][l] = hess(k, l) * Mat3::Identity();
    return out;
  };
  model.conformal = true;
  model.conformal_log = [f](const Vec3& x) { return 0.5 * std::log(f(x)); };
  model.conformal_log_grad = [f, df](const Vec3& x) {
    return Vec3(0.5 / f(x) * df(x));
  };
  return model;
}

} // namespace

double CurvatureData::riemann(int a, int m, int n, int b) const {
  return kron(a, n) * ricci(m, b) + kron(m, b) * ricci(a, n) -
         kron(a, b) * ricci(m, n) - kron(m, n) * ricci(a, b) -
         0.5 * scalar * (kron(a, n) * kron(m, b) - kron(a, b) * kron(m, n));
}

double CurvatureData::sectional(int i, int j) const {
  if (i == j) throw std::invalid_argument("sectional: need two distinct axes");
  return ricci(i, i) + ricci(j, j) - 0.5 * scalar;
}

CurvatureData synthetic_curvature(const Mat3& ricci) {
  CurvatureData data;
  data.ricci = 0.5 * (ricci + ricci.transpose());
  data.scalar = data.ricci.trace();
  return data;
}

MetricModel euclidean_metric() {
  MetricModel model;
  model.name = "euclidean";
  model.metric = [](const Vec3&) { return Mat3(Mat3::Identity()); };
  model.dmetric = [](const Vec3&) {
    return MetricDeriv{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
  };
  model.d2metric = [](const Vec3&) {
    MetricDeriv2 out;
    for (auto& row : out)
      for (auto& m : row) m = Mat3::Zero();
    return out;
  };
  model.straight_rays_at_origin = true;
  model.conformal = true;
  model.conformal_log = [](const Vec3&) { return 0.0; };
  model.conformal_log_grad = [](const Vec3&) { return Vec3(Vec3::Zero()); };
  return model;
}

Mat3 normal_form_perturbation(const CurvatureData& data, const Vec3& x) {
  const Mat3 id = Mat3::Identity();
  const Vec3 rx = data.ricci * x;
  Mat3 h = (data.scalar / 6.0) * (x.squaredNorm() * id - x * x.transpose());
  h -= (x.dot(rx) / 3.0) * id;
  h -= (x.squaredNorm() / 3.0) * data.ricci;
  h += (x * rx.transpose() + rx * x.transpose()) / 3.0;
  return h;
}

Mat3 normal_form_perturbation_derivative(const CurvatureData& data,
                                         const Vec3& x, const Vec3& direction) {
  const Mat3 id = Mat3::Identity();
  const Vec3 rx = data.ricci * x;
  const Vec3 rd = data.ricci * direction;
  Mat3 dh = (data.scalar / 6.0) *
            (2.0 * x.dot(direction) * id - direction * x.transpose() -
             x * direction.transpose());
  dh -= (2.0 / 3.0) * rx.dot(direction) * id;
  dh -= (2.0 / 3.0) * x.dot(direction) * data.ricci;
  dh += (direction * rx.transpose() + x * rd.transpose() +
         rd * x.transpose() + rx * direction.transpose()) /
        3.0;
  return dh;
}

MetricModel normal_expansion(const CurvatureData& data) {
  const double sc = data.scalar;
  const Mat3 ric = data.ricci;
  const Mat3 id = Mat3::Identity();

  MetricModel model;
  model.name = "normal-expansion";
  model.metric = [data, id](const Vec3& x) {
    return Mat3(id + normal_form_perturbation(data, x));
  };
  model.dmetric = [data](const Vec3& x) {
    MetricDeriv out;
    for (int k = 0; k < 3; ++k) {
      Vec3 ek = Vec3::Zero();
      ek[k] = 1.0;
      out[k] = normal_form_perturbation_derivative(data, x, ek);
    }
    return out;
  };
  model.d2metric = [sc, ric, id](const Vec3&) {
    MetricDeriv2 out;
    for (int k = 0; k < 3; ++k) {
      Vec3 ek = Vec3::Zero();
      ek[k] = 1.0;
      const Vec3 rek = ric * ek;
      for (int l = 0; l < 3; ++l) {
        Vec3 el = Vec3::Zero();
        el[l] = 1.0;
        const Vec3 rel = ric * el;
        Mat3 d2h = (sc / 6.0) * (2.0 * kron(k, l) * id -
                                 ek * el.transpose() - el * ek.transpose());
        d2h -= (2.0 / 3.0) * ric(k, l) * id;
        d2h -= (2.0 / 3.0) * kron(k, l) * ric;
        d2h += (ek * rel.transpose() + el * rek.transpose() +
                rek * el.transpose() + rel * ek.transpose()) /
               3.0;
        out[k][l] = d2h;
      }
    }
    return out;
  };
  model.straight_rays_at_origin = true;
  return model;
}

MetricModel schwarzschild_metric(double mass) {
  const double m = mass;
  auto u_of = [m](const Vec3& x) { return 1.0 + 0.5 * m / x.norm(); };
  auto f = [u_of](const Vec3& x) {
    const double u = u_of(x);
    return u * u * u * u;
  };
  auto df = [m, u_of](const Vec3& x) {
    const double r = x.norm();
    const double u = u_of(x);
    const Vec3 du = (-0.5 * m / (r * r * r)) * x;
    return Vec3(4.0 * u * u * u * du);
  };
  auto d2f = [m, u_of](const Vec3& x) {
    const double r = x.norm();
    const double u = u_of(x);
    const Vec3 du = (-0.5 * m / (r * r * r)) * x;
    const Mat3 d2u =
        -0.5 * m *
        (Mat3::Identity() / (r * r * r) -
         3.0 * x * x.transpose() / (r * r * r * r * r));
    return Mat3(12.0 * u * u * du * du.transpose() + 4.0 * u * u * u * d2u);
  };
  MetricModel model =
      conformal_factor_model("schwarzschild", f, df, std::move(d2f));
  model.conformal_log = [u_of](const Vec3& x) { return 2.0 * std::log(u_of(x)); };
  model.conformal_log_grad = [m, u_of](const Vec3& x) {
    const double r = x.norm();
    return Vec3((-m / (r * r * r) / u_of(x)) * x);
  };
  return model;
}

MetricModel constant_curvature_metric(double scalar_curvature) {
  const double kappa = scalar_curvature / 6.0;
  auto s_of = [kappa](const Vec3& x) {
    return 1.0 + 0.25 * kappa * x.squaredNorm();
  };
  auto f = [s_of](const Vec3& x) {
    const double s = s_of(x);
    return 1.0 / (s * s);
  };
  auto df = [kappa, s_of](const Vec3& x) {
    const double s = s_of(x);
    return Vec3((-kappa / (s * s * s)) * x);
  };
  auto d2f = [kappa, s_of](const Vec3& x) {
    const double s = s_of(x);
    return Mat3((-kappa / (s * s * s)) * Mat3::Identity() +
                (1.5 * kappa * kappa / (s * s * s * s)) * x * x.transpose());
  };
  MetricModel model =
      conformal_factor_model("constant-curvature", f, df, std::move(d2f));
  model.conformal_log = [s_of](const Vec3& x) { return -std::log(s_of(x)); };
  model.conformal_log_grad = [kappa, s_of](const Vec3& x) {
    return Vec3((-0.5 * kappa / s_of(x)) * x);
  };
  return model;
}

MetricModel with_epsilon(const MetricModel& model, double eps) {
  MetricModel out;
  out.name = model.name + "@scaled";
  const auto g = model.metric;
  const auto dg = model.dmetric;
  const auto d2g = model.d2metric;
  out.metric = [g, eps](const Vec3& y) { return g(eps * y); };
  out.dmetric = [dg, eps](const Vec3& y) {
    MetricDeriv d = dg(eps * y);
    for (auto& m : d) m *= eps;
    return d;
  };
  out.d2metric = [d2g, eps](const Vec3& y) {
    MetricDeriv2 d = d2g(eps * y);
    for (auto& row : d)
      for (auto& m : row) m *= eps * eps;
    return d;
  };
  out.straight_rays_at_origin = model.straight_rays_at_origin;
  out.conformal = model.conformal;
  if (model.conformal) {
    const auto w = model.conformal_log;
    const auto gw = model.conformal_log_grad;
    out.conformal_log = [w, eps](const Vec3& y) { return w(eps * y); };
    out.conformal_log_grad = [gw, eps](const Vec3& y) {
      return Vec3(eps * gw(eps * y));
    };
  }
  return out;
}

MetricModel recentered(const MetricModel& model, const Vec3& base) {
  if (base.norm() == 0.0) return model;
  MetricModel out;
  out.name = model.name + "@recentered";
  const auto g = model.metric;
  const auto dg = model.dmetric;
  const auto d2g = model.d2metric;
  out.metric = [g, base](const Vec3& y) { return g(base + y); };
  out.dmetric = [dg, base](const Vec3& y) { return dg(base + y); };
  out.d2metric = [d2g, base](const Vec3& y) { return d2g(base + y); };
  out.straight_rays_at_origin = false;
  out.conformal = model.conformal;
  if (model.conformal) {
    const auto w = model.conformal_log;
    const auto gw = model.conformal_log_grad;
    out.conformal_log = [w, base](const Vec3& y) { return w(base + y); };
    out.conformal_log_grad = [gw, base](const Vec3& y) { return gw(base + y); };
  }
  return out;
}

MetricJet metric_at(const MetricModel& model, const Vec3& x) {
  MetricJet jet;
  jet.g = model.metric(x);
  jet.dg = model.dmetric(x);
  const Mat3 ginv = jet.g.inverse();
  for (int k = 0; k < 3; ++k) {
    Mat3 gamma_k = Mat3::Zero();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double sum = 0.0;
        for (int l = 0; l < 3; ++l)
          sum += ginv(k, l) *
                 (jet.dg[i](j, l) + jet.dg[j](i, l) - jet.dg[l](i, j));
        gamma_k(i, j) = 0.5 * sum;
      }
    jet.christoffel[k] = gamma_k;
  }
  return jet;
}

Mat3 coordinate_ricci(const MetricModel& model, const Vec3& x) {
  const Mat3 g = model.metric(x);
  const MetricDeriv dg = model.dmetric(x);
  const MetricDeriv2 d2g = model.d2metric(x);
  const Mat3 ginv = g.inverse();

  // Christoffel symbols and their coordinate derivatives.
  std::array<Mat3, 3> gamma;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double sum = 0.0;
        for (int l = 0; l < 3; ++l)
          sum += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gamma[k](i, j) = 0.5 * sum;
      }

  MetricDeriv dginv;
  for (int q = 0; q < 3; ++q) dginv[q] = -ginv * dg[q] * ginv;

  // dgamma[q][k](i, j) = d_q Gamma^k_{ij}.
  std::array<std::array<Mat3, 3>, 3> dgamma;
  for (int q = 0; q < 3; ++q)
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double sum = 0.0;
          for (int l = 0; l < 3; ++l) {
            sum += dginv[q](k, l) *
                   (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
            sum += ginv(k, l) * (d2g[q][i](j, l) + d2g[q][j](i, l) -
                                 d2g[q][l](i, j));
          }
          dgamma[q][k](i, j) = 0.5 * sum;
        }

  // Ricci tensor from R^m_{s m n}.
  Mat3 ricci_coord = Mat3::Zero();
  for (int s = 0; s < 3; ++s)
    for (int n = 0; n < 3; ++n) {
      double sum = 0.0;
      for (int m = 0; m < 3; ++m) {
        sum += dgamma[m][m](n, s) - dgamma[n][m](m, s);
        for (int l = 0; l < 3; ++l)
          sum += gamma[m](m, l) * gamma[l](n, s) -
                 gamma[m](n, l) * gamma[l](m, s);
      }
      ricci_coord(s, n) = sum;
    }
  return Mat3(0.5 * (ricci_coord + ricci_coord.transpose()));
}

CurvatureData curvature_at(const MetricModel& model, const Vec3& x) {
  const Mat3 g = model.metric(x);
  const Mat3 ricci_coord = coordinate_ricci(model, x);

  CurvatureData data;
  data.scalar = (g.inverse() * ricci_coord).trace();
  const Mat3 frame = orthonormal_frame(g);
  data.ricci = frame.transpose() * ricci_coord * frame;
  data.ricci = 0.5 * (data.ricci + data.ricci.transpose());
  return data;
}

Mat3 orthonormal_frame(const Mat3& g) {
  Eigen::LLT<Mat3> llt(g);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("orthonormal_frame: metric not positive definite");
  const Mat3 lower = llt.matrixL();
  return lower.transpose().inverse();
}

Vec3 exp_map(const MetricModel& model, const Vec3& base, const Vec3& velocity,
             const ExpMapOptions& options) {
  if (model.straight_rays_at_origin && base.norm() < 1e-14)
    return Vec3(base + velocity);
  if (velocity.norm() == 0.0) return base;

  auto rhs = [&model](const Vec3& y, const Vec3& p, Vec3& dy, Vec3& dp) {
    const MetricJet jet = metric_at(model, y);
    dy = p;
    for (int k = 0; k < 3; ++k) dp[k] = -p.dot(jet.christoffel[k] * p);
  };
  auto integrate = [&rhs, &base, &velocity](int steps) {
    Vec3 y = base, p = velocity;
    const double h = 1.0 / steps;
    Vec3 k1y, k1p, k2y, k2p, k3y, k3p, k4y, k4p;
    for (int s = 0; s < steps; ++s) {
      rhs(y, p, k1y, k1p);
      rhs(y + 0.5 * h * k1y, p + 0.5 * h * k1p, k2y, k2p);
      rhs(y + 0.5 * h * k2y, p + 0.5 * h * k2p, k3y, k3p);
      rhs(y + h * k3y, p + h * k3p, k4y, k4p);
      y += (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
      p += (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    }
    return y;
  };

  int steps = 16;
  Vec3 coarse = integrate(steps);
  while (steps < options.max_steps) {
    steps *= 2;
    const Vec3 fine = integrate(steps);
    if ((fine - coarse).norm() <= options.tolerance) return fine;
    coarse = fine;
  }
  return coarse;
}

double schwarzschild_tangential_ricci(double mass, double r) {
  const double d = 2.0 * r + mass;
  return 64.0 * mass * r * r * r / (d * d * d * d * d * d);
}

} // namespace wlab

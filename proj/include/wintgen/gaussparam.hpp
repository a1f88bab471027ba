#pragma once

/**
 * @file gaussparam.hpp
 * @brief Conformal Gauss parametrization of a surface g with support function tau:
 *        Psi(y, w) = g(y) - tau(y) (g_* grad tau(y) + sqrt(1 - |grad tau|^2) w)
 *        on the unit normal bundle Lambda of g.
 *
 * Lambda is charted near a bundle point p = (y0, w0) by (y1, y2, phi_1..phi_{m-1}):
 * w = sum_a s_a nu_a(y) / |s| with s = s0 + T phi, where nu is a smooth normal
 * frame of g, s0 the fiber coordinates of w0 and T an orthonormal basis of s0's
 * complement. Tangent vectors of Lambda are given in these coordinates.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wintgen/chart.hpp"
#include "wintgen/immersion.hpp"
#include "wintgen/parallel.hpp"

namespace wintgen {

struct SupportedSurface {
  ChartImmersion g;
  ScalarField tau;
};

struct BundlePoint {
  Vec y;
  Vec w;      // ambient unit normal of g at y
  Vec fiber;  // coordinates of w in the normal frame of g at y
};

inline constexpr double kGradientGuard = 1e-10;
inline constexpr double kRegularThreshold = 1e-9;
inline constexpr double kMarginalThreshold = 1e-6;

inline void validate(const SupportedSurface& s) {
  if (s.g.n() != 2) fail(ErrorKind::DimensionError, "supported surface must be a surface (n = 2)");
  if (s.g.N() < 4) fail(ErrorKind::DimensionError, "supported surface needs ambient dimension >= 4");
}

/// Bundle point from fiber coordinates relative to the normal frame of g at y.
inline BundlePoint bundle_point(const SupportedSurface& s, const Vec& y, const Vec& fiber) {
  const FramedPoint fp = frame_at(s.g, y);
  if (fiber.size() != fp.normal.cols()) fail(ErrorKind::DimensionError, "fiber coordinates have wrong dimension");
  if (fiber.norm() == 0.0) fail(ErrorKind::InvalidInput, "fiber coordinates must be nonzero");
  const Vec f = fiber.normalized();
  return BundlePoint{y, fp.normal * f, f};
}

/// Pointwise data of (g, tau) at a bundle point, all in chart coordinates of g.
struct GaussData {
  FramedPoint fp;
  Mat jac;                  // N x 2
  Mat metric, metric_inv;   // 2 x 2
  double tau = 0.0;
  Vec dtau;                 // coordinate differential
  Vec grad;                 // metric gradient (coordinates)
  Vec gstar_grad;           // g_* grad tau (ambient)
  double grad_sq = 0.0;
  double rho = 0.0;         // sqrt(1 - |grad tau|^2)
  Mat hess;                 // covariant Hessian, lower indices
  std::vector<Vec> alpha;   // alpha_g(d_i, d_j), index i * 2 + j
  Mat aw;                   // <alpha(d_i, d_j), w>
  Vec w;
};

inline GaussData gauss_data(const SupportedSurface& s, const BundlePoint& p) {
  validate(s);
  GaussData d;
  const JetVector gj = s.g.taylor(p.y, 2);
  d.fp = frame_from_jets(gj, p.y, 2);
  const int big_n = s.g.N();
  if (p.w.size() != big_n) fail(ErrorKind::DimensionError, "bundle point normal has wrong dimension");
  if (std::abs(p.w.norm() - 1.0) > 1e-12) fail(ErrorKind::InvalidInput, "bundle point normal is not a unit vector");
  if ((d.fp.tangent.transpose() * p.w).norm() > 1e-10) fail(ErrorKind::InvalidInput, "bundle point vector is not normal to g");
  d.w = p.w;
  d.jac = detail::jacobian_of(gj, 2);
  d.metric = d.jac.transpose() * d.jac;
  d.metric_inv = d.metric.inverse();
  const Jet tj = s.tau.taylor(p.y, 2);
  d.tau = tj.value();
  if (!(d.tau > 0.0)) fail(ErrorKind::InvalidInput, "tau must be positive");
  d.dtau = (Vec(2) << tj.d(0), tj.d(1)).finished();
  d.grad = d.metric_inv * d.dtau;
  d.gstar_grad = d.jac * d.grad;
  d.grad_sq = d.dtau.dot(d.grad);
  if (std::sqrt(d.grad_sq) >= 1.0 - kGradientGuard) fail(ErrorKind::GradientTooLarge, "|grad tau| >= 1");
  d.rho = std::sqrt(1.0 - d.grad_sq);
  const Mat proj_t = d.fp.tangent * d.fp.tangent.transpose();
  d.hess.resize(2, 2);
  d.aw.resize(2, 2);
  d.alpha.resize(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Vec dd = detail::second_partial(gj, i, j);
      // Christoffel symbols of the first kind are <d_ij g, d_l g>
      const Vec gamma = d.metric_inv * (d.jac.transpose() * dd);
      d.hess(i, j) = tj.d2(i, j) - gamma.dot(d.dtau);
      d.alpha[i * 2 + j] = dd - proj_t * dd;
      d.aw(i, j) = d.alpha[i * 2 + j].dot(d.w);
    }
  return d;
}

struct RegularityInfo {
  Mat P;                    // 2 x 2 in the orthonormal frame of g at y
  double det = 0.0;
  double relative_det = 0.0;  // |det P| / (1 + |P|_F^2)
  double asymmetry = 0.0;
  bool regular = false;
  bool marginal = false;
};

/// P X = X - <X, grad tau> grad tau - tau Hess(tau) X + tau rho A_w X.
inline Mat regularity_operator_coords(const GaussData& d) {
  return Mat::Identity(2, 2) - d.grad * d.dtau.transpose() - d.tau * d.metric_inv * d.hess +
         d.tau * d.rho * d.metric_inv * d.aw;
}

inline RegularityInfo regularity_from_data(const GaussData& d) {
  const Mat c = d.fp.chart_frame;
  Mat p = c.transpose() * d.metric * regularity_operator_coords(d) * c;
  RegularityInfo r;
  r.asymmetry = max_abs(p - p.transpose());
  r.P = 0.5 * (p + p.transpose());
  r.det = r.P.determinant();
  r.relative_det = std::abs(r.det) / (1.0 + r.P.squaredNorm());
  r.regular = r.relative_det > kRegularThreshold;
  r.marginal = r.regular && r.relative_det <= kMarginalThreshold;
  return r;
}

inline RegularityInfo regularity_operator(const SupportedSurface& s, const BundlePoint& p) {
  return regularity_from_data(gauss_data(s, p));
}

inline Vec psi_eval(const SupportedSurface& s, const BundlePoint& p) {
  const GaussData d = gauss_data(s, p);
  return d.fp.position - d.tau * (d.gstar_grad + d.rho * d.w);
}

inline Vec gauss_map(const SupportedSurface& s, const BundlePoint& p) {
  const GaussData d = gauss_data(s, p);
  if (!regularity_from_data(d).regular) fail(ErrorKind::Irregular, "Psi is not regular at this bundle point");
  return d.gstar_grad + d.rho * d.w;
}

/// Psi, its Gauss map and w as jets in the Lambda chart around p.
struct LambdaJets {
  int dim = 0;     // 2 + (m - 1)
  JetVector psi;
  JetVector gauss;
  JetVector w;
  Jet tau;
};

namespace detail {

/// g, g_* grad tau, rho, tau and a normal frame of g as order-`order` jets in y around y0.
struct SurfaceJets {
  JetVector g, gstar;
  Jet tau, rho;
  std::vector<JetVector> nu;
};

inline SurfaceJets surface_jets(const SupportedSurface& s, const Vec& y0, int order,
                                const std::vector<int>* pivots = nullptr) {
  validate(s);
  if (order + 1 > s.g.max_order() || order + 1 > s.tau.max_order())
    fail(ErrorKind::JetOrderExceeded, "surface data does not provide enough derivatives");
  const int big_n = s.g.N();
  const JetVector gy = s.g.taylor(y0, order + 1);
  const Jet ty = s.tau.taylor(y0, order + 1);
  SurfaceJets out;
  if (pivots) {
    out.nu = normal_frame_jets(gy, 2, *pivots);
  } else {
    const FramedPoint fp = frame_from_jets(gy, y0, 2);
    out.nu = normal_frame_jets(gy, 2, fp.normal_pivots);
  }
  std::vector<JetVector> dg;
  for (int i = 0; i < 2; ++i) dg.push_back(truncated(derivative(gy, i), order));
  std::vector<Jet> metric;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) metric.push_back(dot(dg[i], dg[j]));
  const std::vector<Jet> ginv = inverse(metric, 2);
  std::vector<Jet> dtau;
  for (int i = 0; i < 2; ++i) dtau.push_back(ty.derivative(i).truncated(order));
  Jet grad_sq(2, order, 0.0);
  out.gstar.assign(big_n, Jet(2, order, 0.0));
  for (int i = 0; i < 2; ++i) {
    Jet gi(2, order, 0.0);
    for (int j = 0; j < 2; ++j) gi += ginv[i * 2 + j] * dtau[j];
    grad_sq += gi * dtau[i];
    axpy(out.gstar, gi, dg[i]);
  }
  if (!(ty.value() > 0.0)) fail(ErrorKind::InvalidInput, "tau must be positive");
  if (std::sqrt(grad_sq.value()) >= 1.0 - kGradientGuard) fail(ErrorKind::GradientTooLarge, "|grad tau| >= 1");
  out.rho = sqrt(1.0 - grad_sq);
  out.g = truncated(gy, order);
  out.tau = ty.truncated(order);
  return out;
}

}  // namespace detail

inline LambdaJets lambda_jets(const SupportedSurface& s, const BundlePoint& p, int order) {
  const detail::SurfaceJets sj = detail::surface_jets(s, p.y, order);
  const int big_n = s.g.N();
  const int m = big_n - 2;
  const int dim = 2 + (m - 1);
  const std::vector<int> ymap{0, 1};
  auto liftv = [&](const JetVector& v) { return lifted(v, dim, ymap); };

  // fiber coordinates around s0
  Mat nu0(big_n, m);
  for (int a = 0; a < m; ++a)
    for (int k = 0; k < big_n; ++k) nu0(k, a) = sj.nu[a][k].value();
  const Vec s0 = nu0.transpose() * p.w;
  if (std::abs(s0.norm() - 1.0) > 1e-10) fail(ErrorKind::InvalidInput, "bundle point vector is not a unit normal of g");
  const Mat t = orthonormal_complement(s0);
  std::vector<double> base(dim, 0.0);
  base[0] = p.y(0);
  base[1] = p.y(1);
  const JetVector z = seed_variables(base, order);
  JetVector sv;
  for (int a = 0; a < m; ++a) {
    Jet sa(dim, order, s0(a));
    for (int b = 0; b < m - 1; ++b) sa.axpy(t(a, b), z[2 + b]);
    sv.push_back(sa);
  }
  const Jet inv_len = sqrt(dot(sv, sv)).reciprocal();
  JetVector w(big_n, Jet(dim, order, 0.0));
  for (int a = 0; a < m; ++a) axpy(w, sv[a] * inv_len, liftv(sj.nu[a]));

  LambdaJets out;
  out.dim = dim;
  out.tau = sj.tau.lifted(dim, ymap);
  out.w = w;
  out.gauss = liftv(sj.gstar);
  axpy(out.gauss, sj.rho.lifted(dim, ymap), w);
  out.psi = liftv(sj.g);
  axpy(out.psi, -1.0 * out.tau, out.gauss);
  return out;
}

namespace detail {

inline Mat first_derivatives(const JetVector& v, int dim) {
  Mat d(static_cast<Eigen::Index>(v.size()), dim);
  for (std::size_t a = 0; a < v.size(); ++a)
    for (int c = 0; c < dim; ++c) d(static_cast<Eigen::Index>(a), c) = v[a].d(c);
  return d;
}

}  // namespace detail

/// dPsi(V) by differentiating the jets of Psi in the Lambda chart.
inline Vec dpsi_jet(const SupportedSurface& s, const BundlePoint& p, const Vec& v) {
  const LambdaJets lj = lambda_jets(s, p, 1);
  if (v.size() != lj.dim) fail(ErrorKind::DimensionError, "tangent vector of Lambda has wrong dimension");
  return detail::first_derivatives(lj.psi, lj.dim) * v;
}

/**
 * Closed form: dPsi(V) = g_* P Z - tau alpha_g(Z, grad tau) - <Z, grad tau> rho w
 *   + tau <Hess(tau) Z, grad tau> w / rho - tau rho nabla_perp w / dt,
 * with Z the horizontal part of V and nabla_perp w / dt the normal part of dw/dt.
 */
inline Vec dpsi(const SupportedSurface& s, const BundlePoint& p, const Vec& v) {
  const GaussData d = gauss_data(s, p);
  const LambdaJets lj = lambda_jets(s, p, 1);
  if (v.size() != lj.dim) fail(ErrorKind::DimensionError, "tangent vector of Lambda has wrong dimension");
  const Vec z = v.head(2);
  const Vec wdot = detail::first_derivatives(lj.w, lj.dim) * v;
  const Vec wperp = wdot - d.fp.tangent * (d.fp.tangent.transpose() * wdot);
  Vec alpha_zg = Vec::Zero(s.g.N());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) alpha_zg += z(i) * d.grad(j) * d.alpha[i * 2 + j];
  const double z_grad = d.dtau.dot(z);
  const double hess_zg = z.dot(d.hess * d.grad);
  return d.jac * (regularity_operator_coords(d) * z) - d.tau * alpha_zg - z_grad * d.rho * d.w +
         d.tau * hess_zg / d.rho * d.w - d.tau * d.rho * wperp;
}

/// N x dim(Lambda) differential of Psi in the Lambda chart.
inline Mat dpsi_matrix(const SupportedSurface& s, const BundlePoint& p) {
  const LambdaJets lj = lambda_jets(s, p, 1);
  return detail::first_derivatives(lj.psi, lj.dim);
}

inline double vertical_principal_curvature(const SupportedSurface& s, const BundlePoint& p) {
  if (!regularity_operator(s, p).regular) fail(ErrorKind::Irregular, "Psi is not regular at this bundle point");
  const LambdaJets lj = lambda_jets(s, p, 1);
  const Vec dpv = detail::first_derivatives(lj.psi, lj.dim).col(2);
  const Vec dnv = detail::first_derivatives(lj.gauss, lj.dim).col(2);
  return -dnv.dot(dpv) / dpv.squaredNorm();
}

struct PsiShapeOperator {
  Mat A;               // (N-1) x (N-1), orthonormal basis of T Lambda: vertical directions first
  Mat basis;           // chart coordinates of that basis
  Mat vertical_block;  // (m-1) x (m-1)
  Mat a_chart;         // A^Psi in Lambda chart coordinates
  Mat dpsi;            // N x dim differential used for the solve
  double asymmetry = 0.0;
  double lsq_residual = 0.0;
  double condition = 0.0;
};

/**
 * A^Psi from dN^Psi = -Psi_* A^Psi, solved in least squares against the
 * assembled differential and expressed in a basis orthonormal for Psi's
 * induced metric.
 */
inline PsiShapeOperator shape_operator_psi(const SupportedSurface& s, const BundlePoint& p) {
  if (!regularity_operator(s, p).regular) fail(ErrorKind::Irregular, "Psi is not regular at this bundle point");
  const LambdaJets lj = lambda_jets(s, p, 1);
  const int dim = lj.dim;
  const Mat dp = detail::first_derivatives(lj.psi, dim);
  const Mat dn = detail::first_derivatives(lj.gauss, dim);
  Eigen::JacobiSVD<Mat> svd(dp, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  PsiShapeOperator out;
  out.condition = sv(0) / sv(sv.size() - 1);
  if (!(out.condition <= 1e8)) fail(ErrorKind::IllConditioned, "differential of Psi is ill-conditioned");
  const Mat a_chart = -svd.solve(dn);
  out.lsq_residual = max_abs(dp * a_chart + dn);
  // metric Gram-Schmidt, vertical directions first
  const Mat gm = dp.transpose() * dp;
  std::vector<int> order;
  for (int c = 2; c < dim; ++c) order.push_back(c);
  order.push_back(0);
  order.push_back(1);
  Mat b = Mat::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    Vec v = Vec::Unit(dim, order[k]);
    for (int pass = 0; pass < 2; ++pass)
      for (int l = 0; l < k; ++l) v -= (b.col(l).dot(gm * v)) * b.col(l);
    b.col(k) = v / std::sqrt(v.dot(gm * v));
  }
  const Mat a = b.transpose() * gm * a_chart * b;
  out.asymmetry = max_abs(a - a.transpose());
  out.A = 0.5 * (a + a.transpose());
  out.basis = b;
  out.a_chart = a_chart;
  out.dpsi = dp;
  out.vertical_block = out.A.topLeftCorner(dim - 2, dim - 2);
  return out;
}

/// Constant-tau focal parameter: root of lambda_min(I + t A_w) for t in [lo, hi].
inline double focal_constant_tau(const ChartImmersion& g, const BundlePoint& p, double lo, double hi) {
  const GaussData d = gauss_data(SupportedSurface{g, ScalarField("one", [](const JetVector& x) {
                                                   return constant_like(x[0], 1.0);
                                                 })},
                                 p);
  const Mat c = d.fp.chart_frame;
  const Mat aw = c.transpose() * d.aw * c;  // A_w in the orthonormal frame
  auto lmin = [&](double t) {
    const SymEig e = sym_eig(Mat::Identity(2, 2) + t * aw);
    return e.values(1);
  };
  double flo = lmin(lo);
  if ((flo > 0) == (lmin(hi) > 0)) fail(ErrorKind::InvalidInput, "no focal parameter in the bracket");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = lmin(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Sampling of the regular set

struct SampleStats {
  std::size_t total = 0;
  std::size_t accepted = 0;
  std::size_t irregular = 0;
  std::size_t marginal = 0;
  std::size_t gradient_too_large = 0;
  std::size_t errors = 0;

  double rejected_fraction() const {
    return total == 0 ? 0.0 : static_cast<double>(total - accepted) / static_cast<double>(total);
  }
};

struct Lambda0Sample {
  std::vector<BundlePoint> points;
  std::vector<Vec> irregular_bases;  // base points with an irregular or marginal fiber sample
  SampleStats stats;
};

namespace detail {

/// Kronecker (R_d) sequence in [0, 1)^dim with a seeded offset.
class KroneckerSequence {
 public:
  KroneckerSequence(int dim, std::uint64_t seed) : step_(dim), offset_(dim) {
    // phi_d: positive root of x^{d+1} = x + 1
    double phi = 2.0;
    for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
    for (int j = 0; j < dim; ++j) step_[j] = std::fmod(std::pow(1.0 / phi, j + 1), 1.0);
    std::uint64_t state = seed;
    for (int j = 0; j < dim; ++j) offset_[j] = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
  }

  std::vector<double> at(std::uint64_t index) const {
    std::vector<double> u(step_.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double x = offset_[j] + static_cast<double>(index + 1) * step_[j];
      u[j] = x - std::floor(x);
    }
    return u;
  }

 private:
  std::vector<double> step_, offset_;
};

/// Uniform point on S^{m-1}: Box-Muller on a low-discrepancy point.
inline Vec sphere_point(const KroneckerSequence& seq, std::uint64_t index, int m) {
  const auto u = seq.at(index);
  Vec g(m);
  for (int k = 0; k < m; k += 2) {
    const double r = std::sqrt(-2.0 * std::log(1.0 - u[k]));
    const double t = 2.0 * M_PI * u[k + 1];
    g(k) = r * std::cos(t);
    if (k + 1 < m) g(k + 1) = r * std::sin(t);
  }
  if (g.norm() == 0.0) g(0) = 1.0;
  return g.normalized();
}

}  // namespace detail

inline Lambda0Sample sample_lambda0(const SupportedSurface& s, const std::vector<Vec>& base_points, int fiber_count,
                                    std::uint64_t seed) {
  validate(s);
  Lambda0Sample out;
  if (base_points.empty() || fiber_count <= 0) return out;
  const int m = s.g.N() - 2;
  const detail::KroneckerSequence seq(2 * ((m + 1) / 2), seed);
  const std::size_t total = base_points.size() * static_cast<std::size_t>(fiber_count);
  enum class Outcome { Accepted, Irregular, Marginal, Gradient, Error };
  std::vector<Outcome> outcome(total, Outcome::Error);
  std::vector<std::optional<BundlePoint>> pts(total);
  parallel_for(total, [&](std::size_t i) {
    const Vec& y = base_points[i / static_cast<std::size_t>(fiber_count)];
    try {
      const BundlePoint p = bundle_point(s, y, detail::sphere_point(seq, i, m));
      const RegularityInfo r = regularity_operator(s, p);
      if (!r.regular) outcome[i] = Outcome::Irregular;
      else if (r.marginal) outcome[i] = Outcome::Marginal;
      else {
        outcome[i] = Outcome::Accepted;
        pts[i] = p;
      }
    } catch (const GeometryError& e) {
      outcome[i] = e.kind() == ErrorKind::GradientTooLarge ? Outcome::Gradient : Outcome::Error;
    }
  });
  out.stats.total = total;
  for (std::size_t i = 0; i < total; ++i) {
    switch (outcome[i]) {
      case Outcome::Accepted: ++out.stats.accepted; out.points.push_back(*pts[i]); break;
      case Outcome::Irregular: ++out.stats.irregular; break;
      case Outcome::Marginal: ++out.stats.marginal; break;
      case Outcome::Gradient: ++out.stats.gradient_too_large; break;
      case Outcome::Error: ++out.stats.errors; break;
    }
  }
  for (std::size_t b = 0; b < base_points.size(); ++b)
    for (int k = 0; k < fiber_count; ++k)
      if (const Outcome o = outcome[b * static_cast<std::size_t>(fiber_count) + static_cast<std::size_t>(k)];
          o == Outcome::Irregular || o == Outcome::Marginal) {
        out.irregular_bases.push_back(base_points[b]);
        break;
      }
  return out;
}

// ---------------------------------------------------------------------------
// Invariant suite

struct GaussVerifyReport {
  SampleStats stats;
  std::size_t directions = 0;
  double max_dpsi_discrepancy = 0.0;
  double max_normal_pairing = 0.0;
  double max_unit_error = 0.0;
  double max_vertical_error = 0.0;
  double max_shape_asymmetry = 0.0;
  double max_vertical_block_error = 0.0;
  double max_lsq_residual = 0.0;
  std::vector<Vec> irregular_bases;
  std::vector<std::string> warnings;

  double worst() const {
    return std::max({max_dpsi_discrepancy, max_normal_pairing, max_unit_error, max_vertical_error,
                     max_shape_asymmetry, max_vertical_block_error, max_lsq_residual});
  }
};

/**
 * Runs the closed-form differential, Gauss-map orthogonality, vertical
 * curvature and shape-operator checks over regular samples of Lambda.
 * `directions` random tangent vectors are drawn per accepted bundle point.
 */
inline GaussVerifyReport verify_gauss(const SupportedSurface& s, const std::vector<Vec>& base_points,
                                      int fiber_count, int directions, std::uint64_t seed) {
  GaussVerifyReport rep;
  const Lambda0Sample sample = sample_lambda0(s, base_points, fiber_count, seed);
  rep.stats = sample.stats;
  rep.irregular_bases = sample.irregular_bases;
  if (sample.stats.gradient_too_large > 0)
    rep.warnings.push_back(std::to_string(sample.stats.gradient_too_large) +
                           " samples excluded where |grad tau| >= 1");
  if (sample.stats.irregular > 0)
    rep.warnings.push_back(std::to_string(sample.stats.irregular) + " irregular samples excluded");
  if (sample.stats.errors > 0)
    rep.warnings.push_back(std::to_string(sample.stats.errors) + " samples could not be evaluated");
  if (sample.stats.marginal > 0)
    rep.warnings.push_back(std::to_string(sample.stats.marginal) + " samples excluded near the focal set");
  const std::size_t count = sample.points.size();
  struct Local {
    double dpsi = 0, pairing = 0, unit = 0, vertical = 0, asym = 0, block = 0, lsq = 0;
  };
  std::vector<Local> local(count);
  parallel_for(count, [&](std::size_t i) {
    const BundlePoint& p = sample.points[i];
    Local& l = local[i];
    std::mt19937_64 rng(seed ^ (0x632be59bd9b4e019ULL * (i + 1)));
    std::normal_distribution<double> nd;
    const LambdaJets lj = lambda_jets(s, p, 1);
    const Mat dp = detail::first_derivatives(lj.psi, lj.dim);
    const Vec np = gauss_map(s, p);
    l.unit = std::abs(np.norm() - 1.0);
    for (int c = 0; c < lj.dim; ++c) l.pairing = std::max(l.pairing, std::abs(dp.col(c).dot(np)));
    for (int k = 0; k < directions; ++k) {
      Vec v(lj.dim);
      for (int c = 0; c < lj.dim; ++c) v(c) = nd(rng);
      v.normalize();
      l.dpsi = std::max(l.dpsi, (dpsi(s, p, v) - dp * v).norm());
      l.pairing = std::max(l.pairing, std::abs((dp * v).dot(np)));
    }
    const double tau = lj.tau.value();
    l.vertical = std::abs(vertical_principal_curvature(s, p) - 1.0 / tau);
    const PsiShapeOperator so = shape_operator_psi(s, p);
    l.asym = so.asymmetry;
    l.lsq = so.lsq_residual;
    const Eigen::Index k = so.vertical_block.rows();
    l.block = max_abs(so.vertical_block - Mat::Identity(k, k) / tau);
  });
  for (const auto& l : local) {
    rep.max_dpsi_discrepancy = std::max(rep.max_dpsi_discrepancy, l.dpsi);
    rep.max_normal_pairing = std::max(rep.max_normal_pairing, l.pairing);
    rep.max_unit_error = std::max(rep.max_unit_error, l.unit);
    rep.max_vertical_error = std::max(rep.max_vertical_error, l.vertical);
    rep.max_shape_asymmetry = std::max(rep.max_shape_asymmetry, l.asym);
    rep.max_vertical_block_error = std::max(rep.max_vertical_block_error, l.block);
    rep.max_lsq_residual = std::max(rep.max_lsq_residual, l.lsq);
  }
  rep.directions = count * static_cast<std::size_t>(directions);
  return rep;
}

}  // namespace wintgen

#pragma once

/**
 * @file immersion.hpp
 * @brief Extrinsic geometry of a chart: adapted frames, second fundamental
 *        form, intrinsic curvature from metric jets, DDVV scans, Dupin checks,
 *        the elliptic structure J and curvature ellipses of surfaces.
 */

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wintgen/chart.hpp"
#include "wintgen/parallel.hpp"
#include "wintgen/pointwise.hpp"

namespace wintgen {

struct FramedPoint {
  Vec x;
  Vec position;
  Mat tangent;      // N x n orthonormal
  Mat chart_frame;  // n x n, tangent = jacobian * chart_frame
  Mat normal;       // N x m orthonormal
  std::vector<int> normal_pivots;
  PointConfig cfg;
};

namespace detail {

inline Mat jacobian_of(const JetVector& f, int n) {
  Mat j(static_cast<Eigen::Index>(f.size()), n);
  for (std::size_t a = 0; a < f.size(); ++a)
    for (int i = 0; i < n; ++i) j(static_cast<Eigen::Index>(a), i) = f[a].d(i);
  return j;
}

inline Vec second_partial(const JetVector& f, int i, int j) {
  Vec v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t a = 0; a < f.size(); ++a) v(static_cast<Eigen::Index>(a)) = f[a].d2(i, j);
  return v;
}

inline Vec third_partial(const JetVector& f, int i, int j, int k) {
  Vec v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t a = 0; a < f.size(); ++a) v(static_cast<Eigen::Index>(a)) = f[a].d3(i, j, k);
  return v;
}

inline void check_rank(const Mat& j) {
  Eigen::JacobiSVD<Mat> svd(j);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= 1e-8 * s(0))
    fail(ErrorKind::RankDeficient, "chart differential is not of full rank");
}

}  // namespace detail

/// Frames and the shape operators from an order >= 2 expansion of the chart at x.
inline FramedPoint frame_from_jets(const JetVector& f, const Vec& x, int n) {
  const int big_n = static_cast<int>(f.size());
  const Mat j = detail::jacobian_of(f, n);
  detail::check_rank(j);
  FramedPoint fp;
  fp.x = x;
  fp.position.resize(big_n);
  for (int a = 0; a < big_n; ++a) fp.position(a) = f[a].value();
  fp.tangent = gram_schmidt_columns(j, 1e-12);
  fp.chart_frame = (j.transpose() * j).ldlt().solve(j.transpose() * fp.tangent);
  fp.normal_pivots = complement_pivots(fp.tangent);
  fp.normal = orthonormal_complement(fp.tangent);
  const int m = big_n - n;
  PointConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.A.assign(m, Mat::Zero(n, n));
  std::vector<Vec> d2(n * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) d2[i * n + k] = fp.normal.transpose() * detail::second_partial(f, i, k);
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) {
      Vec s = Vec::Zero(m);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) s += fp.chart_frame(i, p) * fp.chart_frame(k, q) * d2[i * n + k];
      for (int a = 0; a < m; ++a) cfg.A[a](p, q) = cfg.A[a](q, p) = s(a);
    }
  cfg.ambient = AmbientData{fp.position, fp.tangent, fp.normal};
  fp.cfg = std::move(cfg);
  return fp;
}

inline FramedPoint frame_at(const ChartImmersion& f, const Vec& x) {
  return frame_from_jets(f.taylor(x, 2), x, f.n());
}

inline PointConfig second_fundamental_form_at(const ChartImmersion& f, const Vec& x) {
  return frame_at(f, x).cfg;
}

/**
 * Smooth normal frame near a point as jets: Gram-Schmidt on the coordinate
 * tangents followed by the standard vectors at `pivots` (chosen once at the
 * base point, so the frame is a smooth field). `f` must have order >= 1; the
 * frame has one order less.
 */
inline std::vector<JetVector> normal_frame_jets(const JetVector& f, int n, const std::vector<int>& pivots) {
  const int big_n = static_cast<int>(f.size());
  std::vector<JetVector> basis;
  for (int i = 0; i < n; ++i) {
    JetVector v = derivative(f, i);
    for (const auto& q : basis) axpy(v, -dot(q, v), q);
    basis.push_back(normalized(v));
  }
  const Jet& like = basis[0][0];
  std::vector<JetVector> normals;
  for (int p : pivots) {
    JetVector v(big_n, constant_like(like, 0.0));
    v[p] = constant_like(like, 1.0);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) axpy(v, -dot(q, v), q);
    v = normalized(v);
    basis.push_back(v);
    normals.push_back(std::move(v));
  }
  return normals;
}

/**
 * Mean curvature vector field as ambient-valued jets of the given order,
 * H = (1/n) g^{kl} P_perp(d_k d_l f); needs chart order order + 2.
 */
inline JetVector mean_curvature_jets(const JetVector& f, int n) {
  const int big_n = static_cast<int>(f.size());
  std::vector<JetVector> df;
  for (int i = 0; i < n; ++i) df.push_back(derivative(f, i));
  std::vector<Jet> g;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.push_back(dot(df[i], df[j]));
  const std::vector<Jet> ginv = inverse(g, n);
  const int order = f[0].order() - 2;
  JetVector t(big_n, Jet(f[0].dim(), order, 0.0));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) axpy(t, ginv[k * n + l], derivative(df[k], l));
  JetVector h = t;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) axpy(h, -(ginv[k * n + l] * dot(df[l], t)), df[k]);
  return scaled(h, 1.0 / n);
}

inline JetVector mean_curvature_jet(const ChartImmersion& f, const Vec& x, int order) {
  return mean_curvature_jets(f.taylor(x, order + 2), f.n());
}

/**
 * Sectional curvature of the induced metric on the plane of the orthonormal
 * frame vectors e_p, e_q, from metric jets and Christoffel symbols of the
 * first kind. Needs chart order 3.
 */
inline double intrinsic_sectional_curvature(const ChartImmersion& f, const Vec& x, int p, int q) {
  const int n = f.n();
  const JetVector fj = f.taylor(x, 3);
  std::vector<JetVector> df;
  for (int i = 0; i < n; ++i) df.push_back(derivative(fj, i));
  std::vector<Jet> g(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g[i * n + j] = dot(df[i], df[j]);
  Mat gv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gv(i, j) = g[i * n + j].value();
  const Mat gi = gv.inverse();
  // gamma[(l*n + j)*n + k] = Gamma_{l,jk}, an order-1 jet
  std::vector<Jet> gamma(n * n * n);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        gamma[(l * n + j) * n + k] = 0.5 * (g[k * n + l].derivative(j) + g[j * n + l].derivative(k) -
                                            g[j * n + k].derivative(l));
  auto G = [&](int l, int j, int k) -> const Jet& { return gamma[(l * n + j) * n + k]; };
  auto riemann = [&](int l, int i, int j, int k) {
    double r = G(l, j, k).d(i) - G(l, i, k).d(j);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        r += gi(a, b) * (G(b, i, k).value() * G(a, j, l).value() - G(b, j, k).value() * G(a, i, l).value());
    return r;
  };
  const FramedPoint fp = frame_from_jets(fj, x, n);
  const Vec X = fp.chart_frame.col(p), Y = fp.chart_frame.col(q);
  double k = 0.0;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m) k += riemann(l, i, j, m) * X(i) * Y(j) * Y(m) * X(l);
  return k;
}

/// Gauss-equation value c + <a(X,X),a(Y,Y)> - |a(X,Y)|^2 on frame vectors e_p, e_q.
inline double gauss_sectional_curvature(const PointConfig& cfg, int p, int q) {
  const Vec ep = Vec::Unit(cfg.n, p), eq = Vec::Unit(cfg.n, q);
  const Vec xx = alpha(cfg, ep, ep), yy = alpha(cfg, eq, eq), xy = alpha(cfg, ep, eq);
  return cfg.c + xx.dot(yy) - xy.squaredNorm();
}

// ---------------------------------------------------------------------------
// Scans

struct ScanRecord {
  Vec x;
  bool ok = false;
  std::string error;
  double residual = 0.0;
  bool wintgen = false;
  std::optional<CaseLabel> label;  // set at Wintgen ideal points
  int nu = 0;
  int dim_n1 = 0;
};

struct ScanReport {
  std::vector<ScanRecord> records;
  double max_abs_residual = 0.0;
  std::map<std::string, int> histogram;  // case labels plus NotWintgen / Error
};

inline ScanRecord scan_point(const ChartImmersion& f, const Vec& x, double tol) {
  ScanRecord r;
  r.x = x;
  try {
    const PointConfig cfg = second_fundamental_form_at(f, x);
    r.residual = ddvv_residual(cfg);
    r.nu = relative_nullity(cfg, tol).nu;
    r.dim_n1 = first_normal_dim(cfg, tol);
    r.wintgen = is_wintgen_ideal(cfg, tol);
    if (r.wintgen) r.label = wintgen_normal_form(cfg, tol).label;
    r.ok = true;
  } catch (const GeometryError& e) {
    r.error = std::string(to_string(e.kind()));
  }
  return r;
}

inline ScanReport ddvv_scan(const ChartImmersion& f, const GridSpec& grid, double tol) {
  ScanReport rep;
  rep.records.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { rep.records[i] = scan_point(f, grid.point(i), tol); });
  for (const auto& r : rep.records) {
    if (!r.ok) {
      ++rep.histogram["Error"];
      continue;
    }
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(r.residual));
    ++rep.histogram[r.label ? std::string(to_string(*r.label)) : std::string("NotWintgen")];
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Dupin principal normals

inline constexpr int kMeanCurvatureNormal = -1;

struct DupinResult {
  double norm = 0.0;  // max over an orthonormal basis T of E_eta of |nabla_perp_T eta|
  int multiplicity = 0;
  bool parallel = false;
};

namespace detail {

inline Vec ambient_normal(const FramedPoint& fp, const Vec& eta) { return fp.normal * eta; }

inline std::optional<PrincipalNormal> select_principal(const FramedPoint& fp, int selector, double tol) {
  const auto pn = principal_normals(fp.cfg, tol);
  if (selector == kMeanCurvatureNormal) {
    const Vec h = mean_curvature_vector(fp.cfg);
    const double t = 1e-6 * (1.0 + alpha_norm(fp.cfg));
    std::optional<PrincipalNormal> best;
    for (const auto& p : pn)
      if ((p.eta - h).norm() <= t && (!best || p.multiplicity > best->multiplicity)) best = p;
    return best;
  }
  if (selector < 0 || selector >= static_cast<int>(pn.size())) return std::nullopt;
  return pn[selector];
}

}  // namespace detail

/**
 * Normal-connection derivative of a principal normal along its own
 * eigendistribution. The mean curvature normal is differentiated exactly from
 * jets; other principal normals by central differences of the ambient vector
 * field, matched at neighbouring points by proximity.
 */
inline DupinResult dupin_check(const ChartImmersion& f, const Vec& x, int selector, double tol) {
  const FramedPoint fp = frame_at(f, x);
  const auto pn = detail::select_principal(fp, selector, tol);
  if (!pn) fail(ErrorKind::NoPrincipalNormal, "no principal normal matches the selector");
  DupinResult out;
  out.multiplicity = pn->multiplicity;
  const Vec eta = detail::ambient_normal(fp, pn->eta);
  const Mat proj = Mat::Identity(f.N(), f.N()) - fp.tangent * fp.tangent.transpose();
  for (int b = 0; b < pn->basis.cols(); ++b) {
    const Vec t = fp.chart_frame * pn->basis.col(b);  // chart-coordinate direction of a unit vector in E
    Vec deriv(f.N());
    if (selector == kMeanCurvatureNormal && f.max_order() >= 3) {
      const JetVector h = mean_curvature_jet(f, x, 1);
      for (int a = 0; a < f.N(); ++a) {
        double s = 0.0;
        for (int i = 0; i < f.n(); ++i) s += h[a].d(i) * t(i);
        deriv(a) = s;
      }
    } else {
      const double step = 1e-4;
      Vec side[2];
      for (int sgn = 0; sgn < 2; ++sgn) {
        const Vec xs = x + (sgn == 0 ? step : -step) * t;
        const FramedPoint q = frame_at(f, xs);
        const auto cand = principal_normals(q.cfg, tol);
        double best = 1e300;
        for (const auto& c : cand) {
          if (c.multiplicity != pn->multiplicity) continue;
          const Vec v = detail::ambient_normal(q, c.eta);
          if ((v - eta).norm() < best) {
            best = (v - eta).norm();
            side[sgn] = v;
          }
        }
        if (best > 1e-2 * (1.0 + eta.norm())) fail(ErrorKind::NoPrincipalNormal, "principal normal not continued");
      }
      deriv = (side[0] - side[1]) / (2 * step);
    }
    out.norm = std::max(out.norm, (proj * deriv).norm());
  }
  out.parallel = out.norm <= tol;
  return out;
}

// ---------------------------------------------------------------------------
// Elliptic structure and curvature ellipses

struct EllipticStructure {
  Mat J;            // 2 x 2 in the basis below
  Mat plane;        // n x 2 orthonormal basis of the complement of the relative nullity (frame coordinates)
  bool orthogonal = false;
  double residual = 0.0;  // max |alpha(X,X) + alpha(JX,JX)| over the basis
};

/**
 * Solves alpha(X, JY) = alpha(JX, Y) for traceless J = [[p, q], [r, -p]]
 * (linear in p, q, r), then picks the solution with p^2 + qr < 0 and scales
 * it to J^2 = -I with r > 0.
 */
inline EllipticStructure ellipticity_from_config(const PointConfig& cfg, double tol) {
  const Nullity d = relative_nullity(cfg, tol);
  if (d.nu != cfg.n - 2) fail(ErrorKind::NotRankTwo, "relative nullity is not n - 2");
  EllipticStructure es;
  if (cfg.n == 2) es.plane = Mat::Identity(2, 2);
  else es.plane = orthonormal_complement(d.basis);
  const Vec e1 = es.plane.col(0), e2 = es.plane.col(1);
  const Vec s11 = alpha(cfg, e1, e1), s12 = alpha(cfg, e1, e2), s22 = alpha(cfg, e2, e2);
  Mat rows(cfg.m, 3);
  rows << -2.0 * s12, s11, -s22;
  const double scale = 1.0 + alpha_norm(cfg);
  Mat null;
  {
    Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > std::sqrt(tol) * scale) ++rank;
    null = svd.matrixV().rightCols(3 - rank);
  }
  if (null.cols() == 0) fail(ErrorKind::NotElliptic, "no traceless J solves the linear conditions");
  Mat q(3, 3);
  q << 1, 0, 0, 0, 0, 0.5, 0, 0.5, 0;
  const SymEig qe = sym_eig(null.transpose() * q * null);
  const Eigen::Index last = qe.values.size() - 1;
  if (qe.values(last) >= -std::sqrt(tol)) fail(ErrorKind::NotElliptic, "solutions do not square to -I");
  Vec pqr = null * qe.vectors.col(last);
  pqr /= std::sqrt(-(pqr(0) * pqr(0) + pqr(1) * pqr(2)));
  if (pqr(2) < 0) pqr = -pqr;
  es.J.resize(2, 2);
  es.J << pqr(0), pqr(1), pqr(2), -pqr(0);
  for (int b = 0; b < 2; ++b) {
    const Vec x = es.plane.col(b);
    const Vec jx = es.plane * es.J.col(b);
    es.residual = std::max(es.residual, (alpha(cfg, x, x) + alpha(cfg, jx, jx)).norm());
  }
  if (es.residual > std::sqrt(tol) * scale) fail(ErrorKind::NotElliptic, "alpha(X,X) + alpha(JX,JX) does not vanish");
  es.orthogonal = max_abs(es.J.transpose() * es.J - Mat::Identity(2, 2)) <= std::sqrt(tol);
  return es;
}

inline EllipticStructure ellipticity_J(const ChartImmersion& f, const Vec& x, double tol) {
  return ellipticity_from_config(second_fundamental_form_at(f, x), tol);
}

struct EllipseReport {
  int order = 1;
  Vec center;                 // ambient
  Vec axis1, axis2;           // ambient semi-axis vectors
  double kappa1 = 0.0, kappa2 = 0.0;
  bool is_circle = false;
  int dim_normal = 0;         // dimension of N_order
  double harmonic_residual = 0.0;
};

namespace detail {

inline EllipseReport ellipse_from_harmonics(int order, const Vec& center, const Vec& a, const Vec& b, double tol) {
  // theta -> center + cos(k theta) a + sin(k theta) b
  EllipseReport r;
  r.order = order;
  r.center = center;
  Mat m(a.size(), 2);
  m << a, b;
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  r.kappa1 = s(0);
  r.kappa2 = s(1);
  r.axis1 = s(0) * svd.matrixU().col(0);
  r.axis2 = s(1) * svd.matrixU().col(1);
  r.is_circle = std::abs(r.kappa1 - r.kappa2) <= tol * (1.0 + r.kappa1);
  return r;
}

inline int rank_of(const std::vector<Vec>& vs, double threshold) {
  if (vs.empty()) return 0;
  Mat m(vs[0].size(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vs[i];
  return numerical_rank(m, threshold);
}

// Normal spaces N_1, N_2 at x (ambient), from an order-3 expansion.
struct HigherNormals {
  FramedPoint fp;
  Mat n1;                      // orthonormal basis of N_1
  std::vector<Vec> alpha3;     // projected third derivatives in frame directions, index (i*2+j)*2+k
  int dim_n1 = 0, dim_n2 = 0;
};

inline HigherNormals higher_normals(const ChartImmersion& f, const Vec& x, int order) {
  const JetVector fj = f.taylor(x, order);
  HigherNormals h;
  h.fp = frame_from_jets(fj, x, 2);
  const auto& cfg = h.fp.cfg;
  std::vector<Vec> a2;
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j) a2.push_back(h.fp.normal * alpha(cfg, Vec::Unit(2, i), Vec::Unit(2, j)));
  const double thr = 1e-7;
  h.dim_n1 = rank_of(a2, thr);
  const auto gs = gram_schmidt(a2, 1e-7);
  h.n1.resize(f.N(), gs.rank);
  for (int k = 0; k < gs.rank; ++k) h.n1.col(k) = gs.basis[k];
  if (order >= 3) {
    const Mat c = h.fp.chart_frame;
    const Mat p = Mat::Identity(f.N(), f.N()) - h.fp.tangent * h.fp.tangent.transpose() - h.n1 * h.n1.transpose();
    std::vector<Vec> raw(8, Vec::Zero(f.N()));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int d = 0; d < 2; ++d) {
          Vec s = Vec::Zero(f.N());
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
              for (int k = 0; k < 2; ++k) s += c(i, a) * c(j, b) * c(k, d) * third_partial(fj, i, j, k);
          raw[(a * 2 + b) * 2 + d] = p * s;
        }
    h.alpha3 = raw;
    h.dim_n2 = rank_of(raw, thr);
  }
  return h;
}

inline Vec alpha3_eval(const std::vector<Vec>& t, const Vec& x, const Vec& y, const Vec& z) {
  Vec s = Vec::Zero(t[0].size());
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int d = 0; d < 2; ++d) s += x(a) * y(b) * z(d) * t[(a * 2 + b) * 2 + d];
  return s;
}

// Unit Z in the plane with <Z, JZ> = 0: a null vector of the symmetric part of J.
inline Vec isotropic_start(const Mat& j) {
  const Mat sym = 0.5 * (j + j.transpose());
  const SymEig e = sym_eig(sym);
  if (e.values(0) - e.values(1) <= 1e-14) return Vec::Unit(2, 0);
  return (e.vectors.col(0) + e.vectors.col(1)).normalized();
}

}  // namespace detail

/**
 * Curvature ellipse of order l of a surface chart at x.
 *  l = 0: theta -> f_* Z_theta, Z_theta = cos(theta) Z + sin(theta) JZ (center 0);
 *  l = 1: the classical ellipse {alpha(X, X) : |X| = 1}, center H;
 *  l = 2: theta -> alpha^3(Z_theta, Z_theta, Z_theta), with alpha^3 the third
 *         derivatives projected off the tangent plane and N_1 (center 0).
 * Nicely-curved check: dim N_1 (and dim N_2 for l = 2) constant on a 5-point stencil.
 */
inline EllipseReport curvature_ellipse(const ChartImmersion& f, const Vec& x, int ell, double tol) {
  if (f.n() != 2) fail(ErrorKind::DimensionError, "curvature ellipses are implemented for surfaces");
  if (ell > 2) fail(ErrorKind::JetOrderExceeded, "order-3 jets limit curvature ellipses to l <= 2");
  if (ell < 0) fail(ErrorKind::InvalidInput, "ellipse order must be non-negative");
  const int order = ell == 2 ? 3 : 2;
  const auto base = detail::higher_normals(f, x, order);
  const double step = 1e-3;
  for (int k = 0; k < 2; ++k)
    for (int sgn : {-1, 1}) {
      Vec xs = x;
      xs(k) += sgn * step;
      const auto nb = detail::higher_normals(f, xs, order);
      if (nb.dim_n1 != base.dim_n1 || (ell == 2 && nb.dim_n2 != base.dim_n2))
        fail(ErrorKind::DimensionDrop, "normal space dimension changes near x");
    }
  const auto& fp = base.fp;
  const auto& cfg = fp.cfg;
  if (ell == 1) {
    const Vec h = fp.normal * mean_curvature_vector(cfg);
    const auto phi = traceless(cfg);
    Vec u(cfg.m), v(cfg.m);
    for (int a = 0; a < cfg.m; ++a) {
      u(a) = phi[a](0, 0);
      v(a) = phi[a](0, 1);
    }
    auto r = detail::ellipse_from_harmonics(1, h, fp.normal * u, fp.normal * v, tol);
    r.dim_normal = base.dim_n1;
    return r;
  }
  const EllipticStructure es = ellipticity_from_config(cfg, tol);
  const Vec z = detail::isotropic_start(es.J);
  const Vec jz = es.J * z;
  if (ell == 0) {
    auto r = detail::ellipse_from_harmonics(0, Vec::Zero(f.N()), fp.tangent * z, fp.tangent * jz, tol);
    r.dim_normal = 2;
    return r;
  }
  const auto& t = base.alpha3;
  const Vec t0 = detail::alpha3_eval(t, z, z, z), t1 = detail::alpha3_eval(t, z, z, jz);
  const Vec t2 = detail::alpha3_eval(t, z, jz, jz), t3 = detail::alpha3_eval(t, jz, jz, jz);
  auto r = detail::ellipse_from_harmonics(2, Vec::Zero(f.N()), (t0 - 3.0 * t2) / 4.0, (3.0 * t1 - t3) / 4.0, tol);
  r.harmonic_residual = std::max((0.75 * (t0 + t2)).norm(), (0.75 * (t1 + t3)).norm());
  r.dim_normal = base.dim_n2;
  return r;
}

}  // namespace wintgen

#pragma once

/**
 * @file pointwise.hpp
 * @brief Pointwise extrinsic algebra of a submanifold at one point: scalar and
 *        normal scalar curvature, the DDVV residual, the normal form of a
 *        Wintgen ideal point and the related classification data.
 *
 * A PointConfig stores the shape operators A_a = A_{xi_a} with respect to an
 * implicit orthonormal tangent frame {e_i} and normal frame {xi_a}. Frame
 * changes are expressed by orthogonal matrices whose columns give the new
 * frame vectors in the old ones.
 */

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wintgen/errors.hpp"
#include "wintgen/linalg.hpp"

namespace wintgen {

/// Realization of the frames in the ambient Euclidean space R^{n+m}.
struct AmbientData {
  Vec position;  // f(x)
  Mat tangent;   // N x n, columns e_i
  Mat normal;    // N x m, columns xi_a
};

struct PointConfig {
  int n = 0;
  int m = 0;
  double c = 0.0;
  std::vector<Mat> A;
  std::optional<AmbientData> ambient;
};

enum class CaseLabel { Umbilical, Generic, Case1, Case2Minimal, Case3 };

inline std::string_view to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::Umbilical: return "Umbilical";
    case CaseLabel::Generic: return "Generic";
    case CaseLabel::Case1: return "Case1";
    case CaseLabel::Case2Minimal: return "Case2Minimal";
    case CaseLabel::Case3: return "Case3";
  }
  return "Unknown";
}

struct NormalForm {
  double mu = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  Mat R_tan;  // columns: adapted tangent frame e_i in the input frame
  Mat R_nor;  // columns: adapted normal frame eta_a in the input frame
  CaseLabel label = CaseLabel::Umbilical;
  double theta = 0.0;
  double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0, gamma = 0.0;
};

inline void validate(const PointConfig& cfg) {
  if (cfg.n < 1 || cfg.m < 1) fail(ErrorKind::DimensionError, "PointConfig needs n >= 1 and m >= 1");
  if (static_cast<int>(cfg.A.size()) != cfg.m)
    fail(ErrorKind::DimensionError, "PointConfig needs m shape operators");
  for (const auto& a : cfg.A) {
    if (a.rows() != cfg.n || a.cols() != cfg.n)
      fail(ErrorKind::DimensionError, "shape operators must be n x n");
    if (max_abs(a - a.transpose()) > 1e-12 * (1.0 + max_abs(a)))
      fail(ErrorKind::InvalidInput, "shape operator is not symmetric");
  }
  if (cfg.ambient) {
    const auto& amb = *cfg.ambient;
    const int big_n = cfg.n + cfg.m;
    if (amb.position.size() != big_n || amb.tangent.rows() != big_n || amb.tangent.cols() != cfg.n ||
        amb.normal.rows() != big_n || amb.normal.cols() != cfg.m)
      fail(ErrorKind::DimensionError, "ambient data has wrong shape");
    Mat frame(big_n, big_n);
    frame << amb.tangent, amb.normal;
    if (max_abs(frame.transpose() * frame - Mat::Identity(big_n, big_n)) > 1e-10)
      fail(ErrorKind::InvalidInput, "ambient frames are not orthonormal");
  }
}

/// Components of the mean curvature vector in the normal frame.
inline Vec mean_curvature_vector(const PointConfig& cfg) {
  Vec h(cfg.m);
  for (int a = 0; a < cfg.m; ++a) h(a) = cfg.A[a].trace() / cfg.n;
  return h;
}

inline double mean_curvature_sq(const PointConfig& cfg) { return mean_curvature_vector(cfg).squaredNorm(); }

/// Frobenius norm of the whole second fundamental form.
inline double alpha_norm(const PointConfig& cfg) {
  double s = 0.0;
  for (const auto& a : cfg.A) s += a.squaredNorm();
  return std::sqrt(s);
}

/// Components of alpha(X, Y) in the normal frame.
inline Vec alpha(const PointConfig& cfg, const Vec& x, const Vec& y) {
  Vec r(cfg.m);
  for (int a = 0; a < cfg.m; ++a) r(a) = x.dot(cfg.A[a] * y);
  return r;
}

/// Traceless part Phi_a = A_a - h_a I.
inline std::vector<Mat> traceless(const PointConfig& cfg) {
  const Vec h = mean_curvature_vector(cfg);
  std::vector<Mat> phi;
  phi.reserve(cfg.m);
  for (int a = 0; a < cfg.m; ++a) phi.push_back(cfg.A[a] - h(a) * Mat::Identity(cfg.n, cfg.n));
  return phi;
}

inline double scalar_curvature(const PointConfig& cfg) {
  if (cfg.n < 2) fail(ErrorKind::DimensionError, "scalar curvature needs n >= 2");
  const double n = cfg.n;
  double sq = 0.0;
  for (const auto& a : cfg.A) sq += a.squaredNorm();
  return cfg.c + (n * n * mean_curvature_sq(cfg) - sq) / (n * (n - 1));
}

inline double normal_scalar_curvature(const PointConfig& cfg) {
  if (cfg.n < 2) fail(ErrorKind::DimensionError, "normal scalar curvature needs n >= 2");
  double sum = 0.0;
  for (int a = 0; a < cfg.m; ++a)
    for (int b = a + 1; b < cfg.m; ++b) {
      const Mat k = cfg.A[a] * cfg.A[b] - cfg.A[b] * cfg.A[a];
      for (int i = 0; i < cfg.n; ++i)
        for (int j = i + 1; j < cfg.n; ++j) sum += k(i, j) * k(i, j);
    }
  const double n = cfg.n;
  return 2.0 / (n * (n - 1)) * std::sqrt(sum);
}

inline double ddvv_residual(const PointConfig& cfg) {
  return cfg.c + mean_curvature_sq(cfg) - normal_scalar_curvature(cfg) - scalar_curvature(cfg);
}

inline bool is_wintgen_ideal(const PointConfig& cfg, double tol) {
  return std::abs(ddvv_residual(cfg)) <= tol * (1.0 + std::abs(cfg.c) + mean_curvature_sq(cfg));
}

// Structural comparisons (kernels, circle conditions, reconstruction) are linear in the
// deviation from the normal form, while the residual is quadratic in it.
inline double structural_tolerance(const PointConfig& cfg, double tol) {
  return std::sqrt(tol) * (1.0 + alpha_norm(cfg));
}

/// Operators in the frame e'_i = sum_k R_tan(k,i) e_k, xi'_a = sum_b R_nor(b,a) xi_b.
inline PointConfig conjugate(const PointConfig& cfg, const Mat& R_tan, const Mat& R_nor) {
  PointConfig out = cfg;
  for (int a = 0; a < cfg.m; ++a) {
    Mat s = Mat::Zero(cfg.n, cfg.n);
    for (int b = 0; b < cfg.m; ++b) s += R_nor(b, a) * cfg.A[b];
    s = R_tan.transpose() * s * R_tan;
    out.A[a] = 0.5 * (s + s.transpose());
  }
  if (cfg.ambient) {
    out.ambient->tangent = cfg.ambient->tangent * R_tan;
    out.ambient->normal = cfg.ambient->normal * R_nor;
  }
  return out;
}

/// The canonical operators with parameters (mu, gamma1, gamma2); gamma2 is ignored when m < 3.
inline std::vector<Mat> canonical_shape_operators(int n, int m, double mu, double gamma1, double gamma2) {
  std::vector<Mat> a(m, Mat::Zero(n, n));
  if (m >= 1) {
    a[0](0, 0) = mu;
    a[0](1, 1) = -mu;
  }
  if (m >= 2) {
    a[1] = gamma1 * Mat::Identity(n, n);
    a[1](0, 1) = a[1](1, 0) = mu;
  }
  if (m >= 3) a[2] = gamma2 * Mat::Identity(n, n);
  return a;
}

namespace detail {

inline CaseLabel classify(double mu, double gamma1, double gamma2, double t) {
  if (mu <= t) return CaseLabel::Umbilical;
  const bool g1 = std::abs(gamma1) > t, g2 = std::abs(gamma2) > t;
  if (g1 && g2) return CaseLabel::Generic;
  if (g1) return CaseLabel::Case1;
  if (g2) return CaseLabel::Case3;
  return CaseLabel::Case2Minimal;
}

inline NormalForm umbilical_form(const PointConfig& cfg, double tol) {
  NormalForm nf;
  const Vec h = mean_curvature_vector(cfg);
  nf.R_tan = Mat::Identity(cfg.n, cfg.n);
  nf.R_nor = Mat::Identity(cfg.m, cfg.m);
  nf.label = CaseLabel::Umbilical;
  const double hn = h.norm();
  if (hn <= tol * (1.0 + alpha_norm(cfg))) return nf;
  // The mean curvature direction goes to eta_3 when it exists, else to the last slot.
  const int slot = std::min(cfg.m, 3) - 1;
  const Vec dir = h / hn;
  const Mat rest = orthonormal_complement(dir);
  for (int a = 0, k = 0; a < cfg.m; ++a) nf.R_nor.col(a) = (a == slot) ? dir : Vec(rest.col(k++));
  if (slot == 2) nf.gamma2 = hn;
  else nf.gamma1 = hn;
  nf.lambda3 = nf.gamma2;
  return nf;
}

}  // namespace detail

/**
 * Normal form of a Wintgen ideal point. The kernel E of the traceless part
 * gives e_3..e_n, its complement D carries a circle of Phi(e, e); from
 * u = Phi(e1,e1), v = Phi(e1,e2) and the mean curvature vector the
 * intermediate frame is assembled, then rotated so that A_{eta_1} is traceless.
 * The result is verified by conjugating the input back.
 */
inline NormalForm wintgen_normal_form(const PointConfig& cfg, double tol) {
  validate(cfg);
  if (cfg.n < 2) fail(ErrorKind::DimensionError, "normal form needs n >= 2");
  if (!is_wintgen_ideal(cfg, tol)) fail(ErrorKind::NotWintgenIdeal, "DDVV residual exceeds tolerance");
  const int n = cfg.n, m = cfg.m;
  const double scale = 1.0 + alpha_norm(cfg);
  const double st = structural_tolerance(cfg, tol);
  const Vec h = mean_curvature_vector(cfg);
  const auto phi = traceless(cfg);
  double phi_norm = 0.0;
  for (const auto& p : phi) phi_norm += p.squaredNorm();
  phi_norm = std::sqrt(phi_norm);
  if (phi_norm <= st) return detail::umbilical_form(cfg, tol);

  Mat k = Mat::Zero(n, n);
  for (const auto& p : phi) k += p * p;
  const SymEig ke = sym_eig(k);
  const Vec d1 = ke.vectors.col(0), d2 = ke.vectors.col(1);

  auto phi_at = [&](const Vec& x, const Vec& y) {
    Vec r(m);
    for (int a = 0; a < m; ++a) r(a) = x.dot(phi[a] * y);
    return r;
  };
  // e1 maximizing |Phi(e1,e1)| on the unit circle of D; any choice works when the image is a circle.
  const Vec u0 = phi_at(d1, d1), v0 = phi_at(d1, d2);
  Mat gram(2, 2);
  gram << u0.dot(u0), u0.dot(v0), u0.dot(v0), v0.dot(v0);
  const SymEig ge = sym_eig(gram);
  const bool circle = ge.values(0) - ge.values(1) <= kEigenGap * (1.0 + ge.values(0));
  const double t = circle ? 0.0 : 0.5 * std::atan2(ge.vectors(1, 0), ge.vectors(0, 0));
  Vec e1 = std::cos(t) * d1 + std::sin(t) * d2;
  Vec e2 = -std::sin(t) * d1 + std::cos(t) * d2;

  const Vec u = phi_at(e1, e1), v = phi_at(e1, e2);
  std::vector<Vec> seeds{u, v, h};
  for (int a = 0; a < m; ++a) seeds.push_back(Vec::Unit(m, a));
  const auto gs = gram_schmidt(seeds, 1e-10);
  Mat xi(m, m);
  for (int a = 0; a < m; ++a) xi.col(a) = gs.basis[a];

  NormalForm nf;
  nf.gamma = u.norm();
  nf.lambda1 = h.dot(xi.col(0));
  nf.lambda2 = m >= 2 ? h.dot(xi.col(1)) : 0.0;
  nf.lambda3 = m >= 3 ? h.dot(xi.col(2)) : 0.0;
  const double rho = std::hypot(nf.lambda1, nf.lambda2);

  Mat eta = xi;
  if (rho > tol * scale && m >= 2) {
    double two_theta = std::atan2(-nf.lambda1, nf.lambda2);
    if (two_theta < 0) two_theta += std::numbers::pi;
    if (two_theta >= std::numbers::pi) two_theta -= std::numbers::pi;
    nf.theta = 0.5 * two_theta;
    eta.col(0) = (nf.lambda2 * xi.col(0) - nf.lambda1 * xi.col(1)) / rho;
    eta.col(1) = (nf.lambda1 * xi.col(0) + nf.lambda2 * xi.col(1)) / rho;
    const Vec r1 = std::cos(nf.theta) * e1 + std::sin(nf.theta) * e2;
    const Vec r2 = -std::sin(nf.theta) * e1 + std::cos(nf.theta) * e2;
    e1 = r1;
    e2 = r2;
    const double mu_signed =
        (nf.lambda2 * std::cos(two_theta) - nf.lambda1 * std::sin(two_theta)) * nf.gamma / rho;
    if (mu_signed < 0) {
      eta.col(0) = -eta.col(0);
      e2 = -e2;
    }
  }
  nf.mu = nf.gamma;
  nf.gamma1 = rho;
  nf.gamma2 = nf.lambda3;

  nf.R_tan.resize(n, n);
  nf.R_tan.col(0) = e1;
  nf.R_tan.col(1) = e2;
  for (int i = 2; i < n; ++i) nf.R_tan.col(i) = ke.vectors.col(i);
  nf.R_nor = eta;

  const PointConfig adapted = conjugate(cfg, nf.R_tan, nf.R_nor);
  const auto target = canonical_shape_operators(n, m, nf.mu, nf.gamma1, nf.gamma2);
  double err = 0.0;
  for (int a = 0; a < m; ++a) err = std::max(err, max_abs(adapted.A[a] - target[a]));
  if (err > st) fail(ErrorKind::FrameSearchFailure, "adapted frame does not reproduce the normal form");
  nf.label = detail::classify(nf.mu, nf.gamma1, nf.gamma2, tol * scale);
  return nf;
}

/// Rank of the m x n(n+1)/2 matrix of second fundamental form coefficients.
inline int first_normal_dim(const PointConfig& cfg, double tol) {
  Mat coeffs(cfg.m, cfg.n * (cfg.n + 1) / 2);
  for (int a = 0; a < cfg.m; ++a) {
    int col = 0;
    for (int i = 0; i < cfg.n; ++i)
      for (int j = i; j < cfg.n; ++j) coeffs(a, col++) = cfg.A[a](i, j);
  }
  return numerical_rank(coeffs, tol);
}

struct PrincipalNormal {
  Vec eta;  // components in the normal frame
  int multiplicity = 0;
  Mat basis;  // n x multiplicity, orthonormal basis of E_eta
};

namespace detail {

inline Mat kernel_below(const Mat& a, double threshold) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > threshold) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

}  // namespace detail

/**
 * Principal normals by simultaneous eigenspace refinement: eigenspaces of A_1
 * are split by the compressions of A_2, A_3, ..., and directions that the
 * next operator maps out of the current subspace are discarded.
 */
inline std::vector<PrincipalNormal> principal_normals(const PointConfig& cfg, double tol) {
  (void)tol;
  const double gap = 1e-7 * (1.0 + alpha_norm(cfg));
  std::vector<Mat> spaces{Mat::Identity(cfg.n, cfg.n)};
  for (int a = 0; a < cfg.m; ++a) {
    std::vector<Mat> next;
    for (const Mat& b : spaces) {
      const SymEig e = sym_eig(b.transpose() * cfg.A[a] * b);
      const int k = static_cast<int>(b.cols());
      for (int start = 0; start < k;) {
        int end = start + 1;
        while (end < k && e.values(end - 1) - e.values(end) <= gap) ++end;
        const Mat sub = b * e.vectors.middleCols(start, end - start);
        const Mat leak = (Mat::Identity(cfg.n, cfg.n) - b * b.transpose()) * cfg.A[a] * sub;
        const Mat ker = detail::kernel_below(leak, gap);
        if (ker.cols() > 0) next.push_back(gram_schmidt_columns(sub * ker, 1e-12));
        start = end;
      }
    }
    spaces = std::move(next);
  }
  std::vector<PrincipalNormal> out;
  for (const Mat& b : spaces) {
    if (b.cols() == 0) continue;
    PrincipalNormal p;
    p.multiplicity = static_cast<int>(b.cols());
    p.basis = b;
    p.eta.resize(cfg.m);
    for (int a = 0; a < cfg.m; ++a) p.eta(a) = (b.transpose() * cfg.A[a] * b).trace() / p.multiplicity;
    out.push_back(std::move(p));
  }
  return out;
}

struct Nullity {
  int nu = 0;
  Mat basis;
};

inline Nullity relative_nullity(const PointConfig& cfg, double tol) {
  Mat stacked(cfg.m * cfg.n, cfg.n);
  for (int a = 0; a < cfg.m; ++a) stacked.middleRows(a * cfg.n, cfg.n) = cfg.A[a];
  Nullity r;
  r.basis = null_space(stacked, tol);
  r.nu = static_cast<int>(r.basis.cols());
  return r;
}

/**
 * Wintgen ideal test through the traceless part: either umbilical, or
 * ker Phi has dimension n-2 and Phi restricted to its complement maps the
 * unit circle onto a circle centered at the origin.
 */
inline bool lemma_h_criterion(const PointConfig& cfg, double tol) {
  validate(cfg);
  const int n = cfg.n, m = cfg.m;
  const double st = structural_tolerance(cfg, tol);
  const auto phi = traceless(cfg);
  Mat stacked(m * n, n);
  for (int a = 0; a < m; ++a) stacked.middleRows(a * n, n) = phi[a];
  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(0) <= st) return true;  // umbilical up to tolerance
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > st) ++rank;
  if (rank != 2) return false;
  const Vec e1 = svd.matrixV().col(0), e2 = svd.matrixV().col(1);
  Vec u(m), v(m);
  for (int a = 0; a < m; ++a) {
    u(a) = e1.dot(phi[a] * e1);
    v(a) = e1.dot(phi[a] * e2);
  }
  return std::abs(u.norm() - v.norm()) <= st && std::abs(u.dot(v)) <= st * (u.norm() + v.norm());
}

/// Canonical operators conjugated by random_rotation(n, seed) and random_rotation(m, seed + 1).
inline PointConfig make_equality_config(int n, int m, double mu, double gamma1, double gamma2,
                                        std::uint64_t seed) {
  if (n < 3 || m < 2) fail(ErrorKind::DimensionError, "make_equality_config needs n >= 3, m >= 2");
  PointConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.A = canonical_shape_operators(n, m, mu, gamma1, gamma2);
  return conjugate(cfg, random_rotation(n, seed), random_rotation(m, seed + 1));
}

/// Places the frames in R^{n+m} by a seeded rotation and a position with entries in [-1, 1].
inline PointConfig attach_random_ambient(const PointConfig& cfg, std::uint64_t seed) {
  const int big_n = cfg.n + cfg.m;
  const Mat q = random_rotation(big_n, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  AmbientData amb;
  amb.position.resize(big_n);
  for (int i = 0; i < big_n; ++i) amb.position(i) = u(rng);
  amb.tangent = q.leftCols(cfg.n);
  amb.normal = q.rightCols(cfg.m);
  PointConfig out = cfg;
  out.ambient = std::move(amb);
  return out;
}

/**
 * Views a point of a submanifold of the sphere of radius |f| centered at the
 * origin as a point of that sphere: the radial normal is removed and c = 1/|f|^2.
 * The residual is unchanged.
 */
inline PointConfig restrict_to_sphere(const PointConfig& cfg) {
  if (!cfg.ambient) fail(ErrorKind::InvalidInput, "sphere restriction needs ambient data");
  if (cfg.m < 2) fail(ErrorKind::DimensionError, "sphere restriction needs m >= 2");
  const auto& amb = *cfg.ambient;
  const double r = amb.position.norm();
  const Vec radial = amb.normal.transpose() * amb.position / r;
  if (std::abs(radial.norm() - 1.0) > 1e-8)
    fail(ErrorKind::InvalidInput, "position is not normal to the submanifold");
  Mat rot(cfg.m, cfg.m);
  rot << orthonormal_complement(radial), radial;
  PointConfig turned = conjugate(cfg, Mat::Identity(cfg.n, cfg.n), rot);
  PointConfig out;
  out.n = cfg.n;
  out.m = cfg.m - 1;
  out.c = cfg.c + 1.0 / (r * r);
  out.A.assign(turned.A.begin(), turned.A.end() - 1);
  return out;
}

}  // namespace wintgen

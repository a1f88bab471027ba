#pragma once

/**
 * @file decomposition.hpp
 * @brief Generic Wintgen ideal charts as f = Psi o j: the center map
 *        h = f + H_f / H^2, extraction of (g, tau, j) on an adapted chart,
 *        verification of the composition, and the pointwise converse.
 *
 * An adapted chart has E = ker Phi spanned by its trailing n - 2 coordinate
 * directions, so the leaves are the slices with fixed (x1, x2) and the
 * projection to the leaf space is (x1, x2).
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "wintgen/gaussparam.hpp"
#include "wintgen/parallel.hpp"

namespace wintgen {

inline constexpr double kMinimalThreshold = 1e-8;
inline constexpr double kAdaptedAngle = 1e-6;
inline constexpr double kDeltaUnitTol = 1e-7;
inline constexpr double kGradientBound = 1e-8;
inline constexpr double kCompositionTol = 1e-6;
inline constexpr double kCenterStep = 1e-3;

/// j evaluated at a chart point, with the extraction diagnostics.
struct SectionSample {
  BundlePoint point;
  double grad_norm = 0.0;
  double delta_norm_error = 0.0;
};

struct CompositionTriple {
  SupportedSurface surface;
  std::function<SectionSample(const Vec&)> j;
};

// ---------------------------------------------------------------------------
// Gate, center map, nullity

struct GateResult {
  bool passed = false;
  ErrorKind kind = ErrorKind::InvalidInput;
  std::string reason;  // MinimalOrUmbilical, NotWintgenIdeal, NotGeneric
  NormalForm nf;
};

/// Generic Wintgen ideal, non-minimal, non-umbilical.
inline GateResult generic_gate(const PointConfig& cfg, double tol) {
  GateResult g;
  if (!is_wintgen_ideal(cfg, tol)) {
    g.kind = ErrorKind::NotWintgenIdeal;
    g.reason = "NotWintgenIdeal";
    return g;
  }
  if (std::sqrt(mean_curvature_sq(cfg)) <= kMinimalThreshold) {
    g.kind = ErrorKind::MinimalPoint;
    g.reason = "MinimalOrUmbilical";
    return g;
  }
  g.nf = wintgen_normal_form(cfg, tol);
  if (g.nf.label == CaseLabel::Umbilical) {
    g.kind = ErrorKind::NotGeneric;
    g.reason = "MinimalOrUmbilical";
    return g;
  }
  if (g.nf.label != CaseLabel::Generic) {
    g.kind = ErrorKind::NotGeneric;
    g.reason = "NotGeneric";
    return g;
  }
  g.passed = true;
  return g;
}

inline Vec center_map(const ChartImmersion& f, const Vec& x, double tol = kDefaultTol) {
  const FramedPoint fp = frame_at(f, x);
  if (!is_wintgen_ideal(fp.cfg, tol)) fail(ErrorKind::NotWintgenIdeal, "DDVV residual exceeds tolerance");
  const Vec hv = fp.normal * mean_curvature_vector(fp.cfg);
  const double h2 = hv.squaredNorm();
  if (std::sqrt(h2) <= kMinimalThreshold) fail(ErrorKind::MinimalPoint, "mean curvature vanishes");
  return fp.position + hv / h2;
}

namespace detail {

/// h, H_f and H with exact first derivatives in all chart variables; needs chart order 3.
struct CenterJet {
  Vec h;
  Mat dh;      // N x n
  Vec hvec;    // H_f
  Mat dhvec;   // N x n
  double H = 0.0;
  Vec dH;      // n
};

inline CenterJet center_jet(const ChartImmersion& f, const Vec& x) {
  const int n = f.n();
  const JetVector fj = f.taylor(x, 3);
  const JetVector hv = mean_curvature_jets(fj, n);
  const Jet h2 = dot(hv, hv);
  if (std::sqrt(h2.value()) <= kMinimalThreshold) fail(ErrorKind::MinimalPoint, "mean curvature vanishes");
  JetVector h = truncated(fj, 1);
  axpy(h, h2.reciprocal(), hv);
  const Jet hn = sqrt(h2);
  CenterJet c;
  const int big_n = f.N();
  c.h.resize(big_n);
  c.hvec.resize(big_n);
  for (int a = 0; a < big_n; ++a) {
    c.h(a) = h[a].value();
    c.hvec(a) = hv[a].value();
  }
  c.dh = jacobian_of(h, n);
  c.dhvec = jacobian_of(hv, n);
  c.H = hn.value();
  c.dH.resize(n);
  for (int i = 0; i < n; ++i) c.dH(i) = hn.d(i);
  return c;
}

/// Largest principal-angle sine between the column spans of two orthonormal bases.
inline double subspace_angle(const Mat& q1, const Mat& q2) {
  const Mat r = q1 - q2 * (q2.transpose() * q1);
  if (r.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(r);
  return std::min(1.0, svd.singularValues()(0));
}

inline Mat kernel_of_traceless(const PointConfig& cfg, double tol) {
  const auto phi = traceless(cfg);
  Mat stacked(cfg.m * cfg.n, cfg.n);
  for (int a = 0; a < cfg.m; ++a) stacked.middleRows(a * cfg.n, cfg.n) = phi[a];
  return null_space(stacked, std::sqrt(tol));
}

}  // namespace detail

struct NullityInfo {
  Mat frame_basis;    // n x (n-2), orthonormal tangent frame coordinates
  Mat chart_basis;    // n x (n-2), chart coordinates
  Mat ambient_basis;  // N x (n-2)
  double h_variation = 0.0;      // max |dh(T)| over unit T in E
  double H_variation = 0.0;      // max |dH(T)|
  double parallel_defect = 0.0;  // max |nabla_perp_T (H_f / H)|
};

inline NullityInfo nullity_distribution(const ChartImmersion& f, const Vec& x, double tol = kDefaultTol) {
  const int n = f.n();
  if (n <= 3) fail(ErrorKind::DimensionTooSmall, "the decomposition needs n >= 4");
  const FramedPoint fp = frame_at(f, x);
  if (!is_wintgen_ideal(fp.cfg, tol)) fail(ErrorKind::NotWintgenIdeal, "DDVV residual exceeds tolerance");
  NullityInfo out;
  out.frame_basis = detail::kernel_of_traceless(fp.cfg, tol);
  if (out.frame_basis.cols() != n - 2)
    fail(ErrorKind::WrongDimension, "ker Phi has dimension " + std::to_string(out.frame_basis.cols()));
  out.chart_basis = fp.chart_frame * out.frame_basis;
  out.ambient_basis = fp.tangent * out.frame_basis;
  const detail::CenterJet c = detail::center_jet(f, x);
  const Mat proj_n = fp.normal * fp.normal.transpose();
  for (Eigen::Index k = 0; k < out.chart_basis.cols(); ++k) {
    const Vec t = out.chart_basis.col(k);
    out.h_variation = std::max(out.h_variation, (c.dh * t).norm());
    const double dh = c.dH.dot(t);
    out.H_variation = std::max(out.H_variation, std::abs(dh));
    const Vec dxi = (c.dhvec * t) / c.H - c.hvec * dh / (c.H * c.H);
    out.parallel_defect = std::max(out.parallel_defect, (proj_n * dxi).norm());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Extraction

namespace detail {

inline Vec slice_point(const Vec& y, const Vec& rest) {
  Vec x(2 + rest.size());
  x << y, rest;
  return x;
}

/// Value, exact gradient and difference Hessian of (h, 1/H) restricted to the slice.
inline PointJet slice_center_jet(const ChartImmersion& f, const Vec& y, const Vec& rest, bool tau_only) {
  const CenterJet c0 = center_jet(f, slice_point(y, rest));
  auto pack_grad = [&](const CenterJet& c) {
    if (tau_only) return Mat((-c.dH.head(2) / (c.H * c.H)).transpose());
    return Mat(c.dh.leftCols(2));
  };
  PointJet pj;
  if (tau_only) pj.value = (Vec(1) << 1.0 / c0.H).finished();
  else pj.value = c0.h;
  pj.grad = pack_grad(c0);
  const Eigen::Index comps = pj.value.size();
  pj.hess.assign(comps, Mat::Zero(2, 2));
  // fourth-order central differences of the exact gradient
  for (int k = 0; k < 2; ++k) {
    auto at = [&](double t) {
      Vec yt = y;
      yt(k) += t * kCenterStep;
      return pack_grad(center_jet(f, slice_point(yt, rest)));
    };
    const Mat d = (8.0 * (at(1.0) - at(-1.0)) - (at(2.0) - at(-2.0))) / (12.0 * kCenterStep);
    for (Eigen::Index a = 0; a < comps; ++a)
      for (int i = 0; i < 2; ++i) pj.hess[a](k, i) = d(a, i);
  }
  for (auto& h : pj.hess) h = 0.5 * (h + h.transpose()).eval();
  return pj;
}

struct SupportFirstOrder {
  FramedPoint fp;
  Vec gstar_grad;
  double grad_norm = 0.0;
  double tau = 0.0;
};

inline SupportFirstOrder support_first_order(const SupportedSurface& s, const Vec& y) {
  SupportFirstOrder out;
  const JetVector gj = s.g.taylor(y, 2);
  out.fp = frame_from_jets(gj, y, 2);
  const Mat jac = jacobian_of(gj, 2);
  const Jet tj = s.tau.taylor(y, 1);
  out.tau = tj.value();
  const Vec dtau = (Vec(2) << tj.d(0), tj.d(1)).finished();
  const Vec grad = (jac.transpose() * jac).ldlt().solve(dtau);
  out.gstar_grad = jac * grad;
  out.grad_norm = std::sqrt(std::max(0.0, dtau.dot(grad)));
  return out;
}

}  // namespace detail

/**
 * j(x) = (pi(x), delta1(x)) with delta1 = (xi - g_* grad tau) / sqrt(1 - |grad tau|^2)
 * and xi = H_f / H. The returned normal is delta1 projected to the normal
 * space of g and normalized; the unit-length defect is reported.
 */
inline SectionSample chart_section(const ChartImmersion& f, const SupportedSurface& s, const Vec& x) {
  const FramedPoint fp = frame_at(f, x);
  const Vec hv = fp.normal * mean_curvature_vector(fp.cfg);
  const double h = hv.norm();
  if (h <= kMinimalThreshold) fail(ErrorKind::MinimalPoint, "mean curvature vanishes");
  const Vec y = x.head(2);
  const auto sup = detail::support_first_order(s, y);
  SectionSample out;
  out.grad_norm = sup.grad_norm;
  if (sup.grad_norm >= 1.0 - kGradientBound) fail(ErrorKind::GradientBoundViolated, "|grad tau| >= 1");
  const Vec delta = (hv / h - sup.gstar_grad) / std::sqrt(1.0 - sup.grad_norm * sup.grad_norm);
  out.delta_norm_error = std::abs(delta.norm() - 1.0);
  const Vec fiber = sup.fp.normal.transpose() * delta;
  if (fiber.norm() == 0.0) fail(ErrorKind::NotAdapted, "delta1 has no normal component");
  out.point = BundlePoint{y, sup.fp.normal * fiber.normalized(), fiber.normalized()};
  return out;
}

inline CompositionTriple chart_triple(const ChartImmersion& f, const SupportedSurface& s) {
  return CompositionTriple{s, [f, s](const Vec& x) { return chart_section(f, s, x); }};
}

struct ExtractedPair {
  SupportedSurface surface;
  Vec rest;
  double max_adapted_angle = 0.0;
  CompositionTriple triple;
};

/**
 * g = h and tau = 1/H on the slice {(y, rest)}. Adaptation and the generic
 * gate are validated on a 3 x 3 grid of the slice. g and tau carry exact
 * first derivatives and fourth-order difference second derivatives.
 */
inline ExtractedPair extract_pair(const ChartImmersion& f, const Vec& rest, double tol = kDefaultTol) {
  const int n = f.n();
  if (n <= 3) fail(ErrorKind::DimensionTooSmall, "the decomposition needs n >= 4");
  if (rest.size() != n - 2) fail(ErrorKind::DimensionError, "slice needs n - 2 fixed coordinates");
  if (f.max_order() < 3) fail(ErrorKind::JetOrderExceeded, "extraction needs chart order 3");
  const Box& dom = f.domain();
  const Box slice{dom.lo.head(2), dom.hi.head(2)};
  ExtractedPair out;
  out.rest = rest;
  for (const Vec& y : GridSpec::uniform(slice, 3).points()) {
    const Vec x = detail::slice_point(y, rest);
    const FramedPoint fp = frame_at(f, x);
    const GateResult gate = generic_gate(fp.cfg, tol);
    if (!gate.passed) fail(gate.kind, gate.reason + " at a slice point");
    const NullityInfo e = nullity_distribution(f, x, tol);
    const Mat trailing = gram_schmidt_columns(f.jacobian(x).rightCols(n - 2), 1e-12);
    const double angle = detail::subspace_angle(e.ambient_basis, trailing);
    out.max_adapted_angle = std::max(out.max_adapted_angle, angle);
    if (angle > kAdaptedAngle) fail(ErrorKind::NotAdapted, "ker Phi is not spanned by the trailing coordinates");
  }
  ChartImmersion g(
      f.label() + "/center", 2, f.N(), slice,
      [f, rest](const JetVector& y) {
        const Vec y0 = (Vec(2) << y[0].value(), y[1].value()).finished();
        return compose_point_jet(detail::slice_center_jet(f, y0, rest, false), y);
      },
      2);
  ScalarField tau(
      f.label() + "/sigma",
      [f, rest](const JetVector& y) {
        const Vec y0 = (Vec(2) << y[0].value(), y[1].value()).finished();
        return compose_point_jet(detail::slice_center_jet(f, y0, rest, true), y)[0];
      },
      2);
  out.surface = SupportedSurface{g, tau};
  out.triple = chart_triple(f, out.surface);
  return out;
}

// ---------------------------------------------------------------------------
// Verification

struct DecompositionRecord {
  Vec x;
  bool ok = false;     // evaluated and every asserted residual within tolerance
  std::string error;   // error kind and message when evaluation failed
  bool wintgen = false;
  double H = 0.0;
  double sigma = 0.0;
  double grad_norm = 0.0;
  double delta_norm_error = 0.0;
  double f_residual = 0.0;        // |f - Psi(j)|
  double normality = 0.0;         // |f_*^T N^Psi(j)|
  double tangency = 0.0;          // |f_* e - Psi_* v|, v the least-squares lift
  double vertical_error = 0.0;    // |kappa_vertical - 1/tau|
  double xi_residual = 0.0;       // |H_f/H - N^Psi(j)|, Wintgen records only
  double psi1 = 0.0;
  double psi2 = 0.0;
  double nullity_residual = 0.0;
  double trace_residual = 0.0;

  double worst() const {
    return std::max({f_residual, normality, tangency, vertical_error, xi_residual, psi1, psi2, nullity_residual,
                     trace_residual});
  }
};

struct DecompositionSummary {
  std::size_t records = 0, passed = 0, failed = 0, errors = 0, wintgen = 0;
  double max_f_residual = 0.0, max_normality = 0.0, max_tangency = 0.0, max_vertical_error = 0.0;
  double max_xi_residual = 0.0, max_psi1 = 0.0, max_psi2 = 0.0, max_nullity_residual = 0.0;
  double max_trace_residual = 0.0, max_grad_norm = 0.0, max_delta_norm_error = 0.0;

  double worst() const {
    return std::max({max_f_residual, max_normality, max_tangency, max_vertical_error, max_xi_residual, max_psi1,
                     max_psi2, max_nullity_residual, max_trace_residual});
  }
};

struct DecompositionReport {
  std::string chart;
  bool gate_passed = true;
  std::string reason;  // set when the pipeline stopped before verification
  std::string message;
  std::vector<DecompositionRecord> records;
  DecompositionSummary summary;

  bool success() const { return gate_passed && summary.failed == 0 && summary.errors == 0 && summary.records > 0; }
};

namespace detail {

inline DecompositionRecord verify_point(const ChartImmersion& f, const CompositionTriple& t, const Vec& x,
                                        double tol) {
  DecompositionRecord r;
  r.x = x;
  const FramedPoint fp = frame_at(f, x);
  const PointConfig& cfg = fp.cfg;
  const Vec hv = fp.normal * mean_curvature_vector(cfg);
  r.H = hv.norm();
  r.sigma = r.H > 0.0 ? 1.0 / r.H : 0.0;
  r.wintgen = is_wintgen_ideal(cfg, tol) && r.H > kMinimalThreshold;

  const SectionSample js = t.j(x);
  r.grad_norm = js.grad_norm;
  r.delta_norm_error = js.delta_norm_error;
  const BundlePoint& p = js.point;
  const SupportedSurface& s = t.surface;
  r.f_residual = (fp.position - psi_eval(s, p)).norm();
  const Vec np = gauss_map(s, p);
  r.normality = (fp.tangent.transpose() * np).norm();
  r.vertical_error = std::abs(vertical_principal_curvature(s, p) - 1.0 / s.tau.value(p.y));

  const PsiShapeOperator so = shape_operator_psi(s, p);
  Eigen::JacobiSVD<Mat> svd(so.dpsi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Mat gm = so.dpsi.transpose() * so.dpsi;
  auto lift = [&](const Vec& e) {
    const Vec v = svd.solve(e);
    r.tangency = std::max(r.tangency, (so.dpsi * v - e).norm());
    return v;
  };
  auto form = [&](const Vec& a, const Vec& b) { return b.dot(gm * (so.a_chart * a)); };

  if (r.wintgen) {
    r.xi_residual = (hv / r.H - np).norm();
    const GateResult gate = generic_gate(cfg, tol);
    const int n = cfg.n;
    Mat frame;
    if (gate.passed) frame = fp.tangent * gate.nf.R_tan;
    else frame = fp.tangent;
    std::vector<Vec> v;
    for (int i = 0; i < n; ++i) v.push_back(lift(frame.col(i)));
    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += form(v[i], v[i]);
    r.trace_residual = std::abs(trace - n * r.H);
    if (gate.passed) {
      for (int i = 0; i < 2; ++i) r.psi1 = std::max(r.psi1, std::abs(form(v[i], v[i]) - r.H));
      const double cross = 0.5 * (form(v[0], v[1]) + form(v[1], v[0]));
      r.psi2 = std::abs(cross - gate.nf.mu * gate.nf.gamma1 / r.H);
    }
    // alpha_f(T, Y) = H <T, Y> xi for T in ker Phi
    const Mat e = kernel_of_traceless(cfg, tol);
    const Vec xi_frame = mean_curvature_vector(cfg) / r.H;
    for (Eigen::Index k = 0; k < e.cols(); ++k)
      for (int j = 0; j < n; ++j) {
        const Vec yj = Vec::Unit(n, j);
        const Vec a = alpha(cfg, e.col(k), yj);
        r.nullity_residual = std::max(r.nullity_residual, (a - r.H * e.col(k).dot(yj) * xi_frame).norm());
      }
  } else {
    for (int i = 0; i < cfg.n; ++i) lift(fp.tangent.col(i));
  }
  r.ok = r.worst() <= kCompositionTol && r.delta_norm_error <= kDeltaUnitTol &&
         r.grad_norm < 1.0 - kGradientBound;
  return r;
}

}  // namespace detail

inline DecompositionSummary summarize(const std::vector<DecompositionRecord>& records) {
  DecompositionSummary s;
  s.records = records.size();
  for (const auto& r : records) {
    if (!r.error.empty()) {
      ++s.errors;
      continue;
    }
    if (r.ok) ++s.passed;
    else ++s.failed;
    if (r.wintgen) ++s.wintgen;
    s.max_f_residual = std::max(s.max_f_residual, r.f_residual);
    s.max_normality = std::max(s.max_normality, r.normality);
    s.max_tangency = std::max(s.max_tangency, r.tangency);
    s.max_vertical_error = std::max(s.max_vertical_error, r.vertical_error);
    s.max_xi_residual = std::max(s.max_xi_residual, r.xi_residual);
    s.max_psi1 = std::max(s.max_psi1, r.psi1);
    s.max_psi2 = std::max(s.max_psi2, r.psi2);
    s.max_nullity_residual = std::max(s.max_nullity_residual, r.nullity_residual);
    s.max_trace_residual = std::max(s.max_trace_residual, r.trace_residual);
    s.max_grad_norm = std::max(s.max_grad_norm, r.grad_norm);
    s.max_delta_norm_error = std::max(s.max_delta_norm_error, r.delta_norm_error);
  }
  return s;
}

/**
 * Per-point checks of f = Psi o j. The frame identities (psi1), (psi2), the
 * trace and nullity identities and xi = N^Psi o j are asserted only where f
 * is Wintgen ideal; reproduction, normality and the vertical curvature
 * everywhere. Failures are recorded per point.
 */
inline DecompositionReport verify_composition(const ChartImmersion& f, const CompositionTriple& t,
                                              const std::vector<Vec>& points, double tol = kDefaultTol) {
  DecompositionReport rep;
  rep.chart = f.label();
  rep.records.resize(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    try {
      rep.records[i] = detail::verify_point(f, t, points[i], tol);
    } catch (const GeometryError& e) {
      DecompositionRecord r;
      r.x = points[i];
      r.error = e.what();
      rep.records[i] = std::move(r);
    }
  });
  rep.summary = summarize(rep.records);
  return rep;
}

/// Gate, extraction and verification; stops with a reason instead of throwing on gate failures.
inline DecompositionReport decompose(const ChartImmersion& f, const Vec& rest, const std::vector<Vec>& points,
                                     double tol = kDefaultTol) {
  DecompositionReport rep;
  rep.chart = f.label();
  try {
    if (f.n() <= 3) fail(ErrorKind::DimensionTooSmall, "the decomposition needs n >= 4");
    const GateResult gate = generic_gate(second_fundamental_form_at(f, detail::slice_point(f.domain().center().head(2), rest)), tol);
    if (!gate.passed) {
      rep.gate_passed = false;
      rep.reason = gate.reason;
      rep.message = "generic gate failed at the slice center";
      return rep;
    }
    const ExtractedPair pair = extract_pair(f, rest, tol);
    DecompositionReport v = verify_composition(f, pair.triple, points, tol);
    v.chart = rep.chart;
    return v;
  } catch (const GeometryError& e) {
    rep.gate_passed = false;
    rep.reason = std::string(to_string(e.kind()));
    rep.message = e.detail();
    return rep;
  }
}

// ---------------------------------------------------------------------------
// Synthetic pullbacks f := Psi o j

/// Fiber coordinates s(x) = s0 + slope_y (y - origin_y) + slope_t (t - origin_t), normalized.
struct SectionSpec {
  Vec s0;
  Mat slope_y;  // m x 2
  Mat slope_t;  // m x (n - 2)
  Vec origin;   // n
  std::vector<int> pivots;  // normal frame pivots of g, fixed for the whole chart
};

struct SyntheticPullback {
  ChartImmersion f;
  CompositionTriple triple;
};

/**
 * The chart x -> Psi(pi(x), w(x)) on jets, with w = sum_a s_a(x) nu_a / |s|
 * for the smooth normal frame nu of g with fixed pivots. Chart order is one
 * less than the surface data order.
 */
inline SyntheticPullback synthetic_pullback(const SupportedSurface& s, const Box& domain, SectionSpec sec) {
  validate(s);
  const int n = static_cast<int>(domain.lo.size());
  const int m = s.g.N() - 2;
  if (n < 3) fail(ErrorKind::DimensionError, "synthetic pullback needs n >= 3");
  if (sec.s0.size() != m || sec.slope_y.rows() != m || sec.slope_y.cols() != 2 || sec.slope_t.rows() != m ||
      sec.slope_t.cols() != n - 2)
    fail(ErrorKind::DimensionError, "section spec does not match the surface and the domain");
  if (sec.origin.size() == 0) sec.origin = domain.center();
  if (sec.origin.size() != n) fail(ErrorKind::DimensionError, "section origin has wrong dimension");
  if (sec.pivots.empty()) sec.pivots = frame_at(s.g, domain.center().head(2)).normal_pivots;
  if (static_cast<int>(sec.pivots.size()) != m) fail(ErrorKind::DimensionError, "section needs m pivots");
  const int order = std::min(s.g.max_order(), s.tau.max_order()) - 1;
  if (order < 2) fail(ErrorKind::JetOrderExceeded, "synthetic pullback needs surface data of order 3");

  auto fiber_jets = [sec, m, n](const JetVector& x) {
    JetVector sv;
    for (int a = 0; a < m; ++a) {
      Jet sa = constant_like(x[0], sec.s0(a));
      for (int i = 0; i < 2; ++i) sa += sec.slope_y(a, i) * (x[i] - sec.origin(i));
      for (int k = 0; k < n - 2; ++k) sa += sec.slope_t(a, k) * (x[2 + k] - sec.origin(2 + k));
      sv.push_back(sa);
    }
    return sv;
  };
  ChartImmersion f(
      s.g.label() + "/pullback", n, s.g.N(), domain,
      [s, sec, fiber_jets, m](const JetVector& x) {
        const int k = x[0].order();
        const Vec y0 = (Vec(2) << x[0].value(), x[1].value()).finished();
        const detail::SurfaceJets sj = detail::surface_jets(s, y0, k, &sec.pivots);
        const std::vector<Jet> inner{x[0], x[1]};
        const JetVector sv = fiber_jets(x);
        const Jet inv_len = sqrt(dot(sv, sv)).reciprocal();
        JetVector out = compose(sj.gstar, inner);
        const Jet rho = sj.rho.compose(inner);
        for (int a = 0; a < m; ++a) axpy(out, rho * sv[a] * inv_len, compose(sj.nu[a], inner));
        JetVector psi = compose(sj.g, inner);
        axpy(psi, -1.0 * sj.tau.compose(inner), out);
        return psi;
      },
      order);

  CompositionTriple triple{s, [s, sec, fiber_jets, m](const Vec& x) {
                             std::vector<double> xs(x.data(), x.data() + x.size());
                             const JetVector sv = fiber_jets(seed_variables(xs, 0));
                             Vec fib(m);
                             for (int a = 0; a < m; ++a) fib(a) = sv[a].value();
                             if (fib.norm() == 0.0) fail(ErrorKind::InvalidInput, "section vanishes");
                             const Vec y = x.head(2);
                             const auto nu = normal_frame_jets(s.g.taylor(y, 1), 2, sec.pivots);
                             Vec w = Vec::Zero(s.g.N());
                             for (int a = 0; a < m; ++a)
                               for (int c = 0; c < s.g.N(); ++c) w(c) += fib(a) * nu[a][c].value();
                             w.normalize();
                             const auto sup = detail::support_first_order(s, y);
                             SectionSample out;
                             out.grad_norm = sup.grad_norm;
                             out.point = BundlePoint{y, w, sup.fp.normal.transpose() * w};
                             return out;
                           }};
  return SyntheticPullback{f, triple};
}

// ---------------------------------------------------------------------------
// Pointwise converse

struct ConverseAssembly {
  PointConfig cfg;
  NormalForm nf;
  double gamma1 = 0.0, gamma2 = 0.0;
  double residual = 0.0;  // DDVV residual
};

/**
 * From a nondegenerate ellipse (kappa1 > kappa2 > 0) and H > 0:
 * gamma1 = (H / kappa1) sqrt(kappa1^2 - kappa2^2), gamma2 = H kappa2 / kappa1,
 * alpha(e1,e1) = kappa1 eta1 + gamma1 eta2 + gamma2 eta3, alpha(e1,e2) = kappa1 eta2,
 * alpha(e2,e2) = -kappa1 eta1 + gamma1 eta2 + gamma2 eta3, alpha(T, .) = <T, .> (gamma1 eta2 + gamma2 eta3).
 */
inline ConverseAssembly assemble_converse_pointwise(double kappa1, double kappa2, double H, int n, int m,
                                                    double tol = kDefaultTol) {
  if (n < 4) fail(ErrorKind::DimensionTooSmall, "the converse needs n >= 4");
  if (m < 3) fail(ErrorKind::DimensionError, "the converse needs m >= 3");
  if (!std::isfinite(kappa1) || !std::isfinite(kappa2) || !std::isfinite(H) || kappa2 < 0.0 || H < 0.0)
    fail(ErrorKind::InvalidInput, "kappa2 and H must be non-negative");
  if (kappa2 == 0.0 || H == 0.0) fail(ErrorKind::NotGeneric, "kappa2 = 0 or H = 0 gives a non-generic point");
  if (kappa1 <= kappa2) fail(ErrorKind::DegenerateEllipse, "kappa1 must exceed kappa2");
  ConverseAssembly out;
  out.gamma1 = H / kappa1 * std::sqrt(kappa1 * kappa1 - kappa2 * kappa2);
  out.gamma2 = H * kappa2 / kappa1;
  out.cfg.n = n;
  out.cfg.m = m;
  out.cfg.A = canonical_shape_operators(n, m, kappa1, out.gamma1, out.gamma2);
  out.residual = ddvv_residual(out.cfg);
  out.nf = wintgen_normal_form(out.cfg, tol);
  return out;
}

}  // namespace wintgen

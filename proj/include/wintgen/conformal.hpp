#pragma once

/**
 * @file conformal.hpp
 * @brief Inversions in spheres acting on point data and on charts, and the
 *        stereographic transfer between the unit sphere and Euclidean space.
 *
 * Inversion convention: I(p) = P0 + R^2 (p - P0) / |p - P0|^2, an involution
 * fixing the sphere of radius R about P0. With u = f - P0, r = |u|, the normal
 * bundle map is the reflection P xi = xi - 2<u, xi> u / r^2 and the shape
 * operators transform as A~_{P xi} = (r^2 A_xi + 2<u, xi> I) / R^2.
 */

#include <string>

#include "wintgen/chart.hpp"
#include "wintgen/pointwise.hpp"

namespace wintgen {

struct InversionSpec {
  Vec center;
  double radius = 1.0;
};

inline constexpr double kAtCenterDistance = 1e-10;

inline Vec invert_point(const Vec& p, const InversionSpec& spec) {
  const Vec u = p - spec.center;
  const double r2 = u.squaredNorm();
  if (std::sqrt(r2) <= kAtCenterDistance) fail(ErrorKind::AtCenter, "point coincides with the inversion center");
  return spec.center + (spec.radius * spec.radius / r2) * u;
}

/// Reflection along u = f - P0; isometric on all of R^N.
inline Vec inversion_normal_map(const Vec& xi, const Vec& u) { return xi - (2.0 * u.dot(xi) / u.squaredNorm()) * u; }

inline PointConfig invert_point_config(const PointConfig& cfg, const InversionSpec& spec) {
  validate(cfg);
  if (!cfg.ambient) fail(ErrorKind::InvalidInput, "inversion needs ambient data");
  if (cfg.c != 0.0) fail(ErrorKind::InvalidInput, "inversion acts on submanifolds of Euclidean space (c = 0)");
  const auto& amb = *cfg.ambient;
  if (spec.radius <= 0.0) fail(ErrorKind::InvalidInput, "inversion radius must be positive");
  if (spec.center.size() != amb.position.size()) fail(ErrorKind::DimensionError, "inversion center has wrong dimension");
  const Vec u = amb.position - spec.center;
  const double r2 = u.squaredNorm();
  if (std::sqrt(r2) <= kAtCenterDistance) fail(ErrorKind::AtCenter, "point coincides with the inversion center");
  const double big_r2 = spec.radius * spec.radius;
  PointConfig out = cfg;
  AmbientData na;
  na.position = spec.center + (big_r2 / r2) * u;
  na.tangent.resize(amb.tangent.rows(), cfg.n);
  na.normal.resize(amb.normal.rows(), cfg.m);
  for (int i = 0; i < cfg.n; ++i) na.tangent.col(i) = inversion_normal_map(amb.tangent.col(i), u);
  for (int a = 0; a < cfg.m; ++a) {
    const Vec xi = amb.normal.col(a);
    na.normal.col(a) = inversion_normal_map(xi, u);
    out.A[a] = (r2 * cfg.A[a] + 2.0 * u.dot(xi) * Mat::Identity(cfg.n, cfg.n)) / big_r2;
  }
  out.ambient = std::move(na);
  return out;
}

inline JetVector invert_jets(const JetVector& p, const InversionSpec& spec) {
  JetVector u = p;
  for (std::size_t i = 0; i < u.size(); ++i) u[i] -= spec.center(static_cast<Eigen::Index>(i));
  const Jet r2 = dot(u, u);
  if (std::sqrt(r2.value()) <= kAtCenterDistance) fail(ErrorKind::AtCenter, "point coincides with the inversion center");
  JetVector y = scaled(u, spec.radius * spec.radius * r2.reciprocal());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += spec.center(static_cast<Eigen::Index>(i));
  return y;
}

inline ChartImmersion invert_chart(const ChartImmersion& f, const InversionSpec& spec) {
  if (spec.center.size() != f.N()) fail(ErrorKind::DimensionError, "inversion center has wrong dimension");
  if (spec.radius <= 0.0) fail(ErrorKind::InvalidInput, "inversion radius must be positive");
  return compose_ambient(
      f, f.N(), [spec](const JetVector& y) { return invert_jets(y, spec); }, f.label() + "+inverted", f.domain());
}

inline constexpr double kPoleDistance = 1e-6;

/// Projection of the unit sphere S^{N-1} from the north pole e_N onto R^{N-1}.
inline JetVector stereographic_jets(const JetVector& p) {
  const std::size_t big_n = p.size();
  const Jet denom = 1.0 - p[big_n - 1];
  JetVector sq = p;
  sq[big_n - 1] -= 1.0;
  if (std::sqrt(dot(sq, sq).value()) < kPoleDistance) fail(ErrorKind::NearPole, "point is too close to the pole");
  const Jet inv = denom.reciprocal();
  JetVector y;
  for (std::size_t i = 0; i + 1 < big_n; ++i) y.push_back(p[i] * inv);
  return y;
}

inline JetVector inverse_stereographic_jets(const JetVector& y) {
  const Jet s = dot(y, y);
  const Jet inv = (s + 1.0).reciprocal();
  JetVector p;
  for (const auto& yi : y) p.push_back(2.0 * yi * inv);
  p.push_back((s - 1.0) * inv);
  return p;
}

/// Chart into S^{N-1} subset R^N carried to R^{N-1}.
inline ChartImmersion stereographic_transfer(const ChartImmersion& f) {
  return compose_ambient(f, f.N() - 1, stereographic_jets, f.label() + "+stereographic", f.domain());
}

/// Chart in R^{N-1} carried onto the unit sphere of R^N.
inline ChartImmersion inverse_stereographic_transfer(const ChartImmersion& f) {
  return compose_ambient(f, f.N() + 1, inverse_stereographic_jets, f.label() + "+to-sphere", f.domain());
}

}  // namespace wintgen

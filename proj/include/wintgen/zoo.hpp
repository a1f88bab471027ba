#pragma once

/**
 * @file zoo.hpp
 * @brief Built-in charts with known geometry.
 */

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "wintgen/chart.hpp"

namespace wintgen {

struct ZooParams {
  std::map<std::string, double> scalars;
  std::map<std::string, std::vector<double>> vectors;

  double get(const std::string& key, double fallback) const {
    const auto it = scalars.find(key);
    return it == scalars.end() ? fallback : it->second;
  }
  std::vector<double> get(const std::string& key, std::vector<double> fallback) const {
    const auto it = vectors.find(key);
    return it == vectors.end() ? fallback : it->second;
  }
};

namespace detail {

inline Box box(std::vector<double> lo, std::vector<double> hi) {
  return Box{Eigen::Map<Vec>(lo.data(), static_cast<Eigen::Index>(lo.size())),
             Eigen::Map<Vec>(hi.data(), static_cast<Eigen::Index>(hi.size()))};
}

inline JetVector padded(JetVector v, int big_n) {
  const Jet zero = constant_like(v[0], 0.0);
  while (static_cast<int>(v.size()) < big_n) v.push_back(zero);
  return v;
}

inline void check_dim(const std::string& id, int big_n, int minimum) {
  if (big_n < minimum) fail(ErrorKind::DimensionError, id + " needs ambient dimension >= " + std::to_string(minimum));
}

inline int int_param(const ZooParams& p, const std::string& key, int fallback) {
  const double v = p.get(key, static_cast<double>(fallback));
  if (v != std::round(v)) fail(ErrorKind::InvalidInput, key + " must be an integer");
  return static_cast<int>(v);
}

// Wintgen-generic data: holomorphic curve (z, z^2) times a flat factor, inverted about
// P0 = (a, 0, ..., 0, b) with radius R.
struct WintgenGenericData {
  int n;
  std::vector<double> a;
  double b, radius;

  static WintgenGenericData from(const ZooParams& p) {
    WintgenGenericData d;
    d.n = int_param(p, "n", 4);
    if (d.n < 3) fail(ErrorKind::DimensionError, "wintgen-generic needs n >= 3");
    d.a = p.get("a", std::vector<double>{0.3, -0.2, 0.5, 0.1});
    if (d.a.size() != 4) fail(ErrorKind::InvalidInput, "wintgen-generic parameter a needs 4 entries");
    d.b = p.get("b", 0.8);
    d.radius = p.get("radius", 1.0);
    if (d.b == 0.0 || d.radius <= 0.0) fail(ErrorKind::InvalidInput, "wintgen-generic needs b != 0 and radius > 0");
    return d;
  }
  int N() const { return n + 3; }
};

}  // namespace detail

/// Ids accepted by zoo_chart.
inline std::vector<std::string> zoo_ids() {
  return {"plane",          "sphere",          "clifford-torus",          "holomorphic-z2",
          "holomorphic-z3", "holomorphic-z2z3", "graph-generic",          "cylinder-superconformal",
          "umbilical-sphere-r6", "cylinder-circle", "wintgen-generic"};
}

inline ChartImmersion zoo_chart(const std::string& id, const ZooParams& p = {}) {
  using detail::box;
  if (id == "plane") {
    const int big_n = detail::int_param(p, "dim", 4);
    detail::check_dim(id, big_n, 3);
    return ChartImmersion(id, 2, big_n, box({-1, -1}, {1, 1}),
                          [big_n](const JetVector& x) { return detail::padded({x[0], x[1]}, big_n); });
  }
  if (id == "sphere") {
    const double r = p.get("radius", 1.0);
    const int big_n = detail::int_param(p, "dim", 3);
    detail::check_dim(id, big_n, 3);
    std::vector<double> c = p.get("center", std::vector<double>(big_n, 0.0));
    if (static_cast<int>(c.size()) != big_n) fail(ErrorKind::InvalidInput, "sphere center has wrong dimension");
    // longitude u, latitude v
    return ChartImmersion(id, 2, big_n, box({-3, -1.2}, {3, 1.2}), [r, c, big_n](const JetVector& x) {
      const Jet cv = cos(x[1]);
      JetVector y = detail::padded({r * cv * cos(x[0]), r * cv * sin(x[0]), r * sin(x[1])}, big_n);
      for (int i = 0; i < big_n; ++i) y[i] += c[i];
      return y;
    });
  }
  if (id == "clifford-torus") {
    return ChartImmersion(id, 2, 4, box({-3, -3}, {3, 3}), [](const JetVector& x) {
      const double s = 1.0 / std::sqrt(2.0);
      return JetVector{s * cos(x[0]), s * sin(x[0]), s * cos(x[1]), s * sin(x[1])};
    });
  }
  if (id == "holomorphic-z2") {
    return ChartImmersion(id, 2, 4, box({-1, -1}, {1, 1}), [](const JetVector& x) {
      const Jet& u = x[0];
      const Jet& v = x[1];
      return JetVector{u, v, u * u - v * v, 2.0 * u * v};
    });
  }
  if (id == "holomorphic-z3") {
    return ChartImmersion(id, 2, 4, box({-1, -1}, {1, 1}), [](const JetVector& x) {
      const Jet& u = x[0];
      const Jet& v = x[1];
      return JetVector{u, v, u * u * u - 3.0 * u * v * v, 3.0 * u * u * v - v * v * v};
    });
  }
  if (id == "holomorphic-z2z3") {
    return ChartImmersion(id, 2, 6, box({-1, -1}, {1, 1}), [](const JetVector& x) {
      const Jet& u = x[0];
      const Jet& v = x[1];
      return JetVector{u, v, u * u - v * v, 2.0 * u * v, u * u * u - 3.0 * u * v * v, 3.0 * u * u * v - v * v * v};
    });
  }
  if (id == "graph-generic") {
    const auto seed = static_cast<std::uint64_t>(p.get("seed", 0.0));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    // monomials u^i v^j with 2 <= i + j <= 3, two graph components
    std::vector<std::array<int, 2>> mono{{2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}};
    std::vector<std::vector<double>> coef(2, std::vector<double>(mono.size()));
    for (auto& row : coef)
      for (auto& c : row) c = u(rng);
    return ChartImmersion(id, 2, 4, box({-1, -1}, {1, 1}), [mono, coef](const JetVector& x) {
      JetVector y{x[0], x[1]};
      for (const auto& row : coef) {
        Jet s = constant_like(x[0], 0.0);
        for (std::size_t k = 0; k < mono.size(); ++k) s += row[k] * ipow(x[0], mono[k][0]) * ipow(x[1], mono[k][1]);
        y.push_back(s);
      }
      return y;
    });
  }
  if (id == "cylinder-superconformal") {
    return ChartImmersion(id, 3, 5, box({-1, -1, -1}, {1, 1, 1}), [](const JetVector& x) {
      const Jet& u = x[0];
      const Jet& v = x[1];
      return JetVector{u, v, u * u - v * v, 2.0 * u * v, x[2]};
    });
  }
  if (id == "umbilical-sphere-r6") {
    const double r = p.get("radius", 1.0);
    std::vector<double> c = p.get("center", std::vector<double>(6, 0.0));
    if (c.size() != 6) fail(ErrorKind::InvalidInput, "umbilical-sphere-r6 center needs 6 entries");
    // inverse stereographic chart of the round 3-sphere in the first four coordinates
    return ChartImmersion(id, 3, 6, box({-1, -1, -1}, {1, 1, 1}), [r, c](const JetVector& x) {
      const Jet s = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
      const Jet k = r / (s + 1.0);
      JetVector y{2.0 * x[0] * k, 2.0 * x[1] * k, 2.0 * x[2] * k, (s - 1.0) * k};
      y = detail::padded(y, 6);
      for (int i = 0; i < 6; ++i) y[i] += c[i];
      return y;
    });
  }
  if (id == "cylinder-circle") {
    const double r = p.get("radius", 1.0);
    return ChartImmersion(id, 2, 3, box({-3, -1}, {3, 1}), [r](const JetVector& x) {
      return JetVector{r * cos(x[0]), r * sin(x[0]), x[1]};
    });
  }
  if (id == "wintgen-generic") {
    const auto d = detail::WintgenGenericData::from(p);
    std::vector<double> lo(d.n, -0.5), hi(d.n, 0.5);
    return ChartImmersion(id, d.n, d.N(), box(lo, hi), [d](const JetVector& x) {
      const Jet& u = x[0];
      const Jet& v = x[1];
      JetVector f0{u, v, u * u - v * v, 2.0 * u * v};
      for (int k = 2; k < d.n; ++k) f0.push_back(x[k]);
      f0.push_back(constant_like(u, 0.0));
      // translate by -P0, invert, translate back
      for (int i = 0; i < 4; ++i) f0[i] -= d.a[i];
      f0.back() -= d.b;
      const Jet k = d.radius * d.radius / dot(f0, f0);
      JetVector y = scaled(f0, k);
      for (int i = 0; i < 4; ++i) y[i] += d.a[i];
      y.back() += d.b;
      return y;
    });
  }
  fail(ErrorKind::InvalidInput, "unknown zoo id '" + id + "'");
}

/**
 * Closed-form surface data of the wintgen-generic chart: the mean curvature
 * spheres of the flat product are the tangent n-planes, which invert to
 * spheres through P0 with center P0 + R^2 w / (2|w|^2) and radius R^2 / (2|w|),
 * w the foot vector from P0 to the tangent n-plane. These are the center map
 * g and tau = 1/H along each leaf.
 */
struct WintgenGenericSupport {
  ChartImmersion g;
  ScalarField tau;
};

inline WintgenGenericSupport wintgen_generic_support(const ZooParams& p = {}) {
  const auto d = detail::WintgenGenericData::from(p);
  auto foot = [d](const JetVector& z) {
    const Jet& u = z[0];
    const Jet& v = z[1];
    JetVector q{u - d.a[0], v - d.a[1], u * u - v * v - d.a[2], 2.0 * u * v - d.a[3]};
    const Jet one = constant_like(u, 1.0), zero = constant_like(u, 0.0);
    const JetVector t1{one, zero, 2.0 * u, 2.0 * v}, t2{zero, one, -2.0 * v, 2.0 * u};
    const Jet inv_len2 = (1.0 + 4.0 * (u * u + v * v)).reciprocal();
    axpy(q, -(dot(t1, q) * inv_len2), t1);
    axpy(q, -(dot(t2, q) * inv_len2), t2);
    JetVector w = q;
    for (int k = 2; k < d.n; ++k) w.push_back(zero);
    w.push_back(zero - d.b);
    return w;
  };
  const double r2 = d.radius * d.radius;
  ChartImmersion g("wintgen-generic-center", 2, d.N(), detail::box({-0.5, -0.5}, {0.5, 0.5}),
                   [d, foot, r2](const JetVector& z) {
                     const JetVector w = foot(z);
                     JetVector y = scaled(w, 0.5 * r2 * dot(w, w).reciprocal());
                     for (int i = 0; i < 4; ++i) y[i] += d.a[i];
                     y.back() += d.b;
                     return y;
                   });
  ScalarField tau("wintgen-generic-tau", [foot, r2](const JetVector& z) {
    const JetVector w = foot(z);
    return 0.5 * r2 * sqrt(dot(w, w)).reciprocal();
  });
  return {g, tau};
}

}  // namespace wintgen

#pragma once

/**
 * @file fuzz.hpp
 * @brief Randomized DDVV checks over shape-operator configurations, with
 *        optional injection of equality configurations.
 */

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wintgen/parallel.hpp"
#include "wintgen/pointwise.hpp"

namespace wintgen {

inline constexpr double kViolationThreshold = -1e-12;
inline constexpr double kEqualityThreshold = 1e-10;

struct FuzzOptions {
  std::size_t count = 1000;
  int n_min = 2, n_max = 6;
  int m_min = 1, m_max = 5;
  std::uint64_t seed = 0;
  std::size_t inject = 0;  // equality configurations spread over the run
  double tol = kDefaultTol;
};

struct FuzzSample {
  PointConfig cfg;
  bool injected = false;
};

struct EqualityHit {
  std::size_t index = 0;
  int n = 0, m = 0;
  double c = 0.0;
  double residual = 0.0;
  bool injected = false;
  std::optional<NormalForm> nf;
  std::string error;
};

struct FuzzReport {
  FuzzOptions options;
  std::size_t violations = 0;
  std::size_t injected = 0;
  double min_residual = 0.0;
  std::size_t min_index = 0;
  std::vector<EqualityHit> hits;
};

inline void validate(const FuzzOptions& o) {
  if (o.count < 1) fail(ErrorKind::InvalidInput, "count must be at least 1");
  if (o.n_min < 2 || o.n_max < o.n_min || o.m_min < 1 || o.m_max < o.m_min)
    fail(ErrorKind::InvalidInput, "need 2 <= n_min <= n_max and 1 <= m_min <= m_max");
  if (o.inject > o.count) fail(ErrorKind::InvalidInput, "inject exceeds count");
  if (o.inject > 0 && (o.n_max < 3 || o.m_max < 2))
    fail(ErrorKind::InvalidInput, "equality injection needs n_max >= 3 and m_max >= 2");
}

/// Symmetric operators with uniform entries in [-scale, scale], scale log-uniform in [0.1, 10].
inline PointConfig random_point_config(std::mt19937_64& rng, int n, int m, double c) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double scale = std::exp(std::log(10.0) * u(rng));
  PointConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.c = c;
  for (int a = 0; a < m; ++a) {
    Mat s(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) s(i, j) = s(j, i) = scale * u(rng);
    cfg.A.push_back(s);
  }
  return cfg;
}

/// The index-th configuration of a run; injected indices are spread evenly.
inline FuzzSample fuzz_sample(const FuzzOptions& o, std::size_t index) {
  std::mt19937_64 rng(detail::stream_seed(o.seed, index));
  std::uniform_int_distribution<int> cd(-1, 1);
  const double c = cd(rng);
  const bool injected =
      o.inject > 0 && ((index + 1) * o.inject) / o.count > (index * o.inject) / o.count;
  FuzzSample s;
  s.injected = injected;
  if (injected) {
    std::uniform_int_distribution<int> nd(std::max(3, o.n_min), o.n_max), md(std::max(2, o.m_min), o.m_max);
    std::uniform_real_distribution<double> mu(0.1, 2.0), g(-2.0, 2.0);
    const int n = nd(rng), m = md(rng);
    const double mv = mu(rng), g1 = g(rng), g2 = g(rng);
    s.cfg = make_equality_config(n, m, mv, g1, g2, rng());
    s.cfg.c = c;
  } else {
    std::uniform_int_distribution<int> nd(o.n_min, o.n_max), md(o.m_min, o.m_max);
    const int n = nd(rng), m = md(rng);
    s.cfg = random_point_config(rng, n, m, c);
  }
  return s;
}

inline FuzzReport ddvv_fuzz(const FuzzOptions& o) {
  validate(o);
  FuzzReport rep;
  rep.options = o;
  std::vector<double> residual(o.count);
  std::vector<char> injected(o.count);
  std::vector<std::optional<EqualityHit>> hit(o.count);
  parallel_for(o.count, [&](std::size_t i) {
    const FuzzSample s = fuzz_sample(o, i);
    residual[i] = ddvv_residual(s.cfg);
    injected[i] = s.injected;
    if (std::abs(residual[i]) <= kEqualityThreshold) {
      EqualityHit h;
      h.index = i;
      h.n = s.cfg.n;
      h.m = s.cfg.m;
      h.c = s.cfg.c;
      h.residual = residual[i];
      h.injected = s.injected;
      try {
        h.nf = wintgen_normal_form(s.cfg, o.tol);
      } catch (const GeometryError& e) {
        h.error = std::string(to_string(e.kind()));
      }
      hit[i] = std::move(h);
    }
  });
  rep.min_residual = residual[0];
  for (std::size_t i = 0; i < o.count; ++i) {
    if (residual[i] < kViolationThreshold) ++rep.violations;
    if (residual[i] < rep.min_residual) {
      rep.min_residual = residual[i];
      rep.min_index = i;
    }
    if (injected[i]) ++rep.injected;
    if (hit[i]) rep.hits.push_back(std::move(*hit[i]));
  }
  return rep;
}

}  // namespace wintgen

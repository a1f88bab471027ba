#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "wintgen/jet.hpp"

using wintgen::Jet;
using wintgen::JetVector;

namespace {

template <class T>
T sample_fn(const T& x1, const T& x2, const T& x3) {
  using std::sin;
  using std::sqrt;
  return sin(x1) * x2 * x2 + sqrt(1.0 + x3 * x3);
}

double fd_value(const std::array<double, 3>& p) { return sample_fn(p[0], p[1], p[2]); }

double rel_err(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

}  // namespace

TEST(Jet, DerivativesMatchCentralDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    std::array<double, 3> p{u(rng), u(rng), u(rng)};
    auto v = wintgen::seed_variables(p, 3);
    const Jet f = sample_fn(v[0], v[1], v[2]);
    EXPECT_NEAR(f.value(), fd_value(p), 1e-14);
    for (int i = 0; i < 3; ++i) {
      auto pp = p, pm = p;
      pp[i] += h;
      pm[i] -= h;
      EXPECT_LT(rel_err(f.d(i), (fd_value(pp) - fd_value(pm)) / (2 * h)), 1e-6);
      // second and third derivatives: differences of the exact lower-order jet
      auto vp = wintgen::seed_variables(pp, 3), vm = wintgen::seed_variables(pm, 3);
      const Jet fp = sample_fn(vp[0], vp[1], vp[2]), fm = sample_fn(vm[0], vm[1], vm[2]);
      for (int j = 0; j < 3; ++j) {
        EXPECT_LT(rel_err(f.d2(i, j), (fp.d(j) - fm.d(j)) / (2 * h)), 1e-6);
        for (int k = 0; k < 3; ++k)
          EXPECT_LT(rel_err(f.d3(i, j, k), (fp.d2(j, k) - fm.d2(j, k)) / (2 * h)), 1e-6);
      }
    }
  }
}

TEST(Jet, TensorsAreSymmetric) {
  std::array<double, 3> p{0.3, -0.7, 1.1};
  auto v = wintgen::seed_variables(p, 3);
  const Jet f = exp(v[0] * v[1]) / (2.0 + cos(v[2] * v[0]));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(f.d2(i, j), f.d2(j, i));
      for (int k = 0; k < 3; ++k) {
        EXPECT_EQ(f.d3(i, j, k), f.d3(j, i, k));
        EXPECT_EQ(f.d3(i, j, k), f.d3(k, j, i));
      }
    }
}

TEST(Jet, CompositionOfPolynomialsIsExact) {
  // outer F(a,b) = a^2 b + 3b^3, inner a = x + 2y^2, b = xy - 1 ; expanded by hand
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double x = u(rng), y = u(rng);
    auto xy = wintgen::seed_variables(std::array<double, 2>{x, y}, 3);
    JetVector inner{xy[0] + 2.0 * xy[1] * xy[1], xy[0] * xy[1] - 1.0};
    std::array<double, 2> ab{inner[0].value(), inner[1].value()};
    auto vab = wintgen::seed_variables(ab, 3);
    const Jet outer = vab[0] * vab[0] * vab[1] + 3.0 * vab[1] * vab[1] * vab[1];
    const Jet composed = outer.compose(inner);
    const Jet direct = inner[0] * inner[0] * inner[1] + 3.0 * inner[1] * inner[1] * inner[1];
    EXPECT_NEAR(composed.value(), direct.value(), 1e-10);
    for (int i = 0; i < 2; ++i) {
      EXPECT_NEAR(composed.d(i), direct.d(i), 1e-10);
      for (int j = 0; j < 2; ++j) {
        EXPECT_NEAR(composed.d2(i, j), direct.d2(i, j), 1e-10);
        for (int k = 0; k < 2; ++k) EXPECT_NEAR(composed.d3(i, j, k), direct.d3(i, j, k), 1e-10);
      }
    }
  }
}

TEST(Jet, PowerAndLogChainRule) {
  auto v = wintgen::seed_variables(std::array<double, 1>{1.7}, 3);
  const Jet p = pow(v[0], 2.5);
  EXPECT_NEAR(p.d(0), 2.5 * std::pow(1.7, 1.5), 1e-12);
  EXPECT_NEAR(p.d3(0, 0, 0), 2.5 * 1.5 * 0.5 * std::pow(1.7, -0.5), 1e-12);
  const Jet l = log(v[0]);
  EXPECT_NEAR(l.d2(0, 0), -1.0 / (1.7 * 1.7), 1e-14);
  const Jet q = ipow(v[0], -2);
  EXPECT_NEAR(q.d(0), -2.0 / std::pow(1.7, 3), 1e-13);
}

TEST(Jet, DerivativeAndTruncation) {
  auto v = wintgen::seed_variables(std::array<double, 2>{0.4, 0.9}, 3);
  const Jet f = sin(v[0]) * v[1] * v[1];
  const Jet fx = f.derivative(0);
  EXPECT_EQ(fx.order(), 2);
  EXPECT_NEAR(fx.value(), std::cos(0.4) * 0.81, 1e-15);
  EXPECT_NEAR(fx.d2(1, 1), 2 * std::cos(0.4), 1e-15);
  EXPECT_EQ(f.truncated(1).order(), 1);
  EXPECT_THROW(Jet(2, 4, 0.0), wintgen::GeometryError);
}

TEST(Jet, MatrixInverse) {
  auto v = wintgen::seed_variables(std::array<double, 2>{0.2, -0.3}, 2);
  std::vector<Jet> a{2.0 + v[0], v[1], v[0] * v[1], 3.0 - v[1]};
  auto inv = wintgen::inverse(a, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Jet s = a[i * 2] * inv[j] + a[i * 2 + 1] * inv[2 + j];
      EXPECT_NEAR(s.value(), i == j ? 1.0 : 0.0, 1e-14);
      for (int k = 0; k < 2; ++k) EXPECT_NEAR(s.d(k), 0.0, 1e-14);
      EXPECT_NEAR(s.d2(0, 1), 0.0, 1e-13);
    }
}

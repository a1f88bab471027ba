#pragma once

/**
 * @file jet.hpp
 * @brief Truncated Taylor arithmetic (forward-mode jets) up to order three.
 *
 * A Jet holds the value, gradient, Hessian and third-derivative tensor of a
 * scalar quantity with respect to `dim` chart variables. Arithmetic follows
 * the Leibniz rule and analytic functions are applied through the univariate
 * Faa di Bruno formula, so derivatives are exact up to rounding.
 *
 * Hessian and third tensors are stored densely but every operation writes
 * all index permutations from the same computed value, so symmetry is exact.
 */

#include <algorithm>
#include <cassert>
#include <cmath>
#include <span>
#include <vector>

#include "wintgen/errors.hpp"

namespace wintgen {

class Jet {
 public:
  static constexpr int kMaxOrder = 3;

  Jet() = default;

  /// Constant jet with all derivatives zero.
  Jet(int dim, int order, double value) : dim_(dim), order_(order), value_(value) {
    if (dim < 0 || order < 0 || order > kMaxOrder) {
      fail(ErrorKind::JetOrderExceeded, "jet order must lie in [0, 3]");
    }
    allocate();
  }

  static Jet constant(int dim, int order, double value) { return Jet(dim, order, value); }

  /// The coordinate function x_index seeded at `value`.
  static Jet variable(int dim, int order, int index, double value) {
    Jet j(dim, order, value);
    if (order >= 1) j.grad_[index] = 1.0;
    return j;
  }

  int dim() const { return dim_; }
  int order() const { return order_; }
  double value() const { return value_; }

  double d(int i) const { return grad_[i]; }
  double d2(int i, int j) const { return hess_[i * dim_ + j]; }
  double d3(int i, int j, int k) const { return third_[(i * dim_ + j) * dim_ + k]; }

  void set_value(double v) { value_ = v; }
  void set_d(int i, double v) { grad_[i] = v; }
  void set_d2(int i, int j, double v) {
    hess_[i * dim_ + j] = v;
    hess_[j * dim_ + i] = v;
  }
  void set_d3(int i, int j, int k, double v) {
    const int p[6][3] = {{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}};
    for (const auto& q : p) third_[(q[0] * dim_ + q[1]) * dim_ + q[2]] = v;
  }

  std::span<const double> gradient() const { return grad_; }

  /// Same quantity, derivatives above `order` discarded.
  Jet truncated(int order) const {
    if (order >= order_) return *this;
    Jet r(dim_, order, value_);
    if (order >= 1) r.grad_ = grad_;
    if (order >= 2) r.hess_ = hess_;
    return r;
  }

  /// Jet of the partial derivative with respect to variable i (one order lower).
  Jet derivative(int i) const {
    if (order_ < 1) fail(ErrorKind::JetOrderExceeded, "cannot differentiate an order-0 jet");
    Jet r(dim_, order_ - 1, grad_[i]);
    for (int a = 0; a < dim_ && r.order_ >= 1; ++a) r.grad_[a] = d2(i, a);
    if (r.order_ >= 2) {
      for (int a = 0; a < dim_; ++a)
        for (int b = 0; b < dim_; ++b) r.hess_[a * dim_ + b] = d3(i, a, b);
    }
    return r;
  }

  /// Re-expresses the jet in `new_dim` variables; variable a maps to index_map[a].
  Jet lifted(int new_dim, std::span<const int> index_map) const {
    Jet r(new_dim, order_, value_);
    const int d = dim_;
    for (int a = 0; a < d && order_ >= 1; ++a) r.grad_[index_map[a]] = grad_[a];
    if (order_ >= 2) {
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          r.hess_[index_map[a] * new_dim + index_map[b]] = d2(a, b);
    }
    if (order_ >= 3) {
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          for (int c = 0; c < d; ++c)
            r.third_[(index_map[a] * new_dim + index_map[b]) * new_dim + index_map[c]] = d3(a, b, c);
    }
    return r;
  }

  /// Taylor-polynomial value at displacement h (uses all stored orders).
  double evaluate_at(std::span<const double> h) const {
    double s = value_;
    for (int i = 0; i < dim_ && order_ >= 1; ++i) {
      s += grad_[i] * h[i];
      if (order_ >= 2) {
        for (int j = 0; j < dim_; ++j) {
          s += 0.5 * d2(i, j) * h[i] * h[j];
          if (order_ >= 3) {
            for (int k = 0; k < dim_; ++k) s += d3(i, j, k) * h[i] * h[j] * h[k] / 6.0;
          }
        }
      }
    }
    return s;
  }

  /**
   * Truncated composition: treats *this as the Taylor expansion of an outer
   * function at the point inner[i].value() and substitutes the inner jets.
   * The result lives in the inner jets' variables.
   */
  Jet compose(std::span<const Jet> inner) const {
    assert(static_cast<int>(inner.size()) == dim_);
    const int d = inner.empty() ? 0 : inner[0].dim();
    int order = order_;
    for (const auto& j : inner) order = std::min(order, j.order());
    std::vector<Jet> delta;
    delta.reserve(inner.size());
    for (const auto& j : inner) {
      Jet t = j.truncated(order);
      t.value_ = 0.0;
      delta.push_back(std::move(t));
    }
    Jet result(d, order, value_);
    if (order == 0) return result;
    for (int i = 0; i < dim_; ++i) {
      Jet a(d, order, grad_[i]);
      if (order >= 2) {
        Jet acc(d, order, 0.0);
        for (int j = 0; j < dim_; ++j) {
          Jet b(d, order, d2(i, j));
          if (order >= 3) {
            for (int k = 0; k < dim_; ++k) b.axpy(d3(i, j, k) / 3.0, delta[k]);
          }
          acc += b * delta[j];
        }
        a.axpy(0.5, acc);
      }
      result += a * delta[i];
    }
    return result;
  }

  /// this += alpha * other, elementwise on all coefficients.
  Jet& axpy(double alpha, const Jet& other) {
    match(other);
    value_ += alpha * other.value_;
    for (std::size_t i = 0; i < grad_.size(); ++i) grad_[i] += alpha * other.grad_[i];
    for (std::size_t i = 0; i < hess_.size(); ++i) hess_[i] += alpha * other.hess_[i];
    for (std::size_t i = 0; i < third_.size(); ++i) third_[i] += alpha * other.third_[i];
    return *this;
  }

  Jet& operator+=(const Jet& o) { return axpy(1.0, o); }
  Jet& operator-=(const Jet& o) { return axpy(-1.0, o); }
  Jet& operator+=(double s) {
    value_ += s;
    return *this;
  }
  Jet& operator-=(double s) {
    value_ -= s;
    return *this;
  }
  Jet& operator*=(double s) {
    value_ *= s;
    for (auto& v : grad_) v *= s;
    for (auto& v : hess_) v *= s;
    for (auto& v : third_) v *= s;
    return *this;
  }
  Jet& operator/=(double s) { return *this *= (1.0 / s); }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return (-a) += s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator/(double s, const Jet& a) { return s * a.reciprocal(); }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }

  Jet operator-() const {
    Jet r = *this;
    r *= -1.0;
    return r;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    const int order = std::min(a.order_, b.order_);
    const int d = a.dim_;
    if (a.dim_ != b.dim_) fail(ErrorKind::DimensionError, "jet dimension mismatch");
    Jet r(d, order, a.value_ * b.value_);
    if (order >= 1) {
      for (int i = 0; i < d; ++i) r.grad_[i] = a.grad_[i] * b.value_ + a.value_ * b.grad_[i];
    }
    if (order >= 2) {
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
          r.set_d2(i, j,
                   a.d2(i, j) * b.value_ + a.grad_[i] * b.grad_[j] + a.grad_[j] * b.grad_[i] +
                       a.value_ * b.d2(i, j));
    }
    if (order >= 3) {
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
          for (int k = j; k < d; ++k) {
            const double v = a.d3(i, j, k) * b.value_ + a.d2(i, j) * b.grad_[k] +
                             a.d2(i, k) * b.grad_[j] + a.d2(j, k) * b.grad_[i] +
                             a.grad_[i] * b.d2(j, k) + a.grad_[j] * b.d2(i, k) +
                             a.grad_[k] * b.d2(i, j) + a.value_ * b.d3(i, j, k);
            r.set_d3(i, j, k, v);
          }
    }
    return r;
  }

  /**
   * Chain rule with a univariate function whose derivatives at value() are
   * f0..f3.
   */
  Jet apply(double f0, double f1, double f2, double f3) const {
    const int d = dim_;
    Jet r(d, order_, f0);
    if (order_ >= 1) {
      for (int i = 0; i < d; ++i) r.grad_[i] = f1 * grad_[i];
    }
    if (order_ >= 2) {
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) r.set_d2(i, j, f2 * grad_[i] * grad_[j] + f1 * d2(i, j));
    }
    if (order_ >= 3) {
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
          for (int k = j; k < d; ++k) {
            const double v = f3 * grad_[i] * grad_[j] * grad_[k] +
                             f2 * (d2(i, j) * grad_[k] + d2(i, k) * grad_[j] + d2(j, k) * grad_[i]) +
                             f1 * d3(i, j, k);
            r.set_d3(i, j, k, v);
          }
    }
    return r;
  }

  Jet reciprocal() const {
    const double x = value_;
    return apply(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x), -6.0 / (x * x * x * x));
  }

 private:
  void allocate() {
    grad_.assign(order_ >= 1 ? dim_ : 0, 0.0);
    hess_.assign(order_ >= 2 ? dim_ * dim_ : 0, 0.0);
    third_.assign(order_ >= 3 ? dim_ * dim_ * dim_ : 0, 0.0);
  }

  // Brings *this down to a common order with `other` before a linear update.
  void match(const Jet& other) {
    if (dim_ != other.dim_) fail(ErrorKind::DimensionError, "jet dimension mismatch");
    if (other.order_ < order_) *this = truncated(other.order_);
  }

  int dim_ = 0;
  int order_ = 0;
  double value_ = 0.0;
  std::vector<double> grad_;
  std::vector<double> hess_;
  std::vector<double> third_;
};

inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.value());
  const double x = a.value();
  return a.apply(s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x));
}

inline Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.apply(s, c, -s, -c);
}

inline Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.apply(c, -s, -c, s);
}

inline Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return a.apply(e, e, e, e);
}

inline Jet log(const Jet& a) {
  const double x = a.value();
  return a.apply(std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
}

/// Real power x^p for x > 0 (or any x when p is a small non-negative integer, see ipow).
inline Jet pow(const Jet& a, double p) {
  const double x = a.value();
  return a.apply(std::pow(x, p), p * std::pow(x, p - 1), p * (p - 1) * std::pow(x, p - 2),
                 p * (p - 1) * (p - 2) * std::pow(x, p - 3));
}

inline Jet ipow(const Jet& a, int p) {
  if (p < 0) return ipow(a, -p).reciprocal();
  Jet r = Jet::constant(a.dim(), a.order(), 1.0);
  Jet base = a;
  while (p > 0) {
    if (p & 1) r = r * base;
    p >>= 1;
    if (p > 0) base = base * base;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Vectors of jets (ambient-valued quantities).

using JetVector = std::vector<Jet>;

inline Jet dot(const JetVector& a, const JetVector& b) {
  Jet s = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline JetVector scaled(const JetVector& a, const Jet& s) {
  JetVector r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(x * s);
  return r;
}

inline JetVector scaled(const JetVector& a, double s) {
  JetVector r = a;
  for (auto& x : r) x *= s;
  return r;
}

inline void axpy(JetVector& y, const Jet& alpha, const JetVector& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

inline void axpy(JetVector& y, double alpha, const JetVector& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i].axpy(alpha, x[i]);
}

inline JetVector normalized(const JetVector& a) { return scaled(a, sqrt(dot(a, a)).reciprocal()); }

inline JetVector derivative(const JetVector& a, int i) {
  JetVector r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(x.derivative(i));
  return r;
}

inline JetVector truncated(const JetVector& a, int order) {
  JetVector r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(x.truncated(order));
  return r;
}

inline JetVector compose(const JetVector& outer, std::span<const Jet> inner) {
  JetVector r;
  r.reserve(outer.size());
  for (const auto& x : outer) r.push_back(x.compose(inner));
  return r;
}

inline JetVector lifted(const JetVector& a, int new_dim, std::span<const int> index_map) {
  JetVector r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(x.lifted(new_dim, index_map));
  return r;
}

/// Seeds `x.size()` coordinate jets at the point x.
inline JetVector seed_variables(std::span<const double> x, int order) {
  JetVector v;
  const int d = static_cast<int>(x.size());
  v.reserve(x.size());
  for (int i = 0; i < d; ++i) v.push_back(Jet::variable(d, order, i, x[i]));
  return v;
}

/**
 * Inverse of a small square matrix of jets by Gauss-Jordan elimination with
 * partial pivoting on the values. `a` is row-major k x k.
 */
inline std::vector<Jet> inverse(std::vector<Jet> a, int k) {
  const int d = a[0].dim();
  const int order = a[0].order();
  std::vector<Jet> inv(k * k, Jet(d, order, 0.0));
  for (int i = 0; i < k; ++i) inv[i * k + i] = Jet(d, order, 1.0);
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(a[r * k + col].value()) > std::abs(a[piv * k + col].value())) piv = r;
    if (a[piv * k + col].value() == 0.0) fail(ErrorKind::RankDeficient, "singular jet matrix");
    if (piv != col) {
      for (int c = 0; c < k; ++c) {
        std::swap(a[piv * k + c], a[col * k + c]);
        std::swap(inv[piv * k + c], inv[col * k + c]);
      }
    }
    const Jet rinv = a[col * k + col].reciprocal();
    for (int c = 0; c < k; ++c) {
      a[col * k + c] = a[col * k + c] * rinv;
      inv[col * k + c] = inv[col * k + c] * rinv;
    }
    for (int r = 0; r < k; ++r) {
      if (r == col) continue;
      const Jet f = a[r * k + col];
      for (int c = 0; c < k; ++c) {
        a[r * k + c] -= f * a[col * k + c];
        inv[r * k + c] -= f * inv[col * k + c];
      }
    }
  }
  return inv;
}

}  // namespace wintgen

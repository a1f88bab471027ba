#pragma once

/**
 * @file chart.hpp
 * @brief Charts of immersed submanifolds, evaluated as jets.
 *
 * A ChartImmersion wraps a map R^n -> R^N written against JetVector inputs,
 * so the same code yields values, Taylor expansions at a point, and
 * compositions with other jet maps (reparametrizations, ambient maps).
 */

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wintgen/errors.hpp"
#include "wintgen/jet.hpp"
#include "wintgen/linalg.hpp"

namespace wintgen {

struct Box {
  Vec lo, hi;

  bool contains(const Vec& x, double slack = 1e-12) const {
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x(i) < lo(i) - slack || x(i) > hi(i) + slack) return false;
    return true;
  }

  Vec center() const { return 0.5 * (lo + hi); }
};

/// Tensor grid with `count` points per axis, endpoints included (a single point sits at the midpoint).
struct GridSpec {
  Vec min, max;
  std::vector<int> count;

  std::size_t size() const {
    std::size_t s = 1;
    for (int c : count) s *= static_cast<std::size_t>(c);
    return count.empty() ? 0 : s;
  }

  Vec point(std::size_t index) const {
    Vec x(static_cast<Eigen::Index>(count.size()));
    for (std::size_t axis = 0; axis < count.size(); ++axis) {
      const int c = count[axis];
      const int k = static_cast<int>(index % static_cast<std::size_t>(c));
      index /= static_cast<std::size_t>(c);
      const auto a = static_cast<Eigen::Index>(axis);
      x(a) = c == 1 ? 0.5 * (min(a) + max(a)) : min(a) + (max(a) - min(a)) * k / (c - 1);
    }
    return x;
  }

  std::vector<Vec> points() const {
    std::vector<Vec> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(point(i));
    return out;
  }

  static GridSpec uniform(const Box& box, int per_axis) {
    GridSpec g{box.lo, box.hi, std::vector<int>(static_cast<std::size_t>(box.lo.size()), per_axis)};
    return g;
  }
};

/// Jet with the dim and order of `like`, holding a constant.
inline Jet constant_like(const Jet& like, double value) { return Jet(like.dim(), like.order(), value); }

class ChartImmersion {
 public:
  using Map = std::function<JetVector(const JetVector&)>;

  ChartImmersion() = default;
  ChartImmersion(std::string label, int n, int big_n, Box domain, Map map, int max_order = Jet::kMaxOrder)
      : label_(std::move(label)), n_(n), big_n_(big_n), domain_(std::move(domain)),
        map_(std::make_shared<Map>(std::move(map))), max_order_(max_order) {}

  const std::string& label() const { return label_; }
  int n() const { return n_; }
  int N() const { return big_n_; }
  const Box& domain() const { return domain_; }
  int max_order() const { return max_order_; }

  /// Substitutes arbitrary input jets (composition f o x).
  JetVector operator()(const JetVector& x) const {
    if (static_cast<int>(x.size()) != n_) fail(ErrorKind::DimensionError, "chart input has wrong dimension");
    JetVector y = (*map_)(x);
    if (static_cast<int>(y.size()) != big_n_) fail(ErrorKind::DimensionError, "chart output has wrong dimension");
    return y;
  }

  /// Taylor expansion of the chart at x in its own coordinates.
  JetVector taylor(const Vec& x, int order) const {
    if (order > max_order_)
      fail(ErrorKind::JetOrderExceeded, label_ + " provides derivatives up to order " + std::to_string(max_order_));
    std::vector<double> xs(x.data(), x.data() + x.size());
    return (*this)(seed_variables(xs, order));
  }

  Vec value(const Vec& x) const {
    const JetVector y = taylor(x, 0);
    Vec v(big_n_);
    for (int i = 0; i < big_n_; ++i) v(i) = y[i].value();
    return v;
  }

  /// N x n Jacobian.
  Mat jacobian(const Vec& x) const {
    const JetVector y = taylor(x, 1);
    Mat j(big_n_, n_);
    for (int a = 0; a < big_n_; ++a)
      for (int i = 0; i < n_; ++i) j(a, i) = y[a].d(i);
    return j;
  }

 private:
  std::string label_;
  int n_ = 0;
  int big_n_ = 0;
  Box domain_;
  std::shared_ptr<const Map> map_;
  int max_order_ = Jet::kMaxOrder;
};

/// F o phi, where phi maps the new box into F's chart coordinates.
inline ChartImmersion reparametrize(const ChartImmersion& f, Box domain, ChartImmersion::Map phi,
                                    std::string label) {
  return ChartImmersion(std::move(label), f.n(), f.N(), std::move(domain),
                        [f, phi](const JetVector& x) { return f(phi(x)); }, f.max_order());
}

/// A o F for an ambient map A: R^N -> R^{N'} written on jets.
inline ChartImmersion compose_ambient(const ChartImmersion& f, int new_n, ChartImmersion::Map ambient,
                                      std::string label, Box domain) {
  return ChartImmersion(std::move(label), f.n(), new_n, std::move(domain),
                        [f, ambient](const JetVector& x) { return ambient(f(x)); }, f.max_order());
}

/// Real function on a chart domain, evaluated on jets like ChartImmersion.
class ScalarField {
 public:
  using Map = std::function<Jet(const JetVector&)>;

  ScalarField() = default;
  ScalarField(std::string label, Map map, int max_order = Jet::kMaxOrder)
      : label_(std::move(label)), map_(std::make_shared<Map>(std::move(map))), max_order_(max_order) {}

  const std::string& label() const { return label_; }
  int max_order() const { return max_order_; }
  Jet operator()(const JetVector& x) const { return (*map_)(x); }

  Jet taylor(const Vec& x, int order) const {
    if (order > max_order_)
      fail(ErrorKind::JetOrderExceeded, label_ + " provides derivatives up to order " + std::to_string(max_order_));
    std::vector<double> xs(x.data(), x.data() + x.size());
    return (*this)(seed_variables(xs, order));
  }

  double value(const Vec& x) const { return taylor(x, 0).value(); }

 private:
  std::string label_;
  std::shared_ptr<const Map> map_;
  int max_order_ = Jet::kMaxOrder;
};

/**
 * Chart given by value, exact gradient and a second-derivative callback at a
 * point; evaluation builds the order-2 Taylor polynomial and composes it with
 * the input jets. Used for derived surfaces whose second derivatives come
 * from differences of exact first derivatives.
 */
struct PointJet {
  Vec value;
  Mat grad;                 // rows = components, cols = variables
  std::vector<Mat> hess;    // one symmetric matrix per component
};

inline JetVector compose_point_jet(const PointJet& pj, const JetVector& x) {
  const int n = static_cast<int>(x.size());
  const int comps = static_cast<int>(pj.value.size());
  JetVector out;
  out.reserve(comps);
  for (int a = 0; a < comps; ++a) {
    Jet outer(n, 2, pj.value(a));
    for (int i = 0; i < n; ++i) {
      outer.set_d(i, pj.grad(a, i));
      for (int j = i; j < n; ++j) outer.set_d2(i, j, pj.hess[a](i, j));
    }
    out.push_back(outer.compose(x));
  }
  return out;
}

}  // namespace wintgen

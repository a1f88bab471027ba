#pragma once

/**
 * @file linalg.hpp
 * @brief Small dense linear algebra: Gram-Schmidt, sorted symmetric
 *        eigensolves, numerical kernels and seeded random rotations.
 *
 * Everything here operates on matrices of at most a few dozen rows; Eigen
 * does the heavy lifting and this layer fixes ordering and orientation so
 * results are deterministic.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "wintgen/errors.hpp"

namespace wintgen {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Default relative verification tolerance.
inline constexpr double kDefaultTol = 1e-8;
/// Eigenvalues closer than this are treated as one degenerate cluster.
inline constexpr double kEigenGap = 1e-9;

struct GramSchmidtResult {
  std::vector<Vec> basis;
  int rank = 0;
  std::vector<std::size_t> dropped;  // input indices rejected as dependent
};

/**
 * Modified Gram-Schmidt with one re-orthogonalization pass, in input order.
 * A vector is dropped when its residual norm falls below tol * (largest
 * input norm).
 */
inline GramSchmidtResult gram_schmidt(const std::vector<Vec>& vectors, double tol) {
  GramSchmidtResult out;
  if (vectors.empty()) return out;
  double max_norm = 0.0;
  for (const auto& v : vectors) max_norm = std::max(max_norm, v.norm());
  const double threshold = tol * max_norm;
  for (std::size_t idx = 0; idx < vectors.size(); ++idx) {
    Vec r = vectors[idx];
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : out.basis) r -= q.dot(r) * q;
    }
    const double nr = r.norm();
    if (nr < threshold || nr == 0.0) {
      out.dropped.push_back(idx);
      continue;
    }
    out.basis.push_back(r / nr);
  }
  out.rank = static_cast<int>(out.basis.size());
  return out;
}

/// Column-matrix convenience form; returns the orthonormal basis as columns.
inline Mat gram_schmidt_columns(const Mat& a, double tol) {
  std::vector<Vec> cols;
  for (int j = 0; j < a.cols(); ++j) cols.push_back(a.col(j));
  const auto gs = gram_schmidt(cols, tol);
  Mat q(a.rows(), gs.rank);
  for (int j = 0; j < gs.rank; ++j) q.col(j) = gs.basis[j];
  return q;
}

struct SymEig {
  Vec values;   // descending
  Mat vectors;  // columns, orthonormal
};

/// Flips v so that its largest-magnitude entry (first on ties) is positive.
inline void orient_positive(Eigen::Ref<Vec> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v(i)) > std::abs(v(best)) + 1e-14) best = i;
  if (v(best) < 0) v = -v;
}

/**
 * Symmetric eigensolve with eigenvalues sorted descending. Every eigenvector
 * is oriented so its largest-magnitude component is positive, which makes
 * degenerate clusters (gap < kEigenGap) reproducible as well.
 */
inline SymEig sym_eig(const Mat& s) {
  const Mat sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
  const Eigen::Index n = sym.rows();
  SymEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  for (Eigen::Index i = 0; i < n; ++i) orient_positive(out.vectors.col(i));
  return out;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the index-th stream derived from a run seed; independent of thread scheduling.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (0xd1b54a32d192ed03ULL * (index + 1));
  splitmix64(state);
  return splitmix64(state);
}

}  // namespace detail

/**
 * Haar-distributed rotation (det +1), reproducible for a fixed seed.
 * QR of a Gaussian matrix with the sign convention diag(R) > 0.
 */
inline Mat random_rotation(int dim, std::uint64_t seed) {
  if (dim < 1) fail(ErrorKind::DimensionError, "random_rotation needs dim >= 1");
  if (dim == 1) return Mat::Identity(1, 1);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(dim, dim);
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

/// Number of singular values above tol * (1 + largest singular value).
inline int numerical_rank(const Mat& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  const double threshold = tol * (1.0 + (s.size() ? s(0) : 0.0));
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > threshold) ++rank;
  return rank;
}

/// Orthonormal basis (columns) of the numerical kernel of a, same threshold as numerical_rank.
inline Mat null_space(const Mat& a, double tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double threshold = tol * (1.0 + (s.size() ? s(0) : 0.0));
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > threshold) ++rank;
  Mat k = svd.matrixV().rightCols(n - rank);
  return k;
}

/// Greedy choice of standard basis vectors completing q: each step takes the one with the
/// largest residual against the current basis (lowest index on ties).
inline std::vector<int> complement_pivots(const Mat& q) {
  const Eigen::Index dim = q.rows();
  const Eigen::Index need = dim - q.cols();
  Mat basis = q;
  std::vector<int> pivots;
  std::vector<bool> used(dim, false);
  for (Eigen::Index step = 0; step < need; ++step) {
    Eigen::Index best = -1;
    double best_norm = -1.0;
    Vec best_r;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (used[i]) continue;
      Vec r = Vec::Unit(dim, i);
      for (int pass = 0; pass < 2; ++pass) r -= basis * (basis.transpose() * r);
      if (r.norm() > best_norm + 1e-12) {
        best_norm = r.norm();
        best = i;
        best_r = r;
      }
    }
    used[best] = true;
    pivots.push_back(static_cast<int>(best));
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = best_r / best_norm;
  }
  return pivots;
}

/// Completes the orthonormal columns of q to a basis of R^rows; returns only the new columns,
/// built by Gram-Schmidt on the standard vectors chosen by complement_pivots.
inline Mat orthonormal_complement(const Mat& q) {
  const auto pivots = complement_pivots(q);
  Mat basis = q;
  Mat extra(q.rows(), static_cast<Eigen::Index>(pivots.size()));
  for (std::size_t step = 0; step < pivots.size(); ++step) {
    Vec r = Vec::Unit(q.rows(), pivots[step]);
    for (int pass = 0; pass < 2; ++pass) r -= basis * (basis.transpose() * r);
    extra.col(step) = r.normalized();
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = extra.col(step);
  }
  return extra;
}

inline double max_abs(const Mat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace wintgen

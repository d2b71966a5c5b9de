#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "facpca/error.hpp"
#include "facpca/stats.hpp"

namespace facpca {

/// Eigenpairs of a symmetric matrix, sorted by non-increasing eigenvalue.
/// Column j of `eigenvectors` belongs to `eigenvalues(j)`; in every column
/// the entry of largest magnitude is non-negative.
template <typename Scalar>
struct EigenDecomposition {
  Vector<Scalar> eigenvalues;
  Matrix<Scalar> eigenvectors;
  int sweeps = 0;
  /// Off-diagonal Frobenius norm of the working matrix before each sweep and
  /// after the last one.
  std::vector<Scalar> off_diagonal_history;

  Index size() const { return eigenvalues.size(); }
};

using EigenDecompositiond = EigenDecomposition<double>;

struct JacobiOptions {
  int max_sweeps = 100;
  /// Stop once every off-diagonal entry is below this, relative to max(1, max|A|).
  double off_diagonal_tol = 1e-12;
  /// Entries at or below this (same scaling) are not rotated.
  double rotation_threshold = 1e-13;
  /// Input is a correlation matrix: clamp tiny negative eigenvalues, reject
  /// clearly negative ones.
  bool correlation = false;
};

namespace detail {

inline void check_plane(Index n, Index i, Index j) {
  if (i < 0 || j >= n || i >= j) {
    throw Error(ErrorKind::Index, "invalid rotation plane (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") for n=" + std::to_string(n));
  }
}

/// acc <- acc * plane_rotation(i, j) with the rotation given by (c, s).
/// Only columns i and j change.
template <typename Derived, typename Scalar>
void rotate_columns(Eigen::MatrixBase<Derived>& acc, Index i, Index j, Scalar c, Scalar s) {
  for (Index p = 0; p < acc.rows(); ++p) {
    const Scalar a = acc(p, i);
    const Scalar b = acc(p, j);
    acc(p, i) = c * a - s * b;
    acc(p, j) = s * a + c * b;
  }
}

/// acc <- plane_rotation(i, j)^T * acc. Only rows i and j change.
template <typename Derived, typename Scalar>
void rotate_rows(Eigen::MatrixBase<Derived>& acc, Index i, Index j, Scalar c, Scalar s) {
  for (Index p = 0; p < acc.cols(); ++p) {
    const Scalar a = acc(i, p);
    const Scalar b = acc(j, p);
    acc(i, p) = c * a - s * b;
    acc(j, p) = s * a + c * b;
  }
}

template <typename Derived>
typename Derived::Scalar off_diagonal_norm(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  Scalar sum = 0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

template <typename Derived>
typename Derived::Scalar off_diagonal_max(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  Scalar m = 0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < j; ++i) m = std::max(m, std::abs(a(i, j)));
  return m;
}

/// Flip each column so that its largest-magnitude entry (first one on ties)
/// is non-negative.
template <typename Scalar>
void normalize_signs(Matrix<Scalar>& u) {
  for (Index j = 0; j < u.cols(); ++j) {
    Index arg = 0;
    for (Index i = 1; i < u.rows(); ++i)
      if (std::abs(u(i, j)) > std::abs(u(arg, j))) arg = i;
    if (u(arg, j) < Scalar(0)) u.col(j) = -u.col(j);
  }
}

}  // namespace detail

/// Identity with a rotation by `angle` in the (i, j) plane:
/// r_ii = r_jj = cos, r_ij = sin, r_ji = -sin.
template <typename Scalar = double>
Matrix<Scalar> plane_rotation(Index n, Index i, Index j, Scalar angle) {
  detail::check_plane(n, i, j);
  Matrix<Scalar> r = Matrix<Scalar>::Identity(n, n);
  const Scalar c = std::cos(angle);
  const Scalar s = std::sin(angle);
  r(i, i) = c;
  r(i, j) = s;
  r(j, i) = -s;
  r(j, j) = c;
  return r;
}

/// accumulated * plane_rotation(n, i, j, angle), touching only columns i and j.
template <typename Derived>
Matrix<typename Derived::Scalar> compose_rotation(const Eigen::MatrixBase<Derived>& accumulated,
                                                  Index i, Index j,
                                                  typename Derived::Scalar angle) {
  using Scalar = typename Derived::Scalar;
  if (accumulated.rows() != accumulated.cols()) {
    throw Error(ErrorKind::Shape, "accumulated rotation must be square");
  }
  detail::check_plane(accumulated.cols(), i, j);
  Matrix<Scalar> out = accumulated;
  detail::rotate_columns(out, i, j, std::cos(angle), std::sin(angle));
  return out;
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Each rotation R in plane (p, q) is chosen so that (R^T A R)_pq = 0; the
/// working matrix is updated in rows/columns p and q only and the rotations
/// are accumulated into the eigenvector matrix. Planes are visited in
/// lexicographic order.
template <typename Derived>
EigenDecomposition<typename Derived::Scalar> eigen_symmetric(const Eigen::MatrixBase<Derived>& a,
                                                             const JacobiOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  const Index n = a.rows();
  if (n < 1 || a.cols() != n) throw Error(ErrorKind::Shape, "matrix must be square and non-empty");
  if (!a.allFinite()) throw Error(ErrorKind::Data, "non-finite matrix entry");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() >= Scalar(1e-10)) {
    throw Error(ErrorKind::Shape, "matrix is not symmetric");
  }

  Matrix<Scalar> w = (a + a.transpose()) / Scalar(2);
  Matrix<Scalar> v = Matrix<Scalar>::Identity(n, n);
  const Scalar scale = std::max(Scalar(1), w.cwiseAbs().maxCoeff());
  const Scalar stop = Scalar(opts.off_diagonal_tol) * scale;
  const Scalar skip = Scalar(opts.rotation_threshold) * scale;

  EigenDecomposition<Scalar> out;
  out.off_diagonal_history.push_back(detail::off_diagonal_norm(w));
  while (detail::off_diagonal_max(w) >= stop) {
    if (out.sweeps == opts.max_sweeps) {
      throw Error(ErrorKind::Convergence, "Jacobi did not converge in " +
                                              std::to_string(opts.max_sweeps) + " sweeps");
    }
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Scalar apq = w(p, q);
        if (std::abs(apq) <= skip) continue;
        // tan(theta) as the smaller root of t^2 + 2 t cot(2 theta) - 1 = 0.
        const Scalar theta = (w(q, q) - w(p, p)) / (Scalar(2) * apq);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        detail::rotate_columns(w, p, q, c, s);
        detail::rotate_rows(w, p, q, c, s);
        w(p, q) = Scalar(0);
        w(q, p) = Scalar(0);
        detail::rotate_columns(v, p, q, c, s);
      }
    }
    ++out.sweeps;
    out.off_diagonal_history.push_back(detail::off_diagonal_norm(w));
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return w(x, x) > w(y, y); });

  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    Scalar lambda = w(src, src);
    if (opts.correlation && lambda < Scalar(0)) {
      if (lambda < Scalar(-1e-10)) {
        throw Error(ErrorKind::NotPsd, "correlation matrix has eigenvalue " + std::to_string(lambda));
      }
      lambda = Scalar(0);
    }
    out.eigenvalues(k) = lambda;
    out.eigenvectors.col(k) = v.col(src);
  }
  detail::normalize_signs(out.eigenvectors);
  return out;
}

/// Convenience overload for validated correlation matrices.
template <typename Scalar>
EigenDecomposition<Scalar> eigen_symmetric(const CorrelationMatrix<Scalar>& r,
                                           JacobiOptions opts = {}) {
  opts.correlation = true;
  return eigen_symmetric(r.entries(), opts);
}

}  // namespace facpca

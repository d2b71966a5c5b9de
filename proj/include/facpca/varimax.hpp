#pragma once

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <vector>

#include "facpca/error.hpp"
#include "facpca/factor_model.hpp"
#include "facpca/jacobi.hpp"

namespace facpca {

template <typename Scalar>
struct RotationResult {
  LoadingMatrix<Scalar> rotated;
  /// k x k orthogonal; rotated = original * rotation.
  Matrix<Scalar> rotation;
  int sweeps_used = 0;
  /// Objective of the (normalized, if requested) working matrix after each sweep.
  std::vector<Scalar> objective_trace;
  /// False when max_sweeps ran out before the relative improvement fell below tol.
  bool converged = false;
};

struct VarimaxOptions {
  bool normalize = true;
  int max_sweeps = 50;
  double tol = 1e-9;
};

namespace detail {

template <typename Derived>
typename Derived::Scalar column_varimax(const Eigen::MatrixBase<Derived>& col) {
  using Scalar = typename Derived::Scalar;
  const auto sq = col.array().square();
  const Scalar s2 = sq.sum();
  return static_cast<Scalar>(col.size()) * sq.square().sum() - s2 * s2;
}

}  // namespace detail

/// Raw Varimax criterion: sum over columns of n * sum(L^4) - (sum(L^2))^2.
/// n^2 times the summed variance of squared loadings, so not negative in
/// exact arithmetic.
template <typename Derived>
typename Derived::Scalar varimax_objective(const Eigen::MatrixBase<Derived>& loadings) {
  using Scalar = typename Derived::Scalar;
  if (loadings.cols() < 2) throw Error(ErrorKind::Size, "varimax needs at least 2 factors");
  Scalar total = 0;
  for (Index j = 0; j < loadings.cols(); ++j) total += detail::column_varimax(loadings.col(j));
  return total;
}

template <typename Scalar>
Scalar varimax_objective(const LoadingMatrix<Scalar>& loadings) {
  return varimax_objective(loadings.entries);
}

/// Angle phi maximizing the two-column criterion after rotating the points
/// (x_i, y_i) to X = x cos(phi) + y sin(phi), Y = -x sin(phi) + y cos(phi).
///
/// With u = x^2 - y^2 and v = 2xy, tan(4 phi) = N / D where
///   N = 2 (n sum(uv) - sum(u) sum(v)),
///   D = n sum(u^2 - v^2) - ((sum u)^2 - (sum v)^2).
/// atan2 places 4 phi in the quadrant given by the signs of N and D, so the
/// result lies in (-pi/4, pi/4]. Returns nothing when N and D both vanish.
template <typename DX, typename DY>
std::optional<typename DX::Scalar> optimal_plane_angle(const Eigen::MatrixBase<DX>& x,
                                                       const Eigen::MatrixBase<DY>& y) {
  using Scalar = typename DX::Scalar;
  if (x.size() != y.size()) throw Error(ErrorKind::Size, "plane coordinates differ in length");
  if (x.size() < 2) throw Error(ErrorKind::Size, "need at least 2 points");
  const auto n = static_cast<Scalar>(x.size());
  Scalar su = 0, sv = 0, suv = 0, suu_vv = 0;
  for (Index i = 0; i < x.size(); ++i) {
    const Scalar u = x(i) * x(i) - y(i) * y(i);
    const Scalar v = Scalar(2) * x(i) * y(i);
    su += u;
    sv += v;
    suv += u * v;
    suu_vv += u * u - v * v;
  }
  const Scalar num = Scalar(2) * (n * suv - su * sv);
  const Scalar den = n * suu_vv - (su * su - sv * sv);
  if (std::abs(num) < Scalar(1e-14) && std::abs(den) < Scalar(1e-14)) return std::nullopt;
  return std::atan2(num, den) / Scalar(4);
}

/// Kaiser's Varimax: sweep all factor planes (p < q) in lexicographic order,
/// rotating each by its optimal angle unless that would lower the criterion.
/// With `normalize`, rows are scaled to unit length first and restored after.
/// Rows with zero communality do not take part and come back unchanged.
template <typename Scalar>
RotationResult<Scalar> varimax(const LoadingMatrix<Scalar>& loadings,
                               const VarimaxOptions& opts = {}) {
  const Index n = loadings.variables();
  const Index k = loadings.factors();
  if (k < 2) throw Error(ErrorKind::Size, "varimax needs at least 2 factors");

  const Vector<Scalar> norms = loadings.entries.rowwise().norm();
  std::vector<Index> active;
  for (Index i = 0; i < n; ++i)
    if (norms(i) > Scalar(1e-12)) active.push_back(i);

  const auto m = static_cast<Index>(active.size());
  Matrix<Scalar> work(m, k);
  for (Index r = 0; r < m; ++r) {
    const Index i = active[static_cast<std::size_t>(r)];
    work.row(r) = loadings.entries.row(i);
    if (opts.normalize) work.row(r) /= norms(i);
  }

  RotationResult<Scalar> result;
  result.rotation = Matrix<Scalar>::Identity(k, k);

  if (m >= 2) {
    Scalar objective = varimax_objective(work);
    Vector<Scalar> x_new(m), y_new(m);
    while (result.sweeps_used < opts.max_sweeps) {
      const Scalar previous = objective;
      for (Index p = 0; p < k - 1; ++p) {
        for (Index q = p + 1; q < k; ++q) {
          const auto phi = optimal_plane_angle(work.col(p), work.col(q));
          if (!phi || *phi == Scalar(0)) continue;
          const Scalar c = std::cos(*phi);
          const Scalar s = std::sin(*phi);
          x_new = c * work.col(p) + s * work.col(q);
          y_new = -s * work.col(p) + c * work.col(q);
          const Scalar before =
              detail::column_varimax(work.col(p)) + detail::column_varimax(work.col(q));
          const Scalar after = detail::column_varimax(x_new) + detail::column_varimax(y_new);
          if (after < before) continue;
          work.col(p) = x_new;
          work.col(q) = y_new;
          // Same map on the accumulated rotation: columns (p, q) by -phi.
          detail::rotate_columns(result.rotation, p, q, c, -s);
        }
      }
      objective = varimax_objective(work);
      result.objective_trace.push_back(objective);
      ++result.sweeps_used;
      if (objective - previous <= Scalar(opts.tol) * std::abs(previous)) {
        result.converged = true;
        break;
      }
    }
  } else {
    result.converged = true;
  }

  result.rotated = {loadings.entries * result.rotation, loadings.labels};
  return result;
}

}  // namespace facpca

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "facpca/error.hpp"
#include "facpca/jacobi.hpp"
#include "facpca/stats.hpp"

namespace facpca {

/// n x k matrix of factor loadings; row i belongs to primary variable i,
/// column j to factor j. Entries are correlations between variables and
/// factors.
template <typename Scalar>
struct LoadingMatrix {
  Matrix<Scalar> entries;
  std::vector<std::string> labels;

  Index variables() const { return entries.rows(); }
  Index factors() const { return entries.cols(); }
};

using LoadingMatrixd = LoadingMatrix<double>;

template <typename Scalar>
struct FactorModel {
  LoadingMatrix<Scalar> loadings;
  /// Weight of each variable's unique factor: sqrt(1 - communality).
  Vector<Scalar> unique_weights;

  const std::vector<std::string>& labels() const { return loadings.labels; }
};

using FactorModeld = FactorModel<double>;

/// L = U * diag(sqrt(lambda)).
template <typename Scalar>
LoadingMatrix<Scalar> full_loadings(const EigenDecomposition<Scalar>& eig,
                                    std::vector<std::string> labels = {}) {
  const Index n = eig.size();
  for (Index j = 0; j < n; ++j) {
    if (eig.eigenvalues(j) < Scalar(0)) {
      throw Error(ErrorKind::NotPsd, "negative eigenvalue " + std::to_string(eig.eigenvalues(j)));
    }
  }
  if (labels.empty()) labels = default_labels(n);
  detail::check_labels(labels, n);
  return {eig.eigenvectors * eig.eigenvalues.cwiseSqrt().asDiagonal(), std::move(labels)};
}

/// Keep the first k factors.
template <typename Scalar>
LoadingMatrix<Scalar> truncate(const LoadingMatrix<Scalar>& loadings, Index k) {
  if (k < 1 || k > loadings.factors()) {
    throw Error(ErrorKind::Size, "factor count " + std::to_string(k) + " outside [1, " +
                                     std::to_string(loadings.factors()) + "]");
  }
  return {loadings.entries.leftCols(k), loadings.labels};
}

/// Row sums of squared loadings.
template <typename Scalar>
Vector<Scalar> communalities(const LoadingMatrix<Scalar>& loadings) {
  return loadings.entries.rowwise().squaredNorm();
}

/// Entry (i, j): variance of variable i explained by the first j+1 factors.
template <typename Scalar>
Matrix<Scalar> cumulative_communalities(const LoadingMatrix<Scalar>& loadings) {
  const Index n = loadings.variables();
  if (loadings.factors() != n) {
    throw Error(ErrorKind::Size, "cumulative communalities need the full loading matrix");
  }
  Matrix<Scalar> out(n, n);
  for (Index i = 0; i < n; ++i) {
    Scalar acc = 0;
    for (Index j = 0; j < n; ++j) {
      acc += loadings.entries(i, j) * loadings.entries(i, j);
      out(i, j) = acc;
    }
  }
  return out;
}

/// Attach a unique factor to every variable so that its total variance is 1.
/// Communalities up to 1e-6 above one are rounding and are clamped.
template <typename Scalar>
FactorModel<Scalar> build_model(const LoadingMatrix<Scalar>& loadings) {
  const Vector<Scalar> v = communalities(loadings);
  Vector<Scalar> w(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) > Scalar(1) + Scalar(1e-6)) {
      throw Error(ErrorKind::Inconsistent, "communality of '" + loadings.labels[i] +
                                               "' exceeds 1: " + std::to_string(v(i)));
    }
    w(i) = std::sqrt(Scalar(1) - std::min(v(i), Scalar(1)));
  }
  return {loadings, std::move(w)};
}

/// Draw `draws` observations x = L f + w .* e with independent standard-normal
/// common factors f and a separate standard-normal unique draw e_i per
/// variable, so the population correlation is L L^T + diag(w^2).
/// Deterministic for a given seed.
template <typename Scalar>
DataMatrix<Scalar> simulate(const FactorModel<Scalar>& model, Index draws, std::uint64_t seed) {
  if (draws < 2) throw Error(ErrorKind::Size, "need at least 2 draws");
  const Index n = model.loadings.variables();
  const Index k = model.loadings.factors();
  std::mt19937_64 gen(seed);
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));

  Matrix<Scalar> out(draws, n);
  Vector<Scalar> f(k);
  Vector<Scalar> e(n);
  for (Index r = 0; r < draws; ++r) {
    for (Index j = 0; j < k; ++j) f(j) = normal(gen);
    for (Index i = 0; i < n; ++i) e(i) = normal(gen);
    out.row(r) = (model.loadings.entries * f + model.unique_weights.cwiseProduct(e)).transpose();
  }
  return DataMatrix<Scalar>(std::move(out), model.labels());
}

}  // namespace facpca

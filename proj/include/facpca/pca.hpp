#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <vector>

#include "facpca/error.hpp"
#include "facpca/factor_model.hpp"
#include "facpca/jacobi.hpp"
#include "facpca/retention.hpp"
#include "facpca/stats.hpp"

namespace facpca {

template <typename Scalar>
struct PcaResult {
  /// m x k principal components; column j has variance lambda_j.
  Matrix<Scalar> scores;
  Index retained = 0;
  EigenDecomposition<Scalar> eig;
  /// n x k.
  LoadingMatrix<Scalar> loadings;
  RetentionReport<Scalar> report;
};

template <typename Scalar>
struct DeterminationResult {
  /// n x k squared correlations between variables and components.
  Matrix<Scalar> values;
  /// Components with zero variance; their column is set to 0.
  std::vector<Index> degenerate_columns;
};

template <typename Scalar>
struct ArtifactCheck {
  /// L * U^T.
  Matrix<Scalar> product;
  Scalar max_asymmetry = 0;
  bool symmetric = false;
};

/// Principal components: standardized data times the first k eigenvectors.
template <typename DX, typename DU>
Matrix<typename DX::Scalar> project(const Eigen::MatrixBase<DX>& standardized,
                                    const Eigen::MatrixBase<DU>& eigenvectors, Index k) {
  if (eigenvectors.rows() != standardized.cols() || eigenvectors.cols() != eigenvectors.rows()) {
    throw Error(ErrorKind::Shape, "eigenvector matrix does not match the data");
  }
  if (k < 1 || k > eigenvectors.cols()) {
    throw Error(ErrorKind::Shape, "component count " + std::to_string(k) + " outside [1, " +
                                      std::to_string(eigenvectors.cols()) + "]");
  }
  return standardized * eigenvectors.leftCols(k);
}

template <typename Scalar>
Matrix<Scalar> project(const DataMatrix<Scalar>& standardized, const Matrix<Scalar>& eigenvectors,
                       Index k) {
  return project(standardized.values(), eigenvectors, k);
}

/// Rescale scores to unit variance (the factor-score convention). Columns
/// with a zero eigenvalue stay zero.
template <typename Scalar>
Matrix<Scalar> standardized_scores(const PcaResult<Scalar>& result) {
  Matrix<Scalar> out = result.scores;
  for (Index j = 0; j < out.cols(); ++j) {
    const Scalar lambda = result.eig.eigenvalues(j);
    if (lambda > Scalar(0)) out.col(j) /= std::sqrt(lambda);
  }
  return out;
}

/// Modified PCA: the number of components comes from the minimum-variance
/// criterion. Errors carry the number of the step that raised them.
template <typename Scalar>
PcaResult<Scalar> pca_modified(const DataMatrix<Scalar>& data,
                               Scalar epsilon = Scalar(kDefaultEpsilon)) {
  auto step = [](int number, auto&& body) {
    try {
      return body();
    } catch (const Error& e) {
      if (e.step()) throw;
      throw e.at_step(number);
    }
  };

  if (!(epsilon > Scalar(0.5) && epsilon <= Scalar(1))) {
    throw Error(ErrorKind::Threshold, "epsilon must lie in (0.5, 1]", 9);
  }
  const Index m = data.rows();
  const Index n = data.cols();

  // Steps 1-2: means and centered columns.
  const auto [centered, sum_squares] = step(2, [&] {
    for (Index j = 0; j < n; ++j) {
      if (detail::is_constant(data.col(j))) {
        throw Error(ErrorKind::Degenerate, "column '" + data.labels()[j] + "' has zero variance");
      }
    }
    return detail::center_columns(data.values());
  });
  // Step 3: biased standard deviations.
  const Vector<Scalar> sd = (sum_squares / static_cast<Scalar>(m)).cwiseSqrt();
  // Step 4: standardization.
  const DataMatrix<Scalar> x = step(4, [&] {
    Matrix<Scalar> z = centered * sd.cwiseInverse().asDiagonal();
    return DataMatrix<Scalar>(std::move(z), data.labels());
  });
  // Step 5: correlation matrix.
  const CorrelationMatrix<Scalar> r = step(5, [&] { return correlation_matrix(x); });
  // Step 6: eigenproblem.
  PcaResult<Scalar> result;
  result.eig = step(6, [&] { return eigen_symmetric(r); });
  // Steps 7-8: S and L.
  const LoadingMatrix<Scalar> l = step(8, [&] { return full_loadings(result.eig, data.labels()); });
  // Steps 9-10: number of components.
  result.report = step(9, [&] { return minvar_count(result.eig, epsilon); });
  result.retained = result.report.chosen;
  // Steps 11-12: reduce U and project.
  result.loadings = step(11, [&] { return truncate(l, result.retained); });
  result.scores = step(12, [&] { return project(x, result.eig.eigenvectors, result.retained); });
  return result;
}

/// Squared correlation between every variable and every component score.
template <typename Scalar>
DeterminationResult<Scalar> pc_variable_determination(const DataMatrix<Scalar>& standardized,
                                                      const Matrix<Scalar>& scores) {
  if (scores.rows() != standardized.rows()) {
    throw Error(ErrorKind::Shape, "scores and data differ in row count");
  }
  const auto [cx, ssx] = detail::center_columns(standardized.values());
  const auto [cs, sss] = detail::center_columns(scores);
  const auto m = static_cast<Scalar>(scores.rows());

  DeterminationResult<Scalar> out;
  out.values = Matrix<Scalar>::Zero(standardized.cols(), scores.cols());
  for (Index j = 0; j < scores.cols(); ++j) {
    if (sss(j) / m <= Scalar(1e-12)) {
      out.degenerate_columns.push_back(j);
      continue;
    }
    for (Index i = 0; i < standardized.cols(); ++i) {
      if (ssx(i) <= Scalar(0)) continue;
      const Scalar r = detail::centered_correlation(cx.col(i), cs.col(j), ssx(i), sss(j));
      out.values(i, j) = r * r;
    }
  }
  return out;
}

/// M = L U^T, which equals U Lambda^(1/2) U^T and must be symmetric.
/// Throws INCONSISTENT when the asymmetry reaches `tol`.
template <typename Scalar>
ArtifactCheck<Scalar> verify_artifact(const LoadingMatrix<Scalar>& loadings,
                                      const Matrix<Scalar>& eigenvectors, Scalar tol = Scalar(1e-10)) {
  const Index n = loadings.variables();
  if (loadings.factors() != n || eigenvectors.rows() != n || eigenvectors.cols() != n) {
    throw Error(ErrorKind::Size, "artifact check needs full n x n loadings and eigenvectors");
  }
  ArtifactCheck<Scalar> out;
  out.product = loadings.entries * eigenvectors.transpose();
  out.max_asymmetry = (out.product - out.product.transpose()).cwiseAbs().maxCoeff();
  out.symmetric = out.max_asymmetry < tol;
  if (!out.symmetric) {
    throw Error(ErrorKind::Inconsistent,
                "L*U^T asymmetric by " + std::to_string(out.max_asymmetry));
  }
  return out;
}

}  // namespace facpca

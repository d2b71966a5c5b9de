#pragma once

#include <Eigen/Core>

#include <string>
#include <utility>
#include <vector>

#include "facpca/error.hpp"
#include "facpca/factor_model.hpp"
#include "facpca/jacobi.hpp"

namespace facpca {

constexpr double kDefaultEpsilon = 0.51;

/// Per-prefix variance bookkeeping of the minimum-variance criterion. All
/// shares are fractions in [0, 1]; index i describes the first i+1 factors.
template <typename Scalar>
struct RetentionReport {
  /// lambda_i / n.
  std::vector<Scalar> eig_share;
  /// Smallest explained variance over all variables.
  std::vector<Scalar> min_var;
  /// Mean explained variance over all variables.
  std::vector<Scalar> aver_var;
  /// 1-based index of the variable attaining min_var (0 if none is below 1).
  std::vector<int> nr_min_var;
  /// Number of factors/components selected.
  Index chosen = 0;
  Scalar threshold = Scalar(kDefaultEpsilon);
};

template <typename Scalar>
struct VarianceRow {
  Scalar eigenvalue;
  Scalar cumulative_eigenvalue;
  Scalar percent;
  Scalar cumulative_percent;
};

namespace detail {

template <typename Derived>
void check_sorted(const Eigen::MatrixBase<Derived>& eigenvalues) {
  for (Index i = 1; i < eigenvalues.size(); ++i) {
    if (eigenvalues(i) > eigenvalues(i - 1)) {
      throw Error(ErrorKind::Order, "eigenvalues not sorted non-increasing at position " +
                                        std::to_string(i + 1));
    }
  }
}

}  // namespace detail

/// Eigenvalue, running total, and their percentages of n (the trace of a
/// correlation matrix).
template <typename Derived>
std::vector<VarianceRow<typename Derived::Scalar>> variance_table(
    const Eigen::MatrixBase<Derived>& eigenvalues) {
  using Scalar = typename Derived::Scalar;
  detail::check_sorted(eigenvalues);
  const auto n = static_cast<Scalar>(eigenvalues.size());
  std::vector<VarianceRow<Scalar>> rows;
  Scalar cumulative = 0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    cumulative += eigenvalues(i);
    rows.push_back({eigenvalues(i), cumulative, Scalar(100) * eigenvalues(i) / n,
                    Scalar(100) * cumulative / n});
  }
  return rows;
}

/// Number of eigenvalues not less than one.
template <typename Derived>
Index kaiser_count(const Eigen::MatrixBase<Derived>& eigenvalues) {
  detail::check_sorted(eigenvalues);
  Index count = 0;
  for (Index i = 0; i < eigenvalues.size(); ++i)
    if (eigenvalues(i) >= 1) ++count;
  return count;
}

/// Smallest k whose cumulative percentage reaches `threshold_pct`.
template <typename Derived>
Index percentage_count(const Eigen::MatrixBase<Derived>& eigenvalues, double threshold_pct) {
  if (!(threshold_pct > 0 && threshold_pct <= 100)) {
    throw Error(ErrorKind::Threshold, "percentage threshold must lie in (0, 100]");
  }
  const auto rows = variance_table(eigenvalues);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    // Slack absorbs rounding when the eigenvalues sum to n only approximately.
    if (rows[i].cumulative_percent >= threshold_pct - 1e-9) return static_cast<Index>(i + 1);
  }
  return eigenvalues.size();
}

/// floor(n / 2).
inline Index half_count(Index n) {
  if (n < 1) throw Error(ErrorKind::Size, "need at least one variable");
  return n / 2;
}

/// Minimum-variance criterion: the smallest number of factors such that
/// every variable has at least `epsilon` of its variance explained.
///
/// Builds L = U sqrt(Lambda), adds the squared loadings of one more factor to
/// each variable's running total C per step, and tracks min C with the
/// earliest index on ties. Every prefix 1..n is recorded; `chosen` is the
/// first prefix whose minimum reaches epsilon.
template <typename Scalar>
RetentionReport<Scalar> minvar_count(const EigenDecomposition<Scalar>& eig,
                                     Scalar epsilon = Scalar(kDefaultEpsilon)) {
  if (!(epsilon > Scalar(0.5) && epsilon <= Scalar(1))) {
    throw Error(ErrorKind::Threshold, "epsilon must lie in (0.5, 1], got " + std::to_string(epsilon));
  }
  const LoadingMatrix<Scalar> l = full_loadings(eig);
  const Index n = l.variables();

  RetentionReport<Scalar> report;
  report.threshold = epsilon;
  Vector<Scalar> common = Vector<Scalar>::Zero(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) common(j) += l.entries(j, i) * l.entries(j, i);
    int nr_var = 0;
    Scalar min_var = 1;
    for (Index j = 0; j < n; ++j) {
      if (common(j) < min_var) {
        nr_var = static_cast<int>(j + 1);
        min_var = common(j);
      }
    }
    report.eig_share.push_back(eig.eigenvalues(i) / static_cast<Scalar>(n));
    report.min_var.push_back(min_var);
    report.aver_var.push_back(common.mean());
    report.nr_min_var.push_back(nr_var);
    if (report.chosen == 0 && min_var >= epsilon) report.chosen = i + 1;
  }
  if (report.chosen == 0) report.chosen = n;
  return report;
}

/// (1-based index, eigenvalue) pairs of the scree plot.
template <typename Derived>
std::vector<std::pair<Index, typename Derived::Scalar>> scree_data(
    const Eigen::MatrixBase<Derived>& eigenvalues) {
  detail::check_sorted(eigenvalues);
  std::vector<std::pair<Index, typename Derived::Scalar>> points;
  for (Index i = 0; i < eigenvalues.size(); ++i) points.emplace_back(i + 1, eigenvalues(i));
  return points;
}

}  // namespace facpca

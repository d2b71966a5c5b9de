#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "facpca/error.hpp"

namespace facpca {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// Labels "x1".."xn", used whenever the caller supplies none.
inline std::vector<std::string> default_labels(Index n) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i + 1));
  return labels;
}

namespace detail {

/// Neumaier compensated accumulator.
template <typename Scalar>
class CompensatedSum {
 public:
  void add(Scalar x) {
    const Scalar t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Scalar value() const { return sum_ + comp_; }

 private:
  Scalar sum_{0};
  Scalar comp_{0};
};

template <typename Derived>
typename Derived::Scalar compensated_mean(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  CompensatedSum<Scalar> acc;
  for (Index i = 0; i < v.size(); ++i) acc.add(v(i));
  return acc.value() / static_cast<Scalar>(v.size());
}

template <typename Derived>
bool is_constant(const Eigen::MatrixBase<Derived>& v) {
  return v.size() == 0 || v.minCoeff() == v.maxCoeff();
}

inline void check_labels(const std::vector<std::string>& labels, Index n) {
  if (static_cast<Index>(labels.size()) != n) {
    throw Error(ErrorKind::Size, "expected " + std::to_string(n) + " labels, got " +
                                     std::to_string(labels.size()));
  }
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw Error(ErrorKind::Data, "duplicate variable label '" + l + "'");
  }
}

}  // namespace detail

/// Observation matrix: rows are observations, columns are variables.
template <std::floating_point Scalar>
class DataMatrix {
 public:
  DataMatrix(Matrix<Scalar> values, std::vector<std::string> labels = {})
      : values_(std::move(values)), labels_(std::move(labels)) {
    if (values_.rows() < 2) {
      throw Error(ErrorKind::Size, "need at least 2 observations, got " +
                                       std::to_string(values_.rows()));
    }
    if (values_.cols() < 1) throw Error(ErrorKind::Size, "need at least 1 variable");
    if (labels_.empty()) labels_ = default_labels(values_.cols());
    detail::check_labels(labels_, values_.cols());
    if (!values_.allFinite()) throw Error(ErrorKind::Data, "non-finite value in data matrix");
  }

  const Matrix<Scalar>& values() const { return values_; }
  const std::vector<std::string>& labels() const { return labels_; }
  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  auto col(Index j) const { return values_.col(j); }

 private:
  Matrix<Scalar> values_;
  std::vector<std::string> labels_;
};

using DataMatrixd = DataMatrix<double>;

/// Symmetric matrix of Pearson correlations with an exact unit diagonal.
template <std::floating_point Scalar>
class CorrelationMatrix {
 public:
  CorrelationMatrix(Matrix<Scalar> entries, std::vector<std::string> labels = {})
      : entries_(std::move(entries)), labels_(std::move(labels)) {
    const Index n = entries_.rows();
    if (n < 1 || entries_.cols() != n) {
      throw Error(ErrorKind::Shape, "correlation matrix must be square and non-empty");
    }
    if (labels_.empty()) labels_ = default_labels(n);
    detail::check_labels(labels_, n);
    if (!entries_.allFinite()) throw Error(ErrorKind::Data, "non-finite correlation entry");
    for (Index i = 0; i < n; ++i) {
      if (entries_(i, i) != Scalar(1)) {
        throw Error(ErrorKind::Data, "diagonal entry " + labels_[i] + " is not 1");
      }
      for (Index j = 0; j < n; ++j) {
        if (std::abs(entries_(i, j)) > Scalar(1)) {
          throw Error(ErrorKind::Data, "entry (" + labels_[i] + "," + labels_[j] +
                                           ") outside [-1, 1]");
        }
        if (std::abs(entries_(i, j) - entries_(j, i)) > Scalar(1e-12)) {
          throw Error(ErrorKind::Data, "matrix not symmetric at (" + labels_[i] + "," +
                                           labels_[j] + ")");
        }
      }
    }
  }

  const Matrix<Scalar>& entries() const { return entries_; }
  const std::vector<std::string>& labels() const { return labels_; }
  Index size() const { return entries_.rows(); }
  Scalar operator()(Index i, Index j) const { return entries_(i, j); }

 private:
  Matrix<Scalar> entries_;
  std::vector<std::string> labels_;
};

using CorrelationMatrixd = CorrelationMatrix<double>;

template <typename Scalar>
struct VariableStats {
  Scalar mean;
  Scalar median;
  Scalar mode;
  /// Biased: divisor is the number of observations.
  Scalar std_dev;
  Scalar minimum;
  Scalar maximum;
};

/// Location and dispersion of one column. The standard deviation uses the
/// biased divisor m, not m - 1.
template <typename Derived>
VariableStats<typename Derived::Scalar> summarize(const Eigen::MatrixBase<Derived>& column) {
  using Scalar = typename Derived::Scalar;
  const Index m = column.size();
  if (m < 2) throw Error(ErrorKind::Size, "need at least 2 observations, got " + std::to_string(m));
  if (!column.allFinite()) throw Error(ErrorKind::Data, "non-finite value in column");

  const Scalar mean = detail::compensated_mean(column);
  detail::CompensatedSum<Scalar> ss;
  for (Index i = 0; i < m; ++i) {
    const Scalar d = column(i) - mean;
    ss.add(d * d);
  }

  std::vector<Scalar> sorted;
  sorted.reserve(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) sorted.push_back(column(i));
  std::sort(sorted.begin(), sorted.end());

  const auto half = static_cast<std::size_t>(m / 2);
  const Scalar median =
      (m % 2 == 1) ? sorted[half] : (sorted[half - 1] + sorted[half]) / Scalar(2);

  // Runs in sorted order; strict '>' keeps the smallest value on ties.
  Scalar mode = sorted.front();
  std::size_t best = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (j - i > best) {
      best = j - i;
      mode = sorted[i];
    }
    i = j;
  }

  return VariableStats<Scalar>{
      .mean = mean,
      .median = median,
      .mode = mode,
      .std_dev = std::sqrt(ss.value() / static_cast<Scalar>(m)),
      .minimum = sorted.front(),
      .maximum = sorted.back(),
  };
}

/// Shift every column to mean 0 and scale it to biased standard deviation 1.
template <typename Scalar>
DataMatrix<Scalar> standardize(const DataMatrix<Scalar>& data) {
  Matrix<Scalar> out(data.rows(), data.cols());
  const auto m = static_cast<Scalar>(data.rows());
  for (Index j = 0; j < data.cols(); ++j) {
    const auto col = data.col(j);
    if (detail::is_constant(col)) {
      throw Error(ErrorKind::Degenerate, "column '" + data.labels()[j] + "' has zero variance");
    }
    const Scalar mean = detail::compensated_mean(col);
    out.col(j) = col.array() - mean;
    detail::CompensatedSum<Scalar> ss;
    for (Index i = 0; i < out.rows(); ++i) ss.add(out(i, j) * out(i, j));
    const Scalar s = std::sqrt(ss.value() / m);
    if (!(s > Scalar(0))) {
      throw Error(ErrorKind::Degenerate, "column '" + data.labels()[j] + "' has zero variance");
    }
    out.col(j) /= s;
  }
  return DataMatrix<Scalar>(std::move(out), data.labels());
}

namespace detail {

/// Centered copies of the columns and their sums of squares.
template <typename Scalar>
std::pair<Matrix<Scalar>, Vector<Scalar>> center_columns(const Matrix<Scalar>& x) {
  Matrix<Scalar> centered(x.rows(), x.cols());
  Vector<Scalar> ss(x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    centered.col(j) = x.col(j).array() - compensated_mean(x.col(j));
    CompensatedSum<Scalar> acc;
    for (Index i = 0; i < x.rows(); ++i) acc.add(centered(i, j) * centered(i, j));
    ss(j) = acc.value();
  }
  return {std::move(centered), std::move(ss)};
}

template <typename DA, typename DB, typename Scalar>
Scalar centered_correlation(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                            Scalar ssa, Scalar ssb) {
  CompensatedSum<Scalar> dot;
  for (Index i = 0; i < a.size(); ++i) dot.add(a(i) * b(i));
  const Scalar r = dot.value() / std::sqrt(ssa * ssb);
  return std::clamp(r, Scalar(-1), Scalar(1));
}

}  // namespace detail

/// Pearson correlation: cosine of the angle between the centered vectors.
template <typename DA, typename DB>
typename DA::Scalar correlation(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename DA::Scalar;
  if (a.size() != b.size()) {
    throw Error(ErrorKind::Size, "length mismatch " + std::to_string(a.size()) + " vs " +
                                     std::to_string(b.size()));
  }
  if (a.size() < 2) throw Error(ErrorKind::Size, "need at least 2 observations");
  if (detail::is_constant(a) || detail::is_constant(b)) {
    throw Error(ErrorKind::Degenerate, "constant input has no correlation");
  }
  const Vector<Scalar> ca = a.array() - detail::compensated_mean(a);
  const Vector<Scalar> cb = b.array() - detail::compensated_mean(b);
  detail::CompensatedSum<Scalar> ssa, ssb;
  for (Index i = 0; i < ca.size(); ++i) {
    ssa.add(ca(i) * ca(i));
    ssb.add(cb(i) * cb(i));
  }
  return detail::centered_correlation(ca, cb, ssa.value(), ssb.value());
}

template <typename Scalar>
CorrelationMatrix<Scalar> correlation_matrix(const DataMatrix<Scalar>& data) {
  const Index n = data.cols();
  for (Index j = 0; j < n; ++j) {
    if (detail::is_constant(data.col(j))) {
      throw Error(ErrorKind::Degenerate, "column '" + data.labels()[j] + "' has zero variance");
    }
  }
  const auto [centered, ss] = detail::center_columns(data.values());
  Matrix<Scalar> r = Matrix<Scalar>::Identity(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      r(i, j) = detail::centered_correlation(centered.col(i), centered.col(j), ss(i), ss(j));
      r(j, i) = r(i, j);
    }
  }
  return CorrelationMatrix<Scalar>(std::move(r), data.labels());
}

/// Entrywise squares of the correlations: the shared-variance fractions.
template <typename Scalar>
Matrix<Scalar> determination_matrix(const CorrelationMatrix<Scalar>& corr) {
  return corr.entries().array().square().matrix();
}

}  // namespace facpca

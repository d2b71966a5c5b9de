#include <gtest/gtest.h>

#include <random>

#include "facpca/retention.hpp"
#include "test_util.hpp"

using namespace facpca;
using namespace facpca::testing;

namespace {

Vec published_eigenvalues() {
  return Eigen::Map<const Vec>(kWeatherEigenvalues.data(), 7);
}

EigenDecompositiond weather_eig() { return eigen_symmetric(weather_corr()); }

// Random correlation matrix from a few correlated columns.
CorrelationMatrixd random_corr(Index n, std::mt19937_64& gen) {
  Mat x = normal_matrix(40, n, gen);
  std::uniform_real_distribution<double> mix(-1, 1);
  for (Index j = 1; j < n; ++j) x.col(j) += mix(gen) * x.col(j - 1);
  return correlation_matrix(DataMatrixd(x));
}

}  // namespace

TEST(VarianceTable, WeatherRows) {
  const auto rows = variance_table(published_eigenvalues());
  EXPECT_NEAR(rows[0].percent, 32.71, 0.01);
  EXPECT_NEAR(rows[3].cumulative_percent, 80.80, 0.05);
  EXPECT_NEAR(rows[6].cumulative_eigenvalue, 7.001, 1e-9);
  for (std::size_t i = 0; i < rows.size(); ++i)
    EXPECT_NEAR(rows[i].cumulative_percent, kWeatherCumulativePct[i], 0.05);
}

TEST(VarianceTable, EqualEigenvalues) {
  const auto rows = variance_table(Vec::Ones(4));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(rows[i].percent, 25.0);
    EXPECT_DOUBLE_EQ(rows[i].cumulative_percent, 25.0 * static_cast<double>(i + 1));
  }
}

TEST(VarianceTable, RejectsUnsorted) {
  Vec v(3);
  v << 1, 2, 0.5;
  EXPECT_ERROR_KIND(variance_table(v), ErrorKind::Order);
  EXPECT_ERROR_KIND(kaiser_count(v), ErrorKind::Order);
  EXPECT_ERROR_KIND(scree_data(v), ErrorKind::Order);
}

TEST(Criteria, Kaiser) {
  EXPECT_EQ(kaiser_count(published_eigenvalues()), 3);
  EXPECT_EQ(kaiser_count(Vec::Ones(5)), 5);
  Vec v(6);
  v << 1.9, 1.4, 1.1, 1.0, 0.4, 0.2;
  EXPECT_EQ(kaiser_count(v), 4);
}

TEST(Criteria, Percentage) {
  EXPECT_EQ(percentage_count(published_eigenvalues(), 80), 4);
  EXPECT_EQ(percentage_count(published_eigenvalues(), 100), 7);
  Vec v(5);
  v << 2.5, 1.2, 0.5, 0.5, 0.3;  // cumulative 50, 74, 84, ...
  EXPECT_EQ(percentage_count(v, 80), 3);
  EXPECT_ERROR_KIND(percentage_count(v, 0), ErrorKind::Threshold);
  EXPECT_ERROR_KIND(percentage_count(v, 101), ErrorKind::Threshold);
}

TEST(Criteria, Half) {
  EXPECT_EQ(half_count(7), 3);
  EXPECT_EQ(half_count(2), 1);
  EXPECT_EQ(half_count(9), 4);
  EXPECT_ERROR_KIND(half_count(0), ErrorKind::Size);
}

TEST(MinVar, WeatherReport) {
  const auto r = minvar_count(weather_eig());
  EXPECT_EQ(r.chosen, 3);
  ASSERT_EQ(r.min_var.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_NEAR(100 * r.min_var[i], kWeatherMinVarPct[i], 0.3) << "prefix " << i + 1;
    EXPECT_NEAR(100 * r.aver_var[i], kWeatherAverVarPct[i], 0.05) << "prefix " << i + 1;
  }
  // The first six minimizers are well separated; the seventh is decided by rounding.
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(r.nr_min_var[i], kWeatherNrMinVar[i]);
}

TEST(MinVar, IdentityNeedsAllFactors) {
  const auto r = minvar_count(eigen_symmetric(Mat::Identity(4, 4)));
  EXPECT_EQ(r.chosen, 4);
  EXPECT_EQ(r.min_var[0], 0.0);
  EXPECT_EQ(r.nr_min_var[0], 2);  // variables 2..4 tie at zero; earliest wins
}

TEST(MinVar, TwoVariables) {
  const auto r = minvar_count(eigen_symmetric(rows_to_matrix({{1, 0.6}, {0.6, 1}})));
  EXPECT_EQ(r.chosen, 1);
  EXPECT_NEAR(r.min_var[0], 0.8, 1e-14);
  EXPECT_NEAR(r.eig_share[0], 0.8, 1e-14);
}

TEST(MinVar, ThresholdRange) {
  const auto eig = weather_eig();
  EXPECT_ERROR_KIND(minvar_count(eig, 0.5), ErrorKind::Threshold);
  EXPECT_ERROR_KIND(minvar_count(eig, 1.01), ErrorKind::Threshold);
  EXPECT_NO_THROW(minvar_count(eig, 1.0));
}

TEST(MinVar, Properties) {
  std::mt19937_64 gen(16);
  std::uniform_int_distribution<Index> size(2, 9);
  for (int t = 0; t < 100; ++t) {
    const Index n = size(gen);
    const auto corr = random_corr(n, gen);
    const auto eig = eigen_symmetric(corr);
    const auto r = minvar_count(eig);
    const auto table = variance_table(eig.eigenvalues);
    // Selected count is the first prefix reaching epsilon.
    ASSERT_GE(r.chosen, 1);
    ASSERT_LE(r.chosen, n);
    const auto c = static_cast<std::size_t>(r.chosen - 1);
    if (r.min_var[c] >= r.threshold) {
      for (std::size_t i = 0; i < c; ++i) EXPECT_LT(r.min_var[i], r.threshold);
    }
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
      EXPECT_NEAR(r.aver_var[i], table[i].cumulative_percent / 100, 1e-10);
      EXPECT_LE(r.min_var[i], r.aver_var[i] + 1e-12);
      if (i > 0) EXPECT_GE(r.min_var[i], r.min_var[i - 1] - 1e-12);
    }
    EXPECT_NEAR(r.min_var.back(), 1.0, 1e-10);
    // Larger epsilon never picks fewer factors.
    Index previous = 0;
    for (double eps : {0.51, 0.6, 0.7, 0.8, 0.9, 0.99}) {
      const Index k = minvar_count(eig, eps).chosen;
      EXPECT_GE(k, previous);
      previous = k;
    }
    // Flipping eigenvector signs changes nothing.
    auto flipped = eig;
    flipped.eigenvectors.col(0) *= -1;
    const auto rf = minvar_count(flipped);
    EXPECT_EQ(rf.chosen, r.chosen);
    for (std::size_t i = 0; i < r.min_var.size(); ++i) EXPECT_NEAR(rf.min_var[i], r.min_var[i], 1e-12);
  }
}

TEST(ScreeData, Points) {
  const auto pts = scree_data(published_eigenvalues());
  ASSERT_EQ(pts.size(), 7u);
  EXPECT_EQ(pts[0].first, 1);
  EXPECT_DOUBLE_EQ(pts[0].second, 2.290);
  EXPECT_EQ(pts[6].first, 7);
  EXPECT_EQ(scree_data(Vec::Constant(1, 1.0)).size(), 1u);
}

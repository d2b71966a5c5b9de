// Acceptance checks: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "facpca/facpca.hpp"
#include "facpca/io.hpp"
#include "../reference.hpp"

using namespace facpca;
using namespace facpca::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

CorrelationMatrixd fixture() { return ingest_correlation_csv(data_path("dataset1_corr.csv")); }

Outcome eigenvalues() {
  const auto eig = eigen_symmetric(fixture());
  double worst = 0;
  for (Index i = 0; i < 7; ++i)
    worst = std::max(worst, std::abs(eig.eigenvalues(i) - kWeatherEigenvalues[static_cast<std::size_t>(i)]));
  return {worst <= 5e-3, "max deviation " + num(worst)};
}

Outcome loadings() {
  const double d = max_diff_up_to_sign(full_loadings(eigen_symmetric(fixture())).entries,
                                       weather_full_loadings());
  return {d <= 1e-2, "max deviation " + num(d)};
}

Outcome communality() {
  const auto full = full_loadings(eigen_symmetric(fixture()));
  const Vec h3 = communalities(truncate(full, 3));
  const Vec h4 = communalities(truncate(full, 4));
  double worst = 0;
  for (std::size_t i = 0; i < 7; ++i) {
    const auto r = static_cast<Index>(i);
    worst = std::max(worst, std::abs(100 * h3(r) - kWeatherCommunality3Pct[i]));
    worst = std::max(worst, std::abs(100 * h4(r) - kWeatherCommunality4Pct[i]));
  }
  return {worst <= 0.3, "max deviation " + num(worst) + " pp"};
}

Outcome retention() {
  const auto r = minvar_count(eigen_symmetric(fixture()), 0.51);
  double worst = 0;
  bool nr_ok = true;
  std::string nr;
  for (std::size_t i = 0; i < 7; ++i) {
    worst = std::max(worst, std::abs(100 * r.min_var[i] - kWeatherMinVarPct[i]));
    worst = std::max(worst, std::abs(100 * r.aver_var[i] - kWeatherAverVarPct[i]));
    nr_ok = nr_ok && r.nr_min_var[i] == kWeatherNrMinVar[i];
    nr += (i ? "," : "") + std::to_string(r.nr_min_var[i]);
  }
  return {worst <= 0.3 && nr_ok && r.chosen == 3,
          "max deviation " + num(worst) + " pp, NrMinVar " + nr + ", NoF " + std::to_string(r.chosen)};
}

Outcome criteria() {
  const auto eig = eigen_symmetric(fixture());
  const Index k = kaiser_count(eig.eigenvalues);
  const Index h = half_count(eig.size());
  const Index p = percentage_count(eig.eigenvalues, 80.0);
  return {k == 3 && h == 3 && p == 4, "kaiser " + std::to_string(k) + ", half " + std::to_string(h) +
                                          ", percentage " + std::to_string(p)};
}

Outcome rotation() {
  const auto full = full_loadings(eigen_symmetric(fixture()));
  double worst = 0, drift = 0;
  for (Index k : {3, 4}) {
    const auto l = truncate(full, k);
    const auto r = varimax(l);
    worst = std::max(worst, max_diff_up_to_perm_sign(r.rotated.entries,
                                                     k == 3 ? weather_varimax3() : weather_varimax4()));
    drift = std::max(drift, (communalities(r.rotated) - communalities(l)).cwiseAbs().maxCoeff());
  }
  return {worst <= 2e-2 && drift < 1e-10,
          "max deviation " + num(worst) + ", communality drift " + num(drift)};
}

Outcome artifact() {
  const auto eig = eigen_symmetric(fixture());
  const double d = (verify_artifact(full_loadings(eig), eig.eigenvectors).product - weather_artifact())
                       .cwiseAbs()
                       .maxCoeff();
  std::mt19937_64 gen(2024);
  double asym = 0;
  for (int t = 0; t < 100; ++t) {
    const auto e = eigen_symmetric(random_psd(2 + t % 9, gen));
    const Mat m = full_loadings(e).entries * e.eigenvectors.transpose();
    asym = std::max(asym, (m - m.transpose()).cwiseAbs().maxCoeff());
  }
  return {d <= 5e-3 && asym < 1e-10, "max deviation " + num(d) + ", max asymmetry " + num(asym)};
}

Outcome explained_variance() {
  const auto rows = variance_table(eigen_symmetric(fixture()).eigenvalues);
  double worst = 0;
  for (std::size_t i = 0; i < rows.size(); ++i)
    worst = std::max(worst, std::abs(rows[i].cumulative_percent - kWeatherCumulativePct[i]));
  return {worst <= 0.1, "max deviation " + num(worst) + " pp"};
}

double pair_objective(const Vec& x, const Vec& y, double phi) {
  Mat m(x.size(), 2);
  m << std::cos(phi) * x + std::sin(phi) * y, -std::sin(phi) * x + std::cos(phi) * y;
  return varimax_objective(m);
}

Outcome properties() {
  std::mt19937_64 gen(77);
  std::vector<std::string> failures;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };

  // Analytic 2x2 and 3x3 eigenvalues.
  std::uniform_real_distribution<double> u(-2, 2);
  double analytic = 0, ortho = 0, recon = 0;
  for (int t = 0; t < 100; ++t) {
    const double a = u(gen), b = u(gen), d = u(gen);
    const auto e2 = eigen_symmetric(rows_to_matrix({{a, b}, {b, d}}));
    const double mid = (a + d) / 2, rad = std::hypot((a - d) / 2, b);
    analytic = std::max({analytic, std::abs(e2.eigenvalues(0) - (mid + rad)),
                         std::abs(e2.eigenvalues(1) - (mid - rad))});
    const Mat m3 = random_symmetric(3, gen);
    const double q = m3.trace() / 3;
    const double p1 = m3(0, 1) * m3(0, 1) + m3(0, 2) * m3(0, 2) + m3(1, 2) * m3(1, 2);
    const double p = std::sqrt(((m3.diagonal().array() - q).square().sum() + 2 * p1) / 6);
    const double r = std::clamp(((m3 - q * Mat::Identity(3, 3)) / p).determinant() / 2, -1.0, 1.0);
    const double phi = std::acos(r) / 3;
    const double top = q + 2 * p * std::cos(phi);
    const double bottom = q + 2 * p * std::cos(phi + 2 * std::numbers::pi / 3);
    const auto e3 = eigen_symmetric(m3);
    analytic = std::max({analytic, std::abs(e3.eigenvalues(0) - top),
                         std::abs(e3.eigenvalues(1) - (3 * q - top - bottom)),
                         std::abs(e3.eigenvalues(2) - bottom)});
    const Mat m8 = random_symmetric(8, gen);
    const auto e8 = eigen_symmetric(m8);
    ortho = std::max(ortho, (e8.eigenvectors.transpose() * e8.eigenvectors - Mat::Identity(8, 8))
                                .cwiseAbs()
                                .maxCoeff());
    recon = std::max(recon, (e8.eigenvectors * e8.eigenvalues.asDiagonal() * e8.eigenvectors.transpose() - m8)
                                .cwiseAbs()
                                .maxCoeff());
  }
  check(analytic < 1e-10, "analytic eigenvalues " + num(analytic));
  check(ortho < 1e-10, "orthogonality " + num(ortho));
  check(recon < 1e-8, "reconstruction " + num(recon));

  // Score variances and correlations.
  Mat x = normal_matrix(500, 5, gen);
  x.col(1) += x.col(0);
  x.col(4) -= 0.5 * x.col(3);
  const auto z = standardize(DataMatrixd(x));
  const auto eig = eigen_symmetric(correlation_matrix(z));
  const Mat s = project(z, eig.eigenvectors, 5);
  double var_dev = 0, score_corr = 0;
  for (Index j = 0; j < 5; ++j) {
    var_dev = std::max(var_dev, std::abs(biased_variance(s.col(j)) - eig.eigenvalues(j)));
    for (Index k = j + 1; k < 5; ++k) score_corr = std::max(score_corr, std::abs(pearson(s.col(j), s.col(k))));
  }
  check(var_dev < 1e-8, "score variance " + num(var_dev));
  check(score_corr < 1e-8, "score correlation " + num(score_corr));

  // Determination equals squared loadings.
  const auto det = pc_variable_determination(z, s);
  const double det_dev = (det.values - full_loadings(eig).entries.cwiseAbs2()).cwiseAbs().maxCoeff();
  check(det_dev < 1e-6, "determination identity " + num(det_dev));

  // Varimax angle vs grid search; monotone objective.
  std::uniform_real_distribution<double> load(-0.7, 0.7);
  double angle_err = 0;
  bool monotone = true;
  for (int t = 0; t < 50; ++t) {
    Mat p(6, 2);
    for (Index i = 0; i < 6; ++i) p(i, 0) = load(gen), p(i, 1) = load(gen);
    const double phi = *optimal_plane_angle(p.col(0), p.col(1));
    double best = -1, best_phi = 0;
    for (double a = -std::numbers::pi / 4; a <= std::numbers::pi / 4; a += 1e-5) {
      const double v = pair_objective(p.col(0), p.col(1), a);
      if (v > best) best = v, best_phi = a;
    }
    double gap = std::fmod(std::abs(phi - best_phi), std::numbers::pi / 2);
    gap = std::min(gap, std::numbers::pi / 2 - gap);
    angle_err = std::max(angle_err, gap);

    Mat l(8, 3);
    for (Index i = 0; i < 8; ++i)
      for (Index j = 0; j < 3; ++j) l(i, j) = load(gen);
    const auto r = varimax(LoadingMatrixd{l, default_labels(8)});
    double prev = varimax_objective(Mat(l.rowwise().normalized()));
    for (double v : r.objective_trace) {
      monotone = monotone && v >= prev - 1e-12 * std::abs(prev);
      prev = v;
    }
  }
  check(angle_err < 1e-4, "varimax angle " + num(angle_err));
  check(monotone, "varimax objective decreased");

  // minvar_count monotone in epsilon.
  bool eps_monotone = true;
  for (int t = 0; t < 30; ++t) {
    Mat y = normal_matrix(60, 6, gen);
    y.col(2) += y.col(1);
    y.col(5) += 0.5 * y.col(0);
    const auto e = eigen_symmetric(correlation_matrix(DataMatrixd(y)));
    Index previous = 0;
    for (double eps : {0.51, 0.6, 0.7, 0.8, 0.9, 1.0}) {
      const Index k = minvar_count(e, eps).chosen;
      eps_monotone = eps_monotone && k >= previous;
      previous = k;
    }
  }
  check(eps_monotone, "minvar not monotone in epsilon");

  std::string detail = failures.empty() ? "all properties hold" : "";
  for (const auto& f : failures) detail += (detail.empty() ? "" : "; ") + f;
  return {failures.empty(), detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome end_to_end() {
  const fs::path base = fs::temp_directory_path() / "facpca_acceptance";
  fs::remove_all(base);
  const fs::path a = base / "a", b = base / "b";
  auto run = [&](const fs::path& out) {
    const std::string cmd = std::string("\"") + FACPCA_CLI + "\" report --corr \"" +
                            data_path("dataset1_corr.csv") + "\" --out \"" + out.string() +
                            "\" > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  const auto start = std::chrono::steady_clock::now();
  const int status_a = run(a);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const int status_b = run(b);
  if (status_a != 0 || status_b != 0) return {false, "report exited with a non-zero status"};

  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    if (slurp(entry.path()) != slurp(b / entry.path().filename())) {
      return {false, entry.path().filename().string() + " differs between runs"};
    }
  }
  std::size_t files_b = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(b)) ++files_b;
  fs::remove_all(base);
  return {seconds < 5.0 && files > 0 && files == files_b,
          std::to_string(files) + " files identical, first run " + num(seconds) + " s"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria_list = {
      {"eigenvalue reproduction", eigenvalues},
      {"loadings reproduction", loadings},
      {"communality reproduction", communality},
      {"retention reproduction", retention},
      {"criteria comparison", criteria},
      {"varimax reproduction", rotation},
      {"artifact reproduction", artifact},
      {"explained-variance table", explained_variance},
      {"property suite", properties},
      {"end-to-end report", end_to_end},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria_list.size(); ++i) {
    Outcome o;
    try {
      o = criteria_list[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": "
              << criteria_list[i].first << " (" << o.detail << ")\n";
  }
  std::cout << (criteria_list.size() - static_cast<std::size_t>(failed)) << "/" << criteria_list.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}

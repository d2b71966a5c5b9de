#include "facpca/report.hpp"

#include <cstdlib>
#include <system_error>

#include "facpca/error.hpp"
#include "facpca/io.hpp"
#include "facpca/scree.hpp"

namespace facpca {

namespace {

Cell sig(double v) { return Cell::num(v, format_sig(v, 6)); }
Cell pct(double fraction) { return Cell::num(100.0 * fraction, format_percent(fraction)); }
Cell count_cell(Index v) { return Cell::num(static_cast<double>(v), std::to_string(v)); }

std::vector<std::string> factor_header(const std::string& corner, Index k, const std::string& prefix) {
  std::vector<std::string> h{corner};
  for (Index j = 0; j < k; ++j) h.push_back(prefix + std::to_string(j + 1));
  return h;
}

template <typename F>
auto stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(name) + ": " + e.detail());
  }
}

}  // namespace

void RunConfig::validate() const {
  if (!(epsilon > 0.5 && epsilon <= 1.0)) {
    throw Error(ErrorKind::Threshold, "epsilon must lie in (0.5, 1]");
  }
  if (!(percent_threshold > 0.0 && percent_threshold <= 100.0)) {
    throw Error(ErrorKind::Threshold, "percent threshold must lie in (0, 100]");
  }
  if (factor_count_override && *factor_count_override < 1) {
    throw Error(ErrorKind::Size, "factor count must be at least 1");
  }
}

Analysis analyze(const RunConfig& config) {
  config.validate();
  std::optional<DataMatrixd> data;
  std::size_t dropped = 0;
  CorrelationMatrixd corr = stage("ingest", [&] {
    if (config.input_kind == InputKind::CorrelationCsv) {
      return ingest_correlation_csv(config.input_path);
    }
    auto raw = ingest_raw_csv(config.input_path);
    dropped = raw.dropped_rows;
    data = std::move(raw.data);
    return correlation_matrix(*data);
  });
  const Index n = corr.size();

  auto eig = stage("eigen", [&] { return eigen_symmetric(corr); });
  auto full = stage("loadings", [&] { return full_loadings(eig, corr.labels()); });
  auto retention = stage("retention", [&] { return minvar_count(eig, config.epsilon); });
  const CriteriaCounts criteria = stage("criteria", [&] {
    return CriteriaCounts{
        .kaiser = kaiser_count(eig.eigenvalues),
        .percentage = percentage_count(eig.eigenvalues, config.percent_threshold),
        .half = half_count(n),
        .minvar = retention.chosen,
    };
  });

  const Index k = config.factor_count_override.value_or(retention.chosen);
  if (k < 1 || k > n) {
    throw Error(ErrorKind::Size, "config: factor count " + std::to_string(k) + " outside [1, " +
                                     std::to_string(n) + "]");
  }
  auto truncated = stage("truncate", [&] { return truncate(full, k); });
  std::optional<RotationResult<double>> rotation;
  if (config.rotate == RotationMethod::Varimax && k >= 2) {
    rotation = stage("varimax", [&] {
      return varimax(truncated, VarimaxOptions{.normalize = config.kaiser_normalize});
    });
  }

  return Analysis{
      .data = std::move(data),
      .dropped_rows = dropped,
      .corr = std::move(corr),
      .eig = std::move(eig),
      .full = std::move(full),
      .retention = std::move(retention),
      .criteria = criteria,
      .factors = k,
      .truncated = std::move(truncated),
      .rotation = std::move(rotation),
  };
}

Table summary_table(const DataMatrixd& data) {
  Table t{"summary", {""}, {}};
  for (const auto& l : data.labels()) t.header.push_back(l);
  std::vector<VariableStats<double>> stats;
  for (Index j = 0; j < data.cols(); ++j) stats.push_back(summarize(data.col(j)));
  const std::pair<const char*, double VariableStats<double>::*> fields[] = {
      {"Mean", &VariableStats<double>::mean},
      {"Median", &VariableStats<double>::median},
      {"Mode", &VariableStats<double>::mode},
      {"Standard deviation", &VariableStats<double>::std_dev},
      {"Minimum", &VariableStats<double>::minimum},
      {"Maximum", &VariableStats<double>::maximum},
  };
  for (const auto& [name, member] : fields) {
    std::vector<Cell> row{Cell::str(name)};
    for (const auto& s : stats) row.push_back(sig(s.*member));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table correlation_table(const CorrelationMatrixd& corr) {
  Table t{"correlation", {""}, {}};
  for (const auto& l : corr.labels()) t.header.push_back(l);
  for (Index i = 0; i < corr.size(); ++i) {
    std::vector<Cell> row{Cell::str(corr.labels()[static_cast<std::size_t>(i)])};
    // Round-trip precision so the file can be ingested again unchanged.
    for (Index j = 0; j < corr.size(); ++j) row.push_back(Cell::num(corr(i, j), format_roundtrip(corr(i, j))));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table determination_table(const CorrelationMatrixd& corr) {
  const Matrix<double> d = determination_matrix(corr);
  Table t{"determination_pct", {""}, {}};
  for (const auto& l : corr.labels()) t.header.push_back(l);
  for (Index i = 0; i < d.rows(); ++i) {
    std::vector<Cell> row{Cell::str(corr.labels()[static_cast<std::size_t>(i)])};
    for (Index j = 0; j < d.cols(); ++j) row.push_back(pct(d(i, j)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table eigenvalue_table(const EigenDecompositiond& eig) {
  Table t{"eigenvalues", {"No.", "Eigenvalue"}, {}};
  for (Index i = 0; i < eig.size(); ++i) t.rows.push_back({count_cell(i + 1), sig(eig.eigenvalues(i))});
  return t;
}

Table eigenvector_table(const EigenDecompositiond& eig, const std::vector<std::string>& labels) {
  Table t{"eigenvectors", factor_header("", eig.size(), "U"), {}};
  for (Index i = 0; i < eig.size(); ++i) {
    std::vector<Cell> row{Cell::str(labels[static_cast<std::size_t>(i)])};
    for (Index j = 0; j < eig.size(); ++j) row.push_back(sig(eig.eigenvectors(i, j)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table explained_variance_table(const EigenDecompositiond& eig) {
  Table t{"explained_variance",
          {"No.", "Eigenvalue", "Cumulative eigenvalues", "Percentage of variance",
           "Cumulative percentage of variance"},
          {}};
  const auto rows = variance_table(eig.eigenvalues);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    t.rows.push_back({count_cell(static_cast<Index>(i + 1)), sig(r.eigenvalue),
                      sig(r.cumulative_eigenvalue),
                      Cell::num(r.percent, format_fixed(r.percent, 2)),
                      Cell::num(r.cumulative_percent, format_fixed(r.cumulative_percent, 2))});
  }
  return t;
}

Table loadings_table(const std::string& name, const LoadingMatrixd& loadings, bool with_communality) {
  Table t{name, factor_header("", loadings.factors(), "F"), {}};
  if (with_communality) t.header.push_back("Communality");
  const Vector<double> h = communalities(loadings);
  for (Index i = 0; i < loadings.variables(); ++i) {
    std::vector<Cell> row{Cell::str(loadings.labels[static_cast<std::size_t>(i)])};
    for (Index j = 0; j < loadings.factors(); ++j) row.push_back(sig(loadings.entries(i, j)));
    if (with_communality) row.push_back(pct(h(i)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table common_variance_table(const std::string& name, const LoadingMatrixd& loadings) {
  Table t{name, factor_header("", loadings.factors(), "F"), {}};
  t.header.push_back("Communality");
  const Vector<double> h = communalities(loadings);
  for (Index i = 0; i < loadings.variables(); ++i) {
    std::vector<Cell> row{Cell::str(loadings.labels[static_cast<std::size_t>(i)])};
    for (Index j = 0; j < loadings.factors(); ++j) {
      row.push_back(pct(loadings.entries(i, j) * loadings.entries(i, j)));
    }
    row.push_back(pct(h(i)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cumulative_communality_table(const LoadingMatrixd& full) {
  const Matrix<double> c = cumulative_communalities(full);
  Table t{"cumulative_communalities_pct", factor_header("", c.cols(), "F"), {}};
  for (Index i = 0; i < c.rows(); ++i) {
    std::vector<Cell> row{Cell::str(full.labels[static_cast<std::size_t>(i)])};
    for (Index j = 0; j < c.cols(); ++j) row.push_back(pct(c(i, j)));
    t.rows.push_back(std::move(row));
  }
  std::vector<Cell> mean_row{Cell::str("Average in column")};
  for (Index j = 0; j < c.cols(); ++j) mean_row.push_back(pct(c.col(j).mean()));
  t.rows.push_back(std::move(mean_row));
  return t;
}

Table retention_table(const RetentionReport<double>& report) {
  const auto n = static_cast<Index>(report.min_var.size());
  Table t{"retention", factor_header("No. of factors", n, ""), {}};
  auto pct_row = [&](const char* name, const std::vector<double>& values) {
    std::vector<Cell> row{Cell::str(name)};
    for (double v : values) row.push_back(pct(v));
    t.rows.push_back(std::move(row));
  };
  pct_row("EigVal", report.eig_share);
  pct_row("MinVar", report.min_var);
  pct_row("AverVar", report.aver_var);
  std::vector<Cell> nr{Cell::str("NrMinVar")};
  for (int v : report.nr_min_var) nr.push_back(count_cell(v));
  t.rows.push_back(std::move(nr));
  return t;
}

Table criteria_table(const CriteriaCounts& counts, double percent_threshold, double epsilon) {
  return Table{"criteria",
               {"Criterion", "Parameter", "Count"},
               {
                   {Cell::str("Kaiser"), Cell::str("eigenvalue >= 1"), count_cell(counts.kaiser)},
                   {Cell::str("Percentage"), Cell::str(format_sig(percent_threshold, 6) + "%"),
                    count_cell(counts.percentage)},
                   {Cell::str("Half"), Cell::str("n/2"), count_cell(counts.half)},
                   {Cell::str("MinVar"), Cell::str("epsilon=" + format_sig(epsilon, 6)),
                    count_cell(counts.minvar)},
               }};
}

Table scores_table(const Matrix<double>& scores) {
  Table t{"scores", {}, {}};
  for (Index j = 0; j < scores.cols(); ++j) t.header.push_back("PC" + std::to_string(j + 1));
  for (Index i = 0; i < scores.rows(); ++i) {
    std::vector<Cell> row;
    for (Index j = 0; j < scores.cols(); ++j) row.push_back(sig(scores(i, j)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<Table> report_tables(const Analysis& a, const RunConfig& config) {
  std::vector<Table> tables;
  if (a.data) tables.push_back(summary_table(*a.data));
  tables.push_back(correlation_table(a.corr));
  tables.push_back(determination_table(a.corr));
  tables.push_back(eigenvalue_table(a.eig));
  tables.push_back(explained_variance_table(a.eig));
  tables.push_back(loadings_table("loadings_full", a.full, false));
  tables.push_back(cumulative_communality_table(a.full));
  tables.push_back(retention_table(a.retention));
  tables.push_back(criteria_table(a.criteria, config.percent_threshold, config.epsilon));
  tables.push_back(loadings_table("loadings", a.truncated, true));
  tables.push_back(common_variance_table("common_variances_pct", a.truncated));
  if (a.rotation) {
    tables.push_back(loadings_table("loadings_rotated", a.rotation->rotated, true));
    tables.push_back(common_variance_table("common_variances_rotated_pct", a.rotation->rotated));
  }
  return tables;
}

std::vector<std::filesystem::path> write_tables(const std::vector<Table>& tables,
                                                const std::filesystem::path& dir,
                                                OutputFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  if (format == OutputFormat::Json) {
    written.push_back(dir / "report.json");
    write_file(written.back(), tables_to_json(tables));
  } else {
    for (const auto& t : tables) {
      written.push_back(dir / (t.name + ".csv"));
      write_file(written.back(), t.to_csv());
    }
  }
  return written;
}

std::vector<std::filesystem::path> run_report(const RunConfig& config) {
  const Analysis analysis = analyze(config);
  auto written = stage("output", [&] {
    auto files = write_tables(report_tables(analysis, config), config.output_dir, config.output_format);
    const std::vector<double> eigenvalues(analysis.eig.eigenvalues.data(),
                                          analysis.eig.eigenvalues.data() + analysis.eig.size());
    emit_scree(eigenvalues, config.output_dir / "scree");
    files.push_back(config.output_dir / "scree.txt");
    files.push_back(config.output_dir / "scree.svg");
    return files;
  });
  return written;
}

std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& flag,
                                         const std::filesystem::path& fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("FACPCA_OUT"); env && *env) return env;
  return fallback;
}

}  // namespace facpca

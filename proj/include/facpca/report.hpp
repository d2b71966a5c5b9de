#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "facpca/factor_model.hpp"
#include "facpca/format.hpp"
#include "facpca/jacobi.hpp"
#include "facpca/retention.hpp"
#include "facpca/stats.hpp"
#include "facpca/varimax.hpp"

namespace facpca {

enum class InputKind { RawCsv, CorrelationCsv };
enum class RotationMethod { Varimax, None };
enum class OutputFormat { Csv, Json };

struct RunConfig {
  std::filesystem::path input_path;
  InputKind input_kind = InputKind::CorrelationCsv;
  double epsilon = kDefaultEpsilon;
  std::optional<Index> factor_count_override;
  RotationMethod rotate = RotationMethod::Varimax;
  bool kaiser_normalize = true;
  std::filesystem::path output_dir;
  OutputFormat output_format = OutputFormat::Csv;
  std::optional<std::uint64_t> seed;
  double percent_threshold = 80.0;

  /// Range checks that do not need the data (epsilon, percent, override >= 1).
  void validate() const;
};

struct CriteriaCounts {
  Index kaiser = 0;
  Index percentage = 0;
  Index half = 0;
  Index minvar = 0;
};

/// Everything a report shows, computed from one input.
struct Analysis {
  std::optional<DataMatrixd> data;
  std::size_t dropped_rows = 0;
  CorrelationMatrixd corr;
  EigenDecompositiond eig;
  LoadingMatrixd full;
  RetentionReport<double> retention;
  CriteriaCounts criteria;
  /// Factors kept: the override if given, otherwise the minimum-variance choice.
  Index factors = 0;
  LoadingMatrixd truncated;
  std::optional<RotationResult<double>> rotation;
};

/// Ingest and run every stage. Errors are re-thrown with the stage name
/// prefixed ("ingest: ...", "eigen: ...").
Analysis analyze(const RunConfig& config);

// Table builders; percentages use two decimals, other numbers six significant digits.
Table summary_table(const DataMatrixd& data);
Table correlation_table(const CorrelationMatrixd& corr);
Table determination_table(const CorrelationMatrixd& corr);
Table eigenvalue_table(const EigenDecompositiond& eig);
Table eigenvector_table(const EigenDecompositiond& eig, const std::vector<std::string>& labels);
Table explained_variance_table(const EigenDecompositiond& eig);
Table loadings_table(const std::string& name, const LoadingMatrixd& loadings, bool with_communality);
Table common_variance_table(const std::string& name, const LoadingMatrixd& loadings);
Table cumulative_communality_table(const LoadingMatrixd& full);
Table retention_table(const RetentionReport<double>& report);
Table criteria_table(const CriteriaCounts& counts, double percent_threshold, double epsilon);
Table scores_table(const Matrix<double>& scores);

/// All report tables for an analysis, in output order.
std::vector<Table> report_tables(const Analysis& analysis, const RunConfig& config);

/// Write `tables` into `dir` as one CSV per table or a single report.json.
std::vector<std::filesystem::path> write_tables(const std::vector<Table>& tables,
                                                const std::filesystem::path& dir,
                                                OutputFormat format);

/// Full report into config.output_dir, including the scree plot. Returns
/// the files written.
std::vector<std::filesystem::path> run_report(const RunConfig& config);

/// Output directory: explicit flag, else $FACPCA_OUT, else `fallback`.
std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& flag,
                                         const std::filesystem::path& fallback);

}  // namespace facpca

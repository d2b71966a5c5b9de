// facpca: correlation-based PCA and factor analysis from the command line.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "facpca/facpca.hpp"
#include "facpca/io.hpp"
#include "facpca/report.hpp"
#include "facpca/scree.hpp"

namespace fs = std::filesystem;
using namespace facpca;

namespace {

struct Options {
  std::string input;
  std::string corr;
  double epsilon = kDefaultEpsilon;
  std::optional<long> factors;
  RotationMethod rotate = RotationMethod::Varimax;
  bool no_kaiser_normalize = false;
  OutputFormat format = OutputFormat::Csv;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  double percent = 80.0;
  long draws = 1000;
};

void add_common(CLI::App* cmd, Options& o) {
  auto* input = cmd->add_option("--input", o.input, "Raw observations CSV (header of labels)");
  auto* corr = cmd->add_option("--corr", o.corr, "Correlation matrix CSV");
  input->excludes(corr);
  cmd->add_option("--epsilon", o.epsilon, "Minimum explained variance per variable, in (0.5, 1]")
      ->capture_default_str();
  cmd->add_option("--factors", o.factors, "Override the number of factors/components");
  cmd->add_option("--rotate", o.rotate, "Rotation applied to truncated loadings")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, RotationMethod>{{"varimax", RotationMethod::Varimax},
                                                {"none", RotationMethod::None}},
          CLI::ignore_case));
  cmd->add_flag("--no-kaiser-normalize", o.no_kaiser_normalize,
                "Rotate raw loadings instead of unit-length rows");
  cmd->add_option("--format", o.format, "Output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, OutputFormat>{{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}},
          CLI::ignore_case));
  cmd->add_option("--out", o.out, "Output directory (default: $FACPCA_OUT)");
  cmd->add_option("--seed", o.seed, "Seed for simulation");
  cmd->add_option("--percent", o.percent, "Threshold of the percentage criterion, in (0, 100]")
      ->capture_default_str();
}

RunConfig to_config(const Options& o, const fs::path& fallback_out) {
  RunConfig c;
  if (!o.input.empty()) {
    c.input_path = o.input;
    c.input_kind = InputKind::RawCsv;
  } else if (!o.corr.empty()) {
    c.input_path = o.corr;
    c.input_kind = InputKind::CorrelationCsv;
  } else {
    throw Error(ErrorKind::Io, "one of --input or --corr is required");
  }
  c.epsilon = o.epsilon;
  if (o.factors) c.factor_count_override = static_cast<Index>(*o.factors);
  c.rotate = o.rotate;
  c.kaiser_normalize = !o.no_kaiser_normalize;
  c.output_format = o.format;
  c.output_dir = resolve_output_dir(o.out ? std::optional<fs::path>(*o.out) : std::nullopt, fallback_out);
  c.seed = o.seed;
  c.percent_threshold = o.percent;
  c.validate();
  return c;
}

/// Tables go to the output directory when one is configured, else to stdout.
void emit(const std::vector<Table>& tables, const RunConfig& c) {
  if (!c.output_dir.empty()) {
    for (const auto& p : write_tables(tables, c.output_dir, c.output_format)) {
      std::cerr << "wrote " << p.string() << '\n';
    }
    return;
  }
  if (c.output_format == OutputFormat::Json) {
    std::cout << tables_to_json(tables);
    return;
  }
  for (std::size_t i = 0; i < tables.size(); ++i) {
    std::cout << (i ? "\n" : "") << "# " << tables[i].name << '\n' << tables[i].to_csv();
  }
}

DataMatrixd require_raw(const RunConfig& c, const char* command) {
  if (c.input_kind != InputKind::RawCsv) {
    throw Error(ErrorKind::Data, std::string(command) + " needs raw observations (--input)");
  }
  auto raw = ingest_raw_csv(c.input_path);
  if (raw.dropped_rows > 0) {
    std::cerr << "dropped " << raw.dropped_rows << " row(s) with missing values\n";
  }
  return std::move(raw.data);
}

std::vector<double> to_std(const Vector<double>& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Principal component and factor analysis on correlation matrices"};
  app.require_subcommand(1);
  Options o;

  struct Command {
    const char* name;
    const char* help;
    CLI::App* app = nullptr;
  };
  std::vector<Command> commands = {
      {"summary", "Descriptive statistics of raw columns"},
      {"corr", "Correlation and determination matrices"},
      {"eigen", "Eigenvalues and eigenvectors of the correlation matrix"},
      {"pca", "Principal components with the minimum-variance retention rule"},
      {"fa", "Factor loadings, truncated and rotated"},
      {"select", "Compare factor-count criteria"},
      {"report", "Write the full report into the output directory"},
      {"scree", "Write the scree plot (text series and SVG)"},
      {"simulate", "Draw observations from the fitted factor model"},
  };
  for (auto& cmd : commands) {
    cmd.app = app.add_subcommand(cmd.name, cmd.help);
    add_common(cmd.app, o);
  }
  CLI::App* simulate_cmd = commands.back().app;
  simulate_cmd->add_option("--draws", o.draws, "Number of simulated observations")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    const bool writes_files = name == "report" || name == "scree";
    const RunConfig c = to_config(o, writes_files ? fs::path("facpca_out") : fs::path());

    if (name == "report") {
      for (const auto& p : run_report(c)) std::cerr << "wrote " << p.string() << '\n';
      return 0;
    }
    if (name == "summary") {
      emit({summary_table(require_raw(c, "summary"))}, c);
      return 0;
    }
    if (name == "pca") {
      const DataMatrixd data = require_raw(c, "pca");
      auto result = pca_modified(data, c.epsilon);
      Matrix<double> scores = result.scores;
      if (c.factor_count_override) {
        scores = project(standardize(data), result.eig.eigenvectors, *c.factor_count_override);
      }
      emit({eigenvalue_table(result.eig), retention_table(result.report), scores_table(scores)}, c);
      return 0;
    }

    const Analysis a = analyze(c);
    if (name == "corr") {
      emit({correlation_table(a.corr), determination_table(a.corr)}, c);
    } else if (name == "eigen") {
      emit({eigenvalue_table(a.eig), eigenvector_table(a.eig, a.corr.labels()),
            explained_variance_table(a.eig)},
           c);
    } else if (name == "fa") {
      std::vector<Table> tables{loadings_table("loadings", a.truncated, true),
                                common_variance_table("common_variances_pct", a.truncated)};
      if (a.rotation) {
        tables.push_back(loadings_table("loadings_rotated", a.rotation->rotated, true));
        tables.push_back(common_variance_table("common_variances_rotated_pct", a.rotation->rotated));
        if (!a.rotation->converged) std::cerr << "warning: varimax did not converge\n";
      }
      emit(tables, c);
    } else if (name == "select") {
      emit({explained_variance_table(a.eig), retention_table(a.retention),
            criteria_table(a.criteria, c.percent_threshold, c.epsilon)},
           c);
    } else if (name == "scree") {
      fs::create_directories(c.output_dir);
      emit_scree(to_std(a.eig.eigenvalues), c.output_dir / "scree");
      std::cerr << "wrote " << (c.output_dir / "scree.svg").string() << '\n';
    } else if (name == "simulate") {
      const FactorModeld model = build_model(a.truncated);
      const auto sample = simulate(model, static_cast<Index>(o.draws), c.seed.value_or(1));
      Table t{"simulated", sample.labels(), {}};
      for (Index i = 0; i < sample.rows(); ++i) {
        std::vector<Cell> row;
        for (Index j = 0; j < sample.cols(); ++j)
          row.push_back(Cell::num(sample.values()(i, j), format_sig(sample.values()(i, j), 6)));
        t.rows.push_back(std::move(row));
      }
      emit({t}, c);
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "facpca: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "facpca: " << e.what() << '\n';
    return 1;
  }
}

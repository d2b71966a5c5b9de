#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>

#include "facpca/stats.hpp"

namespace facpca {

struct RawIngest {
  DataMatrixd data;
  /// Rows discarded because a cell was missing, non-numeric or non-finite.
  std::size_t dropped_rows = 0;
};

/// Header row of variable labels followed by numeric rows. Rows with a
/// missing or non-numeric cell are dropped (listwise deletion).
RawIngest parse_raw_csv(std::istream& in);
RawIngest ingest_raw_csv(const std::filesystem::path& path);

/// Square block with a label header (first cell is the corner) and a label
/// in the first column of every row. Asymmetry up to 1e-6 is averaged away
/// and diagonal entries within 1e-6 of one are set to one.
CorrelationMatrixd parse_correlation_csv(std::istream& in);
CorrelationMatrixd ingest_correlation_csv(const std::filesystem::path& path);

/// Inverse of parse_correlation_csv, at round-trip precision.
std::string correlation_to_csv(const CorrelationMatrixd& corr);

}  // namespace facpca

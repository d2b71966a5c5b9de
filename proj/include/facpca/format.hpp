#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace facpca {

/// `digits` significant digits, "%g" style. Negative zero prints as "0".
std::string format_sig(double value, int digits = 6);
/// Fixed-point with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);
/// Shortest text that parses back to the same double.
std::string format_roundtrip(double value);
/// Fraction as a percentage with two decimals: 0.3271 -> "32.71".
std::string format_percent(double fraction);

/// Quote a CSV field when it holds a comma, quote or newline.
std::string csv_escape(const std::string& s);

struct Cell {
  std::string text;
  /// Set for numeric cells; JSON emits these as numbers.
  std::optional<double> number;

  static Cell str(std::string s) { return {std::move(s), std::nullopt}; }
  static Cell num(double v, std::string formatted) { return {std::move(formatted), v}; }
};

/// A named rectangular table with a header row.
struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  std::string to_csv() const;
  std::string to_text() const;
};

/// {"<name>": {"header": [...], "rows": [[...], ...]}, ...} in table order.
std::string tables_to_json(const std::vector<Table>& tables);

/// Write `contents` to `path`, throwing IO errors.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace facpca

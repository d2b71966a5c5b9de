#include "facpca/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "facpca/error.hpp"
#include "facpca/format.hpp"

namespace facpca {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Split one CSV record. Double quotes group fields and "" escapes a quote.
std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (quoted) throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": unterminated quote");
  fields.emplace_back(trim(current));
  return fields;
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

struct Record {
  std::size_t line_no;
  std::vector<std::string> fields;
};

/// Non-blank records of the stream, with 1-based line numbers.
std::vector<Record> read_records(std::istream& in) {
  std::vector<Record> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (trim(line).empty()) continue;
    records.push_back({line_no, split_record(line, line_no)});
  }
  return records;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

RawIngest parse_raw_csv(std::istream& in) {
  const auto records = read_records(in);
  if (records.empty()) throw Error(ErrorKind::Parse, "empty input, expected a header row");
  const auto& labels = records.front().fields;
  const std::size_t n = labels.size();
  for (const auto& l : labels) {
    if (l.empty()) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(records.front().line_no) +
                                        ": empty variable label");
    }
  }

  std::vector<double> cells;
  std::size_t kept = 0, dropped = 0;
  std::vector<double> row(n);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != n) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(rec.line_no) + ": expected " +
                                        std::to_string(n) + " fields, got " +
                                        std::to_string(rec.fields.size()));
    }
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      const auto v = parse_number(rec.fields[j]);
      if (v) {
        row[j] = *v;
      } else {
        ok = false;
      }
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    cells.insert(cells.end(), row.begin(), row.end());
    ++kept;
  }

  Matrix<double> values(static_cast<Index>(kept), static_cast<Index>(n));
  for (std::size_t i = 0; i < kept; ++i)
    for (std::size_t j = 0; j < n; ++j)
      values(static_cast<Index>(i), static_cast<Index>(j)) = cells[i * n + j];
  return {DataMatrixd(std::move(values), labels), dropped};
}

RawIngest ingest_raw_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_raw_csv(in);
}

CorrelationMatrixd parse_correlation_csv(std::istream& in) {
  const auto records = read_records(in);
  if (records.empty()) throw Error(ErrorKind::Parse, "empty input, expected a header row");
  const auto& header = records.front().fields;
  if (header.size() < 2) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(records.front().line_no) +
                                      ": header needs a corner cell and at least one label");
  }
  const std::vector<std::string> labels(header.begin() + 1, header.end());
  const auto n = static_cast<Index>(labels.size());
  if (static_cast<Index>(records.size()) - 1 != n) {
    throw Error(ErrorKind::Data, "matrix is not square: " + std::to_string(labels.size()) +
                                     " labels but " + std::to_string(records.size() - 1) + " rows");
  }

  Matrix<double> r(n, n);
  for (Index i = 0; i < n; ++i) {
    const auto& rec = records[static_cast<std::size_t>(i + 1)];
    if (static_cast<Index>(rec.fields.size()) != n + 1) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(rec.line_no) + ": expected " +
                                        std::to_string(n + 1) + " fields, got " +
                                        std::to_string(rec.fields.size()));
    }
    if (rec.fields.front() != labels[static_cast<std::size_t>(i)]) {
      throw Error(ErrorKind::Data, "line " + std::to_string(rec.line_no) + ": row label '" +
                                       rec.fields.front() + "' does not match column label '" +
                                       labels[static_cast<std::size_t>(i)] + "'");
    }
    for (Index j = 0; j < n; ++j) {
      const auto v = parse_number(rec.fields[static_cast<std::size_t>(j + 1)]);
      if (!v) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(rec.line_no) +
                                          ": non-numeric entry '" +
                                          rec.fields[static_cast<std::size_t>(j + 1)] + "'");
      }
      r(i, j) = *v;
    }
  }

  constexpr double tol = 1e-6;
  for (Index i = 0; i < n; ++i) {
    if (std::abs(r(i, i) - 1.0) > tol) {
      throw Error(ErrorKind::Data, "unit diagonal violated at '" + labels[static_cast<std::size_t>(i)] + "'");
    }
    r(i, i) = 1.0;
    for (Index j = i + 1; j < n; ++j) {
      if (std::abs(r(i, j) - r(j, i)) > tol) {
        throw Error(ErrorKind::Data, "symmetry violated at (" + labels[static_cast<std::size_t>(i)] +
                                         "," + labels[static_cast<std::size_t>(j)] + ")");
      }
      const double avg = 0.5 * (r(i, j) + r(j, i));
      if (std::abs(avg) > 1.0 + tol) {
        throw Error(ErrorKind::Data, "range [-1, 1] violated at (" +
                                         labels[static_cast<std::size_t>(i)] + "," +
                                         labels[static_cast<std::size_t>(j)] + ")");
      }
      r(i, j) = r(j, i) = std::clamp(avg, -1.0, 1.0);
    }
  }
  return CorrelationMatrixd(std::move(r), labels);
}

CorrelationMatrixd ingest_correlation_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_correlation_csv(in);
}

std::string correlation_to_csv(const CorrelationMatrixd& corr) {
  std::ostringstream out;
  for (const auto& l : corr.labels()) out << ',' << csv_escape(l);
  out << '\n';
  for (Index i = 0; i < corr.size(); ++i) {
    out << csv_escape(corr.labels()[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < corr.size(); ++j) out << ',' << format_roundtrip(corr(i, j));
    out << '\n';
  }
  return out.str();
}

}  // namespace facpca

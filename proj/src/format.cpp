#include "facpca/format.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "facpca/error.hpp"

namespace facpca {

namespace {

std::string printf_double(const char* fmt, int precision, double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, precision, value);
  std::string s(buf);
  // Values that round to zero must not print as "-0.00".
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

}  // namespace

std::string format_sig(double value, int digits) { return printf_double("%.*g", digits, value); }

std::string format_fixed(double value, int decimals) {
  return printf_double("%.*f", decimals, value);
}

std::string format_roundtrip(double value) { return printf_double("%.*g", 17, value); }

std::string format_percent(double fraction) { return format_fixed(100.0 * fraction, 2); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string Table::to_csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_escape(header[i]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(row[i].text);
    out << '\n';
  }
  return out.str();
}

std::string Table::to_text() const {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i)
      width[i] = std::max(width[i], row[i].text.size());

  std::ostringstream out;
  out << name << '\n';
  auto line = [&](auto&& cell_text, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::string text = cell_text(i);
      out << (i ? "  " : "") << std::string(width[i] - text.size(), ' ') << text;
    }
    out << '\n';
  };
  line([&](std::size_t i) { return header[i]; }, header.size());
  for (const auto& row : rows) line([&](std::size_t i) { return row[i].text; }, row.size());
  return out.str();
}

std::string tables_to_json(const std::vector<Table>& tables) {
  nlohmann::ordered_json root = nlohmann::ordered_json::object();
  for (const auto& table : tables) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json cells = nlohmann::ordered_json::array();
      for (const auto& cell : row) {
        if (cell.number) {
          cells.push_back(std::stod(cell.text));
        } else {
          cells.push_back(cell.text);
        }
      }
      rows.push_back(std::move(cells));
    }
    root[table.name] = {{"header", table.header}, {"rows", std::move(rows)}};
  }
  return root.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out << contents;
  out.close();
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

}  // namespace facpca

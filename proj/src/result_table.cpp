#include "supercoherence/result_table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace supercoherence {

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct CsvCell {
  std::string operator()(long long v) const { return std::to_string(v); }
  std::string operator()(double v) const { return format_double(v); }
  std::string operator()(bool v) const { return v ? "true" : "false"; }
  std::string operator()(const std::string& v) const { return csv_escape(v); }
};

struct JsonCell {
  nlohmann::json operator()(long long v) const { return v; }
  nlohmann::json operator()(double v) const {
    if (!std::isfinite(v)) return nullptr;
    // same 15-digit rounding as the CSV output
    return std::stod(format_double(v));
  }
  nlohmann::json operator()(bool v) const { return v; }
  nlohmann::json operator()(const std::string& v) const { return v; }
};

}  // namespace

const char* format_name(OutputFormat format) {
  return format == OutputFormat::csv ? "csv" : "json";
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, table has " +
                                std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << ',';
    out << csv_escape(table.columns[c]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << std::visit(CsvCell{}, row[c]);
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const ResultTable& table) {
  nlohmann::json meta = table.meta;
  if (table.timestamp) meta["timestamp"] = *table.timestamp;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) r.push_back(std::visit(JsonCell{}, cell));
    rows.push_back(std::move(r));
  }
  return nlohmann::json{{"meta", meta}, {"columns", table.columns}, {"rows", rows}};
}

void emit_results(const ResultTable& table, OutputFormat format,
                  const std::optional<std::string>& path, std::ostream& fallback) {
  const std::string body =
      format == OutputFormat::csv ? to_csv(table) : to_json(table).dump(2) + "\n";
  if (!path) {
    fallback << body;
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + *path + "' for writing");
  file << body;
  file.flush();
  if (!file) throw std::runtime_error("failed writing '" + *path + "'");
}

}  // namespace supercoherence

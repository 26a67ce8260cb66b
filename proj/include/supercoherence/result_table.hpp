#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace supercoherence {

using Cell = std::variant<long long, double, bool, std::string>;

enum class OutputFormat { csv, json };

const char* format_name(OutputFormat format);

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Config echo and tool version; emitted under "meta" in JSON.
  nlohmann::json meta = nlohmann::json::object();
  /// Left empty by default so that repeated runs stay byte-identical.
  std::optional<std::string> timestamp;

  /// Throws std::invalid_argument when the row width differs from the header.
  void add_row(std::vector<Cell> row);
};

/// Header line, then one line per row. Doubles use 15 significant digits.
std::string to_csv(const ResultTable& table);

/// {"meta": {...}, "columns": [...], "rows": [[...], ...]}
nlohmann::json to_json(const ResultTable& table);

/// Writes to `path`, or to `fallback` when no path is given. Throws
/// std::runtime_error naming the path if it cannot be written.
void emit_results(const ResultTable& table, OutputFormat format,
                  const std::optional<std::string>& path, std::ostream& fallback);

}  // namespace supercoherence

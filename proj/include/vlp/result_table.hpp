#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace vlp {

inline constexpr const char* kVersion = "0.3.0";

using Cell = std::variant<std::string, double, std::int64_t>;

/// Typed rows plus a provenance block (config echo, version, seed).
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::json provenance = nlohmann::json::object();

  explicit ResultTable(std::vector<std::string> cols = {}) : columns(std::move(cols)) {}
  void add_row(std::vector<Cell> row);
  /// True when any real cell is infinite or NaN.
  bool has_sentinel() const;

  bool operator==(const ResultTable& other) const;
};

enum class Format { csv, json };

Format parse_format(const std::string& s);

/// "inf", "-inf", "nan" for non-finite values, shortest round-trip text otherwise.
std::string format_real(double v);

std::string emit(const ResultTable& table, Format format);
ResultTable parse_json_table(const std::string& text);

/// Writes to `path`, creating parent directories; throws std::runtime_error when unwritable.
void write_file(const std::string& path, const std::string& content);

}  // namespace vlp

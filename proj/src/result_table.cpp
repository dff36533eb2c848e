#include "vlp/result_table.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vlp/grid.hpp"

namespace vlp {

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw InvalidArgument("row width differs from column count");
  rows.push_back(std::move(row));
}

bool ResultTable::has_sentinel() const {
  for (const auto& row : rows)
    for (const auto& c : row)
      if (const auto* d = std::get_if<double>(&c); d && !std::isfinite(*d)) return true;
  return false;
}

namespace {

bool same_cell(const Cell& a, const Cell& b) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<double>(&a)) {
    const double y = std::get<double>(b);
    return (std::isnan(*x) && std::isnan(y)) || *x == y;
  }
  return a == b;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json cell_to_json(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  const double d = std::get<double>(c);
  if (std::isfinite(d)) return d;
  return nlohmann::json{{"real", format_real(d)}};
}

Cell cell_from_json(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_object() && j.contains("real")) {
    const auto s = j.at("real").get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  throw InvalidArgument("unrecognized table cell");
}

}  // namespace

bool ResultTable::operator==(const ResultTable& other) const {
  if (columns != other.columns || provenance != other.provenance || rows.size() != other.rows.size()) return false;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (!same_cell(rows[r][c], other.rows[r][c])) return false;
  return true;
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw InvalidArgument("format must be csv or json");
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string emit(const ResultTable& table, Format format) {
  if (format == Format::json) {
    nlohmann::json j;
    j["columns"] = table.columns;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : table.rows) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& c : row) r.push_back(cell_to_json(c));
      j["rows"].push_back(std::move(r));
    }
    j["provenance"] = table.provenance;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  for (const auto& [key, value] : table.provenance.items()) os << "# " << key << ": " << value.dump() << "\r\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << quote(table.columns[c]);
  os << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      if (const auto* s = std::get_if<std::string>(&row[c]))
        os << quote(*s);
      else if (const auto* i = std::get_if<std::int64_t>(&row[c]))
        os << *i;
      else
        os << format_real(std::get<double>(row[c]));
    }
    os << "\r\n";
  }
  return os.str();
}

ResultTable parse_json_table(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ResultTable t(j.at("columns").get<std::vector<std::string>>());
  for (const auto& r : j.at("rows")) {
    std::vector<Cell> row;
    for (const auto& c : r) row.push_back(cell_from_json(c));
    t.add_row(std::move(row));
  }
  t.provenance = j.at("provenance");
  return t;
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace vlp

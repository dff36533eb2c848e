#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "vlp/experiments.hpp"
#include "vlp/result_table.hpp"

using namespace vlp;
using nlohmann::json;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

ResultTable sample_table() {
  ResultTable t({"name", "value", "count"});
  t.add_row({std::string("plain"), 1.5, std::int64_t{3}});
  t.add_row({std::string("has \"quotes\", comma"), std::numeric_limits<double>::infinity(), std::int64_t{-1}});
  t.add_row({std::string("tiny"), 1e-300, std::int64_t{0}});
  t.provenance = {{"version", kVersion}, {"seed", 4}};
  return t;
}

std::vector<double> column_values(const ResultTable& t, const std::string& stat) {
  std::vector<double> out;
  for (const auto& row : t.rows)
    if (std::get<std::string>(row[1]) == stat) out.push_back(std::get<double>(row[2]));
  return out;
}

}  // namespace

TEST_CASE("real formatting") {
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_real(std::nan("")) == "nan");
  CHECK(format_real(0.1) == "0.1");
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK_THROWS_AS(parse_format("xml"), InvalidArgument);
}

TEST_CASE("empty table emits header and provenance only") {
  ResultTable t({"a", "b"});
  t.provenance = {{"seed", 1}};
  const auto lines = lines_of(emit(t, Format::csv));
  REQUIRE(!lines.empty());
  std::size_t comments = 0;
  for (const auto& l : lines)
    if (l.rfind("#", 0) == 0) ++comments;
  CHECK(comments >= 1);
  CHECK(lines.size() == comments + 1);
  CHECK(lines.back().find('a') != std::string::npos);
  CHECK(lines.back().find('b') != std::string::npos);
}

TEST_CASE("CSV rendering") {
  const std::string csv = emit(sample_table(), Format::csv);
  CHECK(csv.find("\"has \"\"quotes\"\", comma\",inf,-1") != std::string::npos);
  CHECK(csv.find("\r\n") != std::string::npos);
  CHECK(csv.find("1.5,3") != std::string::npos);
}

TEST_CASE("JSON round trip") {
  const auto t = sample_table();
  const auto back = parse_json_table(emit(t, Format::json));
  CHECK(back == t);
  CHECK(back.has_sentinel());
  const auto doc = json::parse(emit(t, Format::json));
  CHECK(doc.contains("provenance"));
  CHECK(doc["rows"][1][1]["real"] == "inf");
}

TEST_CASE("rows must match the columns") {
  ResultTable t({"a", "b"});
  CHECK_THROWS_AS(t.add_row({1.0}), InvalidArgument);
}

TEST_CASE("write_file creates directories") {
  const auto dir = std::filesystem::temp_directory_path() / "vlp_harness_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_file((dir / "out.csv").string(), "x\n");
  std::ifstream in(dir / "out.csv");
  std::string s;
  std::getline(in, s);
  CHECK(s == "x");
  std::filesystem::remove_all(dir.parent_path());
}

TEST_CASE("config validation lists every bad field") {
  try {
    parse_config(json{{"experiment", "thm12-ratio"}, {"sed", 3}, {"budget", 0}, {"grid", {{"kind", "uniform"}, {"a", 1.0}, {"b", 0.0}, {"n", 4}}}});
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    const auto& f = e.fields();
    auto mentions = [&](const std::string& key) {
      return std::any_of(f.begin(), f.end(), [&](const std::string& s) { return s.find(key) != std::string::npos; });
    };
    CHECK(mentions("sed"));
    CHECK(mentions("budget"));
    CHECK(mentions("grid"));
  }
  CHECK_THROWS_AS(parse_config(json{{"experiment", "no-such"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"experiment", "thm12-ratio"}, {"params", {{"dual", 3}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"experiment", "thm12-ratio"}, {"exponent", {{"kind", "constant"}, {"q", 0.5}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
}

TEST_CASE("every registered experiment has a valid default config") {
  for (const auto& e : experiment_registry()) {
    const auto cfg = parse_config(json{{"experiment", e.id}});
    CHECK(cfg.experiment == e.id);
    CHECK(parse_config(to_json(cfg)).budget == cfg.budget);
  }
}

TEST_CASE("grid and exponent specs") {
  const auto g = grid_from_json(json{{"kind", "uniform"}, {"a", -1.0}, {"b", 1.0}, {"n", 8}});
  CHECK(g->cells() == 8);
  const auto e = grid_from_json(json{{"kind", "edges"}, {"edges", {0.0, 1.0, 3.0}}});
  CHECK(e->volume(1) == 2.0);
  const auto p = exponent_from_json(g, json{{"kind", "log-holder"}, {"p_inf", 2.0}, {"c", 1.0}});
  CHECK(p.p_plus() <= 3.0);
  CHECK_THROWS(grid_from_json(json{{"kind", "hexagonal"}}));
}

TEST_CASE("constant exponent collapses the partition ratio") {
  auto cfg = parse_config(json{{"experiment", "thm12-ratio"},
                               {"grid", {{"kind", "uniform"}, {"a", -8.0}, {"b", 8.0}, {"n", 64}}},
                               {"exponent", {{"kind", "constant"}, {"q", 3.0}}},
                               {"budget", 8}});
  const auto t = run_experiment(cfg);
  REQUIRE(t.columns == std::vector<std::string>{"group", "statistic", "value", "witness", "samples"});
  for (const auto& stat : {"inf", "sup", "constant"})
    for (double v : column_values(t, stat)) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(t.provenance.at("version") == kVersion);
  CHECK(t.provenance.at("seed") == 0);
}

TEST_CASE("runs are deterministic") {
  const json doc{{"experiment", "local-global"},
                 {"grid", {{"kind", "uniform"}, {"a", -8.0}, {"b", 8.0}, {"n", 64}}},
                 {"seed", 17},
                 {"budget", 6}};
  const auto a = run_experiment(parse_config(doc));
  const auto b = run_experiment(parse_config(doc));
  CHECK(a == b);
  CHECK(emit(a, Format::csv) == emit(b, Format::csv));
  json other = doc;
  other["seed"] = 18;
  CHECK_FALSE(run_experiment(parse_config(other)) == a);
}

TEST_CASE("every reported extremum names a witness") {
  const json doc{{"experiment", "ainfty"}, {"budget", 5}};
  const auto t = run_experiment(parse_config(doc));
  REQUIRE(!t.rows.empty());
  for (const auto& row : t.rows) CHECK(!std::get<std::string>(row[3]).empty());
}

TEST_CASE("lattice step functions do not depend on the resolution") {
  const auto coarse = share(Grid::uniform(-4.0, 4.0, 32));
  const auto fine = share(Grid::uniform(-4.0, 4.0, 128));
  const auto a = lattice_step_function(coarse, 0.5, 3, 2);
  const auto b = lattice_step_function(fine, 0.5, 3, 2);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i] == a[i / 4]);
  const auto pos = lattice_step_function(coarse, 0.5, 3, 2, 0.0);
  for (std::size_t i = 0; i < pos.size(); ++i) {
    CHECK(pos[i] >= 0.05);
    CHECK(pos[i] <= 5.0);
  }
}

TEST_CASE("N-function checks on a small budget") {
  NfunOptions opt;
  const auto checks = nfun_inequalities(opt, 200, 1);
  REQUIRE(checks.size() == 3);
  for (const auto& c : checks) {
    CHECK(c.samples > 0);
    CHECK(c.violations == 0);
  }
  CHECK(double_conjugate_error(2.0, 1.0) < 1e-3);
}

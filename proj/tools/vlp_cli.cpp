// vlp: run variable-exponent experiments from JSON configs.
//
//   vlp list
//   vlp check [--only N]...
//   vlp <experiment> [--config PATH] [--seed N] [--out PATH] [--format csv|json] [--strict]
//
// Exit codes: 0 success, 1 config error, 2 sentinel value under --strict,
// 3 internal error or a failed acceptance criterion.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vlp/acceptance.hpp"
#include "vlp/experiments.hpp"
#include "vlp/result_table.hpp"

namespace {

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
  bool strict = false;
};

nlohmann::json load_config(const std::string& path, const std::string& id) {
  if (path.empty()) return {{"experiment", id}};
  std::ifstream in(path);
  if (!in) throw vlp::ConfigError({"config: cannot read " + path});
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw vlp::ConfigError({std::string("config: ") + e.what()});
  }
  if (doc.is_object() && !doc.contains("experiment")) doc["experiment"] = id;
  if (doc.is_object() && doc["experiment"] != id)
    throw vlp::ConfigError({"experiment: config names " + doc["experiment"].dump() + " but subcommand is " + id});
  return doc;
}

std::string output_path(const RunOptions& opt, const vlp::ExperimentConfig& cfg) {
  std::string path = !opt.out.empty() ? opt.out : cfg.out;
  if (path.empty()) return {};
  if (const char* dir = std::getenv("VLP_OUT_DIR"); dir && *dir && std::filesystem::path(path).is_relative())
    path = (std::filesystem::path(dir) / path).string();
  return path;
}

int run(const std::string& id, const RunOptions& opt) {
  vlp::ExperimentConfig cfg;
  vlp::Format format;
  try {
    format = vlp::parse_format(opt.format);
    auto doc = load_config(opt.config, id);
    if (opt.seed) doc["seed"] = *opt.seed;
    cfg = vlp::parse_config(doc);
  } catch (const vlp::ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& f : e.fields()) std::cerr << "  " << f << "\n";
    return 1;
  } catch (const vlp::InvalidArgument& e) {
    std::cerr << "config error:\n  " << e.what() << "\n";
    return 1;
  }
  vlp::ResultTable table;
  try {
    table = vlp::run_experiment(cfg);
  } catch (const vlp::ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& f : e.fields()) std::cerr << "  " << f << "\n";
    return 1;
  }
  const std::string text = vlp::emit(table, format);
  const std::string path = output_path(opt, cfg);
  if (path.empty()) {
    std::cout << text;
  } else {
    vlp::write_file(path, text);
    std::cerr << "wrote " << path << "\n";
  }
  if (opt.strict && table.has_sentinel()) {
    std::cerr << "non-finite value in result table\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on variable-exponent Lebesgue spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vlp::kVersion));

  auto* list = app.add_subcommand("list", "List experiments with a one-line description");
  auto* check = app.add_subcommand("check", "Run the acceptance suite");
  std::vector<int> only;
  check->add_option("--only", only, "Run only these criteria (1-12)")->check(CLI::Range(1, 12));

  RunOptions opt;
  std::string chosen;
  for (const auto& e : vlp::experiment_registry()) {
    auto* sub = app.add_subcommand(e.id, e.description);
    sub->add_option("--config", opt.config, "JSON config file");
    sub->add_option("--seed", opt.seed, "Override the config seed");
    sub->add_option("--out", opt.out, "Output path (stdout if omitted)");
    sub->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--strict", opt.strict, "Exit 2 when the table holds inf or nan");
    sub->callback([&chosen, id = e.id] { chosen = id; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (list->parsed()) {
      for (const auto& e : vlp::experiment_registry()) std::cout << e.id << "\t" << e.description << "\n";
      return 0;
    }
    if (check->parsed()) return vlp::run_acceptance(std::cout, only.empty() ? vlp::acceptance_ids() : only) == 0 ? 0 : 3;
    return run(chosen, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

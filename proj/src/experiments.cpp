#include "vlp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "vlp/lpaley.hpp"
#include "vlp/maximal.hpp"
#include "vlp/modular.hpp"
#include "vlp/rng.hpp"

namespace vlp {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : "; ") + p;
  return s;
}

// Collects validation failures instead of stopping at the first one.
class Checker {
 public:
  explicit Checker(std::vector<std::string>& errors) : errors_(errors) {}

  void fail(const std::string& path, const std::string& msg) { errors_.push_back(path + ": " + msg); }

  double real(const json& obj, const std::string& path, const std::string& key, double lo, double hi, bool open_lo = false) {
    const std::string where = path + "." + key;
    if (!obj.contains(key)) {
      fail(where, "missing");
      return lo;
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) {
      fail(where, "must be a number");
      return lo;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x) || x < lo || x > hi || (open_lo && x == lo)) {
      std::ostringstream os;
      os << "must lie in " << (open_lo ? "(" : "[") << lo << ", " << hi << "]";
      fail(where, os.str());
      return lo;
    }
    return x;
  }

  std::int64_t integer(const json& obj, const std::string& path, const std::string& key, std::int64_t lo, std::int64_t hi) {
    const std::string where = path + "." + key;
    if (!obj.contains(key)) {
      fail(where, "missing");
      return lo;
    }
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < lo || v.get<std::int64_t>() > hi) {
      fail(where, "must be an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      return lo;
    }
    return v.get<std::int64_t>();
  }

  bool boolean(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key) || !obj.at(key).is_boolean()) {
      fail(path + "." + key, "must be true or false");
      return false;
    }
    return obj.at(key).get<bool>();
  }

  std::vector<double> reals(const json& obj, const std::string& path, const std::string& key, double lo, double hi) {
    const std::string where = path + "." + key;
    if (!obj.contains(key) || !obj.at(key).is_array() || obj.at(key).empty()) {
      fail(where, "must be a non-empty array of numbers");
      return {};
    }
    std::vector<double> out;
    for (const auto& v : obj.at(key)) {
      if (!v.is_number() || v.get<double>() < lo || v.get<double>() > hi) {
        std::ostringstream os;
        os << "entries must be numbers in [" << lo << ", " << hi << "]";
        fail(where, os.str());
        return {};
      }
      out.push_back(v.get<double>());
    }
    return out;
  }

  bool ok() const { return errors_.empty(); }

 private:
  std::vector<std::string>& errors_;
};

json uniform_grid(double a, double b, int n) { return {{"kind", "uniform"}, {"a", a}, {"b", b}, {"n", n}}; }
json log_holder(double p_inf = 2.0, double c = 1.0) { return {{"kind", "log-holder"}, {"p_inf", p_inf}, {"c", c}}; }

json defaults(const std::string& id, json grid, json exponent, json params, std::size_t budget) {
  return {{"experiment", id}, {"seed", 1}, {"grid", std::move(grid)}, {"exponent", std::move(exponent)},
          {"params", std::move(params)}, {"budget", budget}};
}

const ExperimentInfo* find_experiment(const std::string& id) {
  for (const auto& e : experiment_registry())
    if (e.id == id) return &e;
  return nullptr;
}

// Table helpers: every experiment uses group / statistic / value / witness / samples.

ResultTable make_table(const ExperimentConfig& cfg) {
  ResultTable t({"group", "statistic", "value", "witness", "samples"});
  t.provenance = {{"config", to_json(cfg)}, {"version", kVersion}, {"seed", cfg.seed}};
  return t;
}

void add_value(ResultTable& t, const std::string& group, const std::string& stat, double v, const std::string& witness,
               std::size_t samples) {
  t.add_row({group, stat, v, witness, static_cast<std::int64_t>(samples)});
}

void add_probe(ResultTable& t, const std::string& group, const ProbeReport& r) {
  const std::string stat = r.kind == ProbeKind::sup ? "sup" : "inf";
  if (r.witnesses.empty()) {
    add_value(t, group, stat, r.kind == ProbeKind::sup ? -kInf : kInf, "none", r.samples);
    return;
  }
  const auto& w = r.witnesses.front();
  add_value(t, group, stat, r.estimate, "sample " + std::to_string(w.sample) + ": " + w.id, r.samples);
}

void add_bracket(ResultTable& t, const std::string& group, const Bracket& b) {
  add_probe(t, group, b.low);
  add_probe(t, group, b.high);
  const bool high_wins = b.high.estimate >= 1.0 / b.low.estimate;
  const auto& r = high_wins ? b.high : b.low;
  const std::string w = r.witnesses.empty() ? "none" : "sample " + std::to_string(r.witnesses.front().sample);
  add_value(t, group, "constant", bracket_constant(b), w, b.high.samples);
}

double ratio_or_one(double num, double den) {
  if (num == 0.0 && den == 0.0) return 1.0;
  if (den == 0.0) return kInf;
  return num / den;
}

template <class Fn>
Bracket sampled_bracket(std::size_t budget, std::uint64_t seed, Fn&& sample) {
  if (budget < 1) throw InvalidArgument("budget must be at least 1");
  std::vector<double> vals(budget);
  std::vector<std::string> ids(budget);
  const auto m = static_cast<std::ptrdiff_t>(budget);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < m; ++k) vals[static_cast<std::size_t>(k)] = sample(static_cast<std::size_t>(k), ids[static_cast<std::size_t>(k)]);
  return {reduce_probe(ProbeKind::inf, vals, ids, seed, budget), reduce_probe(ProbeKind::sup, vals, ids, seed, budget)};
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> fields)
    : std::runtime_error("invalid config: " + join(fields)), fields_(std::move(fields)) {}

const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> reg = {
      {"thm12-ratio", "norm of sum t_Q chi_Q against the cube-exponent sequence norm over random local partitions",
       defaults("thm12-ratio", uniform_grid(-32, 32, 256), log_holder(), {{"dual", false}, {"t_min", 1e-3}, {"t_max", 1e3}}, 100)},
      {"local-global", "global norm against the l^{p_inf} sum of norms on unit cubes",
       defaults("local-global", uniform_grid(-32, 32, 256), log_holder(), {{"p_inf", 2.0}, {"side", 1.0}, {"step", 0.5}}, 100)},
      {"lerner-scan", "averaging-operator probes on the Lerner exponent, global and local partitions, by intervals reached",
       defaults("lerner-scan", {{"kind", "lerner"}, {"k_max", 3}}, {{"kind", "lerner"}, {"alpha", 2.0}, {"beta", 1.0}},
                {{"alpha", 2.0}, {"betas", {1.0, 0.85, 0.7, 0.55}}, {"local_budget", 300}}, 2000)},
      {"sf-equiv", "bracket of ||S f|| / ||f|| for the Littlewood-Paley square function",
       defaults("sf-equiv", uniform_grid(-8, 8, 8192), log_holder(), {{"J", 8}, {"strict", false}, {"radius", 1.0}}, 20)},
      {"fs-vector", "vector-valued local maximal inequality bracket",
       defaults("fs-vector", uniform_grid(-8, 8, 256), log_holder(), {{"r", 2.0}, {"members", 3}, {"step", 0.5}}, 50)},
      {"apx-report", "A_p(.) constant over all cubes and over local cubes",
       defaults("apx-report", uniform_grid(-4, 4, 64), log_holder(), json::object(), 1 << 20)},
      {"shift-dyadic", "local maximal function against the average of shifted dyadic maximal functions",
       defaults("shift-dyadic", uniform_grid(-8, 8, 256), log_holder(), {{"q", 1.0}, {"shifts", 33}, {"step", 0.5}, {"zero_fraction", 0.0}}, 100)},
      {"nfun-checks", "N-function conjugate inequalities and alpha_s brackets",
       defaults("nfun-checks", uniform_grid(-8, 8, 64), log_holder(), {{"cells", 16}, {"p_min", 1.1}, {"p_max", 5.0}, {"s", {1.0, 2.0}}},
                10000)},
      {"domination", "empirical domination constant of the phi* sums by the phi sums",
       defaults("domination", uniform_grid(-4, 4, 32), log_holder(), {{"s", 1.0}, {"local", true}, {"a1", 1.0}}, 50)},
      {"ainfty", "A_infinity probe: norm of the restriction to large subsets",
       defaults("ainfty", uniform_grid(-4, 4, 32), log_holder(), {{"eps", 0.5}}, 100)},
  };
  return reg;
}

// ---------------------------------------------------------------------------

namespace {

void check_grid(const json& g, Checker& ck) {
  if (!g.is_object() || !g.contains("kind") || !g.at("kind").is_string()) {
    ck.fail("grid.kind", "must be one of uniform, uniform2d, lerner, edges");
    return;
  }
  const auto kind = g.at("kind").get<std::string>();
  if (kind == "uniform") {
    const double a = ck.real(g, "grid", "a", -1e12, 1e12), b = ck.real(g, "grid", "b", -1e12, 1e12);
    ck.integer(g, "grid", "n", 1, 1 << 22);
    if (!(a < b)) ck.fail("grid.b", "must exceed grid.a");
  } else if (kind == "uniform2d") {
    for (const char* k : {"ax", "bx", "ay", "by"}) ck.real(g, "grid", k, -1e12, 1e12);
    ck.integer(g, "grid", "nx", 1, 4096);
    ck.integer(g, "grid", "ny", 1, 4096);
  } else if (kind == "lerner") {
    ck.integer(g, "grid", "k_max", 1, 3);
  } else if (kind == "edges") {
    const auto e = ck.reals(g, "grid", "edges", -1e300, 1e300);
    if (e.size() == 1) ck.fail("grid.edges", "needs at least two entries");
    if (!std::is_sorted(e.begin(), e.end(), std::less_equal<>()) && !e.empty()) ck.fail("grid.edges", "must be strictly increasing");
  } else {
    ck.fail("grid.kind", "must be one of uniform, uniform2d, lerner, edges");
  }
}

void check_exponent(const json& e, Checker& ck) {
  if (!e.is_object() || !e.contains("kind") || !e.at("kind").is_string()) {
    ck.fail("exponent.kind", "must be one of constant, log-holder, lerner, ac");
    return;
  }
  const auto kind = e.at("kind").get<std::string>();
  if (kind == "constant") {
    ck.real(e, "exponent", "q", 1.0, 1e3, true);
  } else if (kind == "log-holder") {
    ck.real(e, "exponent", "p_inf", 1.0, 1e3, true);
    ck.real(e, "exponent", "c", 0.0, 1e3);
  } else if (kind == "lerner") {
    ck.real(e, "exponent", "alpha", 1.0, 1e3, true);
    ck.real(e, "exponent", "beta", 0.0, 1e3, true);
  } else if (kind == "ac") {
    ck.real(e, "exponent", "base", 1.0, 1e3, true);
    ck.reals(e, "exponent", "density", 0.0, 1e6);
  } else {
    ck.fail("exponent.kind", "must be one of constant, log-holder, lerner, ac");
  }
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  std::vector<std::string> errors;
  Checker ck(errors);
  if (!doc.is_object()) throw ConfigError({"config: must be a JSON object"});
  static const std::vector<std::string> known = {"experiment", "seed", "grid", "exponent", "params", "budget", "out"};
  for (const auto& [key, value] : doc.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) ck.fail(key, "unknown field");

  ExperimentConfig cfg;
  const ExperimentInfo* info = nullptr;
  if (!doc.contains("experiment") || !doc.at("experiment").is_string()) {
    ck.fail("experiment", "missing");
  } else {
    cfg.experiment = doc.at("experiment").get<std::string>();
    info = find_experiment(cfg.experiment);
    if (!info) ck.fail("experiment", "unknown id '" + cfg.experiment + "'");
  }
  // signed and unsigned JSON integers are both accepted when non-negative
  auto non_negative = [](const json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0); };
  if (doc.contains("seed")) {
    if (!non_negative(doc.at("seed"))) ck.fail("seed", "must be a non-negative integer");
    else cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("budget")) {
    const auto& b = doc.at("budget");
    if (!non_negative(b) || b.get<std::uint64_t>() < 1 || b.get<std::uint64_t>() > (std::uint64_t{1} << 26))
      ck.fail("budget", "must be an integer in [1, 2^26]");
    else cfg.budget = b.get<std::size_t>();
  } else if (info) {
    cfg.budget = info->defaults.at("budget").get<std::size_t>();
  }
  if (doc.contains("out")) {
    if (!doc.at("out").is_string()) ck.fail("out", "must be a path string");
    else cfg.out = doc.at("out").get<std::string>();
  }
  if (!info) throw ConfigError(errors);

  cfg.grid = doc.value("grid", info->defaults.at("grid"));
  cfg.exponent = doc.value("exponent", info->defaults.at("exponent"));
  cfg.params = info->defaults.at("params");
  if (doc.contains("params")) {
    if (!doc.at("params").is_object()) {
      ck.fail("params", "must be an object");
    } else {
      for (const auto& [key, value] : doc.at("params").items()) {
        if (!cfg.params.contains(key)) {
          ck.fail("params." + key, "unknown parameter for " + cfg.experiment);
          continue;
        }
        const auto& d = cfg.params.at(key);
        const bool same = (d.is_number() && value.is_number()) || (d.is_boolean() && value.is_boolean()) ||
                          (d.is_array() && value.is_array()) || (d.is_string() && value.is_string());
        if (!same) ck.fail("params." + key, std::string("must be a ") + d.type_name());
        else cfg.params[key] = value;
      }
    }
  }
  check_grid(cfg.grid, ck);
  check_exponent(cfg.exponent, ck);
  if (ck.ok()) {
    try {
      const auto g = grid_from_json(cfg.grid);
      exponent_from_json(g, cfg.exponent);
    } catch (const InvalidArgument& e) {
      ck.fail("grid/exponent", e.what());
    }
  }
  if (!ck.ok()) throw ConfigError(errors);
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  json j = {{"experiment", cfg.experiment}, {"seed", cfg.seed},     {"grid", cfg.grid},
            {"exponent", cfg.exponent},     {"params", cfg.params}, {"budget", cfg.budget}};
  if (!cfg.out.empty()) j["out"] = cfg.out;
  return j;
}

GridPtr grid_from_json(const json& g) {
  const auto kind = g.at("kind").get<std::string>();
  if (kind == "uniform") return share(Grid::uniform(g.at("a").get<double>(), g.at("b").get<double>(), g.at("n").get<std::size_t>()));
  if (kind == "uniform2d")
    return share(Grid::uniform2d(g.at("ax").get<double>(), g.at("bx").get<double>(), g.at("nx").get<std::size_t>(),
                                 g.at("ay").get<double>(), g.at("by").get<double>(), g.at("ny").get<std::size_t>()));
  if (kind == "lerner") return share(lerner_grid(g.value("k_max", 3)));
  if (kind == "edges") return share(Grid::make(1, {g.at("edges").get<std::vector<double>>()}));
  throw InvalidArgument("unknown grid kind " + kind);
}

Exponent exponent_from_json(GridPtr grid, const json& e) {
  const auto kind = e.at("kind").get<std::string>();
  if (kind == "constant") return build_exponent(std::move(grid), ConstantExponent{e.at("q").get<double>()});
  if (kind == "log-holder")
    return build_exponent(std::move(grid), LogHolderExponent{e.at("p_inf").get<double>(), e.at("c").get<double>()});
  if (kind == "lerner")
    return build_exponent(std::move(grid), LernerExponent{e.at("alpha").get<double>(), e.at("beta").get<double>(), e.value("k_max", 3)});
  if (kind == "ac") {
    GridFunction density(grid, e.at("density").get<std::vector<double>>());
    return build_exponent(std::move(grid), AcExponent{e.at("base").get<double>(), std::move(density)});
  }
  throw InvalidArgument("unknown exponent kind " + kind);
}

// ---------------------------------------------------------------------------

GridFunction lattice_step_function(GridPtr grid, double step, std::uint64_t seed, std::size_t i, double zero_fraction) {
  if (!(step > 0.0)) throw InvalidArgument("step must be positive");
  if (!(zero_fraction >= 0.0 && zero_fraction <= 1.0)) throw InvalidArgument("zero fraction must lie in [0, 1]");
  const Grid& g = *grid;
  std::array<std::size_t, 2> n{1, 1};
  for (int a = 0; a < g.dim(); ++a) n[a] = static_cast<std::size_t>(std::ceil((g.upper(a) - g.lower(a)) / step - 1e-9));
  Rng rng = Rng::stream(seed, i);
  std::vector<double> lattice(n[0] * n[1]);
  for (auto& v : lattice) v = rng.coin(zero_fraction) ? 0.0 : rng.log_uniform(0.05, 5.0);
  return GridFunction::sample(grid, [&](const std::array<double, 2>& x) {
    std::array<std::size_t, 2> k{0, 0};
    for (int a = 0; a < g.dim(); ++a)
      k[a] = std::min(n[a] - 1, static_cast<std::size_t>(std::floor((x[a] - g.lower(a)) / step)));
    return lattice[k[0] + n[0] * k[1]];
  });
}

Bracket fs_vector_bracket(const Exponent& p, double r, std::size_t members, double step, std::size_t budget,
                          std::uint64_t seed) {
  if (!(r > 1.0)) throw InvalidArgument("r must exceed 1");
  if (members < 1) throw InvalidArgument("members must be at least 1");
  const MaximalSpec spec{true, 1.0, AllCubes{}};
  return sampled_bracket(budget, seed, [&](std::size_t i, std::string& id) {
    std::vector<GridFunction> fs;
    for (std::size_t j = 0; j < members; ++j) fs.push_back(lattice_step_function(p.grid_ptr(), step, seed, i * members + j));
    const GridFunction num = vector_maximal(fs, r, spec);
    std::vector<double> den(p.size(), 0.0);
    for (const auto& f : fs)
      for (std::size_t c = 0; c < den.size(); ++c) den[c] += std::pow(std::abs(f[c]), r);
    for (auto& d : den) d = std::pow(d, 1.0 / r);
    id = "family of " + std::to_string(members);
    return ratio_or_one(luxemburg_norm(num, p), luxemburg_norm(GridFunction(p.grid_ptr(), std::move(den)), p));
  });
}

ProbeReport shift_dyadic_constant(GridPtr grid, double q, std::size_t shifts, double step, double zero_fraction,
                                  std::size_t budget, std::uint64_t seed) {
  if (budget < 1) throw InvalidArgument("budget must be at least 1");
  const auto lattice = shift_lattice(grid->dim(), shifts);
  std::vector<double> vals(budget);
  std::vector<std::string> ids(budget);
  const auto m = static_cast<std::ptrdiff_t>(budget);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const GridFunction f = lattice_step_function(grid, step, seed, i, zero_fraction);
    const GridFunction mf = maximal(f, MaximalSpec{true, q, AllCubes{}});
    const GridFunction avg = shifted_dyadic_average_bound(f, q, lattice);
    double worst = 0.0;
    std::size_t at = 0;
    for (std::size_t c = 0; c < f.size(); ++c) {
      if (mf[c] == 0.0) continue;
      const double r = avg[c] > 0.0 ? mf[c] / avg[c] : kInf;
      if (r > worst) {
        worst = r;
        at = c;
      }
    }
    vals[i] = worst;
    const auto x = grid->midpoint(at);
    std::ostringstream os;
    os << "cell " << at << " at x=" << x[0];
    ids[i] = os.str();
  }
  return reduce_probe(ProbeKind::sup, vals, ids, seed, budget);
}

Bracket partition_ratio_bracket(const Exponent& p, std::size_t budget, std::uint64_t seed, double t_min, double t_max) {
  if (!(t_min > 0.0 && t_min <= t_max)) throw InvalidArgument("need 0 < t_min <= t_max");
  return sampled_bracket(budget, seed, [&](std::size_t i, std::string& id) {
    const Partition part = make_partition(p.grid(), RandomLocal{Rng::stream(seed, 2 * i).next()});
    Rng rng = Rng::stream(seed, 2 * i + 1);
    std::vector<double> t(part.cubes.size());
    for (auto& v : t) v = rng.log_uniform(t_min, t_max);
    id = "local partition of " + std::to_string(part.cubes.size()) + " cubes";
    return estimate_ratio(t, part, p).ratio;
  });
}

Bracket local_global_bracket(const Exponent& p, double p_inf, double side, double step, std::size_t budget,
                             std::uint64_t seed) {
  return sampled_bracket(budget, seed, [&](std::size_t i, std::string& id) {
    id = "lattice step function";
    return local_to_global_ratio(lattice_step_function(p.grid_ptr(), step, seed, i), p, p_inf, side).ratio;
  });
}

double bracket_constant(const Bracket& b) { return std::max(b.high.estimate, 1.0 / b.low.estimate); }

// ---------------------------------------------------------------------------

namespace {

// ((1/|Q|) sum_c vol_c g_c^s)^{1/s} for g_c >= 0 given by log values.
double s_mean_logs(const std::vector<double>& logs, const std::vector<double>& vols, double s) {
  double m = -kInf;
  for (double l : logs) m = std::max(m, s * l);
  if (m == -kInf) return 0.0;
  double acc = 0.0, tot = 0.0;
  for (std::size_t c = 0; c < logs.size(); ++c) {
    tot += vols[c];
    if (logs[c] != -kInf) acc += vols[c] * std::exp(s * logs[c] - m);
  }
  const double l = (m + std::log(acc / tot)) / s;
  return l > kLogSaturation ? kOverflow : std::exp(l);
}

}  // namespace

std::vector<InequalityCheck> nfun_inequalities(const NfunOptions& opt, std::size_t budget, std::uint64_t seed) {
  if (budget < 1) throw InvalidArgument("budget must be at least 1");
  if (!(opt.p_min > 1.0 && opt.p_min <= opt.p_max) || !(opt.s_max >= 1.0) || opt.cells < 1)
    throw InvalidArgument("invalid inequality sampling options");
  const GridPtr grid = share(Grid::uniform(0.0, 4.0, opt.cells));
  constexpr double tol = 1e-6;
  struct Sample {
    double ratio[3];
    int status[3];  // 0 pass, 1 violation, 2 skipped
    std::string id;
  };
  std::vector<Sample> out(budget);
  const auto m = static_cast<std::ptrdiff_t>(budget);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    const auto i = static_cast<std::size_t>(k);
    Rng rng = Rng::stream(seed, i);
    std::vector<double> pv(opt.cells);
    for (auto& v : pv) v = rng.uniform(opt.p_min, opt.p_max);
    const Exponent p = Exponent::from_samples(GridFunction(grid, pv));
    const std::size_t lo = rng.index(opt.cells);
    const std::size_t hi = lo + 1 + rng.index(opt.cells - lo);
    const Cube q = make_interval(*grid, lo, hi);
    const double s = rng.uniform(1.0, opt.s_max);
    const double t = rng.log_uniform(1e-3, 1e3);
    const auto prof = cube_profile(p, q);
    const NFunctionTable star = msq_table(prof, s, NKind::phi_star, opt.table);
    Sample& smp = out[i];
    std::ostringstream os;
    os << describe(q) << " s=" << s << " t=" << t;
    smp.id = os.str();

    // half-mean
    {
      const auto lhs = conjugate_at(star, 0.5 * t);
      const double rhs = msq(prof, s, t, NKind::phi);
      smp.ratio[0] = lhs.value / rhs;
      smp.status[0] = !lhs.valid ? 2 : lhs.value > (1.0 + tol) * rhs ? 1 : 0;
    }
    std::vector<double> vols, logs_f, logs_phi;
    for (std::size_t c = lo; c < hi; ++c) vols.push_back(grid->volume(c));
    // step-mean on a random step function
    {
      double mean = 0.0, tot = 0.0;
      logs_phi.clear();
      for (std::size_t c = lo; c < hi; ++c) {
        const double f = rng.coin(0.2) ? 0.0 : rng.log_uniform(1e-2, 1e2);
        mean += f * grid->volume(c);
        tot += grid->volume(c);
        logs_phi.push_back(f == 0.0 ? -kInf : p[c] * std::log(f));
      }
      mean /= tot;
      const double rhs = s_mean_logs(logs_phi, vols, s);
      if (mean == 0.0) {
        smp.ratio[1] = 0.0;
        smp.status[1] = 0;
      } else {
        const auto lhs = conjugate_at(star, 0.5 * mean);
        smp.ratio[1] = lhs.value / rhs;
        smp.status[1] = !lhs.valid ? 2 : lhs.value > (1.0 + tol) * rhs ? 1 : 0;
      }
    }
    // dual-level with f_t = phi*(t) / t
    {
      logs_f.clear();
      logs_phi.clear();
      for (std::size_t c = lo; c < hi; ++c) {
        const double lf = std::log(phi_star_eval(p[c], t)) - std::log(t);
        logs_f.push_back(lf);
        logs_phi.push_back(p[c] * lf);
      }
      const double arg = 2.0 * s_mean_logs(logs_f, vols, s);
      const double rhs = s_mean_logs(logs_phi, vols, s);
      const auto lhs = conjugate_at(star, arg);
      smp.ratio[2] = rhs / lhs.value;
      // a boundary maximizer only underestimates the left side, so a pass still counts
      const bool fails = lhs.value < (1.0 - tol) * rhs;
      smp.status[2] = fails ? (lhs.valid ? 1 : 2) : 0;
    }
  }
  std::vector<InequalityCheck> res(3);
  res[0].name = "half-mean";
  res[1].name = "step-mean";
  res[2].name = "dual-level";
  for (std::size_t j = 0; j < 3; ++j) {
    auto& r = res[j];
    r.samples = budget;
    r.worst = -kInf;
    for (std::size_t i = 0; i < budget; ++i) {
      const auto& smp = out[i];
      if (smp.status[j] == 1) ++r.violations;
      if (smp.status[j] == 2) {
        ++r.skipped;
        continue;
      }
      if (smp.ratio[j] > r.worst) {
        r.worst = smp.ratio[j];
        r.witness = "sample " + std::to_string(i) + ": " + smp.id;
      }
    }
  }
  return res;
}

double double_conjugate_error(double q, double s, const TableSpec& table) {
  const CubeExponentProfile prof{{q}, {1.0}};
  const NFunctionTable star = msq_table(prof, s, NKind::phi_star, table);
  double worst = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double t = std::pow(10.0, -2.0 + k / 100.0);
    const auto v = conjugate_at(star, t);
    if (!v.valid) return kInf;
    worst = std::max(worst, std::abs(v.value - std::pow(t, q)) / std::pow(t, q));
  }
  return worst;
}

Bracket alpha_bracket(const Exponent& p, double s, bool at_norm, const TableSpec& table) {
  const auto cubes = enum_cubes(p.grid(), 1.0, std::numeric_limits<std::size_t>::max(), 0);
  std::vector<double> vals(cubes.size());
  std::vector<std::string> ids(cubes.size());
  const auto m = static_cast<std::ptrdiff_t>(cubes.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double t = at_norm ? 1.0 / indicator_norm(p, cubes[i]) : 1.0;
    const auto a = alpha_s(p, cubes[i], s, t, table);
    vals[i] = a.value;
    ids[i] = describe(cubes[i]) + (a.valid ? "" : " (table boundary)");
  }
  return {reduce_probe(ProbeKind::inf, vals, ids, 0, cubes.size()), reduce_probe(ProbeKind::sup, vals, ids, 0, cubes.size())};
}

// ---------------------------------------------------------------------------

namespace {

double num_param(const ExperimentConfig& cfg, const std::string& key, double lo, double hi, bool open_lo = false) {
  std::vector<std::string> errors;
  Checker ck(errors);
  const double v = ck.real(cfg.params, "params", key, lo, hi, open_lo);
  if (!errors.empty()) throw ConfigError(errors);
  return v;
}

std::int64_t int_param(const ExperimentConfig& cfg, const std::string& key, std::int64_t lo, std::int64_t hi) {
  std::vector<std::string> errors;
  Checker ck(errors);
  const auto v = ck.integer(cfg.params, "params", key, lo, hi);
  if (!errors.empty()) throw ConfigError(errors);
  return v;
}

std::vector<double> list_param(const ExperimentConfig& cfg, const std::string& key, double lo, double hi) {
  std::vector<std::string> errors;
  Checker ck(errors);
  auto v = ck.reals(cfg.params, "params", key, lo, hi);
  if (!errors.empty()) throw ConfigError(errors);
  return v;
}

void require_1d(const Grid& g, const std::string& id) {
  if (g.dim() != 1) throw ConfigError({"grid.kind: " + id + " needs a one-dimensional grid"});
}

ResultTable run_thm12(const ExperimentConfig& cfg, const Exponent& p) {
  const bool dual = cfg.params.at("dual").get<bool>();
  const double t_min = num_param(cfg, "t_min", 0.0, 1e12, true), t_max = num_param(cfg, "t_max", t_min, 1e12);
  const Exponent q = dual ? conjugate_exponent(p) : p;
  ResultTable t = make_table(cfg);
  add_bracket(t, dual ? "dual exponent" : "exponent", partition_ratio_bracket(q, cfg.budget, cfg.seed, t_min, t_max));
  return t;
}

ResultTable run_local_global(const ExperimentConfig& cfg, const Exponent& p) {
  const double p_inf = num_param(cfg, "p_inf", 1.0, 1e3, true);
  const double side = num_param(cfg, "side", 0.0, 1e12, true);
  const double step = num_param(cfg, "step", 0.0, 1e12, true);
  ResultTable t = make_table(cfg);
  add_bracket(t, "side " + format_real(side), local_global_bracket(p, p_inf, side, step, cfg.budget, cfg.seed));
  return t;
}

ResultTable run_lerner_scan(const ExperimentConfig& cfg, const GridPtr& grid) {
  require_1d(*grid, cfg.experiment);
  const double alpha = num_param(cfg, "alpha", 1.0, 1e3, true);
  const auto betas = list_param(cfg, "betas", 1e-6, 1e3);
  const auto local_budget = static_cast<std::size_t>(int_param(cfg, "local_budget", 1, 1 << 24));
  const int k_max = cfg.exponent.value("k_max", 3);
  std::vector<std::pair<double, double>> intervals;
  for (int k = 1; k <= k_max; ++k) intervals.push_back(lerner_interval(k));
  ResultTable t = make_table(cfg);
  for (double beta : betas) {
    const Exponent p = lerner_exponent(grid, alpha, beta, k_max);
    const std::string b = "beta=" + format_real(beta);
    const auto global = span_probe(p, false, intervals, cfg.budget, cfg.seed);
    const auto local = span_probe(p, true, intervals, local_budget, cfg.seed);
    for (std::size_t K = 0; K < global.cumulative.size(); ++K) {
      add_probe(t, b + " global K<=" + std::to_string(K), global.cumulative[K]);
      add_probe(t, b + " local K<=" + std::to_string(K), local.cumulative[K]);
    }
  }
  return t;
}

ResultTable run_sf_equiv(const ExperimentConfig& cfg, const Exponent& p) {
  require_1d(p.grid(), cfg.experiment);
  const int J = static_cast<int>(int_param(cfg, "J", 0, 30));
  const double radius = num_param(cfg, "radius", 0.0, 1e6, true);
  const bool strict = cfg.params.at("strict").get<bool>();
  const FilterBank fb = [&] {
    try {
      return build_filterbank(p.grid(), J, BumpSpec{radius}, strict);
    } catch (const InvalidArgument& e) {
      throw ConfigError({std::string("params.J: ") + e.what()});
    }
  }();
  const auto br = sf_equivalence(p, fb, cfg.budget, cfg.seed);
  ResultTable t = make_table(cfg);
  add_probe(t, "J=" + std::to_string(J), br.low);
  add_probe(t, "J=" + std::to_string(J), br.high);
  return t;
}

ResultTable run_fs_vector(const ExperimentConfig& cfg, const Exponent& p) {
  const double r = num_param(cfg, "r", 1.0, 1e3, true);
  const auto members = static_cast<std::size_t>(int_param(cfg, "members", 1, 1024));
  const double step = num_param(cfg, "step", 0.0, 1e12, true);
  ResultTable t = make_table(cfg);
  add_bracket(t, "r=" + format_real(r), fs_vector_bracket(p, r, members, step, cfg.budget, cfg.seed));
  return t;
}

ResultTable run_apx(const ExperimentConfig& cfg, const Exponent& p) {
  ResultTable t = make_table(cfg);
  add_probe(t, "all cubes", apx_constant(p, false, cfg.budget, cfg.seed));
  add_probe(t, "local cubes", apx_constant(p, true, cfg.budget, cfg.seed));
  return t;
}

ResultTable run_shift_dyadic(const ExperimentConfig& cfg, const GridPtr& grid) {
  const double q = num_param(cfg, "q", 1.0, 1e3);
  const auto shifts = static_cast<std::size_t>(int_param(cfg, "shifts", 1, 4097));
  const double step = num_param(cfg, "step", 0.0, 1e12, true);
  const double zf = num_param(cfg, "zero_fraction", 0.0, 1.0);
  ResultTable t = make_table(cfg);
  add_probe(t, std::to_string(shifts) + " shifts", shift_dyadic_constant(grid, q, shifts, step, zf, cfg.budget, cfg.seed));
  return t;
}

ResultTable run_nfun(const ExperimentConfig& cfg, const Exponent& p) {
  NfunOptions opt;
  opt.cells = static_cast<std::size_t>(int_param(cfg, "cells", 1, 4096));
  opt.p_min = num_param(cfg, "p_min", 1.0, 1e3, true);
  opt.p_max = num_param(cfg, "p_max", opt.p_min, 1e3);
  const auto svals = list_param(cfg, "s", 1.0, 1e3);
  ResultTable t = make_table(cfg);
  for (const auto& c : nfun_inequalities(opt, cfg.budget, cfg.seed)) {
    add_value(t, c.name, "violations", static_cast<double>(c.violations), c.witness, c.samples);
    add_value(t, c.name, "skipped", static_cast<double>(c.skipped), "none", c.samples);
    add_value(t, c.name, "sup ratio", c.worst, c.witness, c.samples - c.skipped);
  }
  for (double s : svals) {
    const std::string g = "s=" + format_real(s);
    add_value(t, g + " double conjugate", "max rel error", double_conjugate_error(2.0, s), "q=2", 401);
    const auto a1 = alpha_bracket(p, s, false);
    const auto an = alpha_bracket(p, s, true);
    add_probe(t, g + " alpha(Q,1)", a1.low);
    add_probe(t, g + " alpha(Q,1)", a1.high);
    add_probe(t, g + " alpha(Q,1/|chi_Q|)", an.low);
    add_probe(t, g + " alpha(Q,1/|chi_Q|)", an.high);
  }
  return t;
}

ResultTable run_domination(const ExperimentConfig& cfg, const Exponent& p) {
  DominationOptions opt;
  opt.s = num_param(cfg, "s", 1.0, 1e3);
  opt.local = cfg.params.at("local").get<bool>();
  opt.a1 = num_param(cfg, "a1", 0.0, 1e12, true);
  const auto rep = domination_probe(p, opt, cfg.budget, cfg.seed);
  ResultTable t = make_table(cfg);
  add_probe(t, "A1=" + format_real(opt.a1), rep.report);
  add_value(t, "A1=" + format_real(opt.a1), "unattainable", static_cast<double>(rep.unattainable), "none", cfg.budget);
  return t;
}

ResultTable run_ainfty(const ExperimentConfig& cfg, const Exponent& p) {
  const double eps = num_param(cfg, "eps", 0.0, 1.0, true);
  ResultTable t = make_table(cfg);
  add_probe(t, "eps=" + format_real(eps), ainfty_probe(p, eps, cfg.budget, cfg.seed));
  return t;
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& cfg) {
  const GridPtr grid = grid_from_json(cfg.grid);
  const std::string& id = cfg.experiment;
  if (id == "lerner-scan") return run_lerner_scan(cfg, grid);
  if (id == "shift-dyadic") return run_shift_dyadic(cfg, grid);
  const Exponent p = exponent_from_json(grid, cfg.exponent);
  if (id == "thm12-ratio") return run_thm12(cfg, p);
  if (id == "local-global") return run_local_global(cfg, p);
  if (id == "sf-equiv") return run_sf_equiv(cfg, p);
  if (id == "fs-vector") return run_fs_vector(cfg, p);
  if (id == "apx-report") return run_apx(cfg, p);
  if (id == "nfun-checks") return run_nfun(cfg, p);
  if (id == "domination") return run_domination(cfg, p);
  if (id == "ainfty") return run_ainfty(cfg, p);
  throw ConfigError({"experiment: unknown id '" + id + "'"});
}

}  // namespace vlp

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vlp/conditions.hpp"
#include "vlp/exponent.hpp"
#include "vlp/grid.hpp"
#include "vlp/result_table.hpp"

namespace vlp {

/// Invalid configuration; `fields` names every offending entry.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> fields);
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  std::vector<std::string> fields_;
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  nlohmann::json grid;
  nlohmann::json exponent;
  nlohmann::json params = nlohmann::json::object();
  std::size_t budget = 100;
  std::string out;
};

struct ExperimentInfo {
  std::string id;
  std::string description;
  /// Example config used by `list` and by the defaults of each subcommand.
  nlohmann::json defaults;
};

const std::vector<ExperimentInfo>& experiment_registry();

/**
 * Parses and validates a config document. Missing grid, exponent or
 * params fall back to the experiment's defaults. Throws ConfigError
 * listing all problems at once.
 */
ExperimentConfig parse_config(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Grid spec: {"kind": "uniform"|"uniform2d"|"lerner"|"edges", ...}.
GridPtr grid_from_json(const nlohmann::json& spec);
/// Exponent spec: {"kind": "constant"|"log-holder"|"lerner"|"ac", ...}.
Exponent exponent_from_json(GridPtr grid, const nlohmann::json& spec);

/// Deterministic for a fixed config; throws ConfigError for bad params.
ResultTable run_experiment(const ExperimentConfig& cfg);

/**
 * Step function with values drawn on a fixed lattice of width `step`
 * anchored at the grid's lower edge, sampled at cell midpoints, so the
 * same (seed, i) gives the same continuum function at every resolution.
 * Each step is zero with probability `zero_fraction`, otherwise
 * log-uniform in [0.05, 5].
 */
GridFunction lattice_step_function(GridPtr grid, double step, std::uint64_t seed, std::size_t i, double zero_fraction = 0.25);

struct Bracket {
  ProbeReport low;
  ProbeReport high;
};

/**
 * ||(sum_j (M^loc_q' f_j)^r)^{1/r}||_p / ||(sum_j |f_j|^r)^{1/r}||_p over
 * `budget` families of `members` lattice step functions.
 */
Bracket fs_vector_bracket(const Exponent& p, double r, std::size_t members, double step, std::size_t budget,
                          std::uint64_t seed);

/**
 * Largest cellwise ratio M_q^loc f / (shift average of the dyadic local
 * maximal functions) over `budget` lattice step functions. Cells where
 * both vanish are skipped; a positive numerator over a zero average is +inf,
 * which happens near zero runs the shift lattice cannot resolve.
 */
ProbeReport shift_dyadic_constant(GridPtr grid, double q, std::size_t shifts, double step, double zero_fraction,
                                  std::size_t budget, std::uint64_t seed);

/// estimate_ratio over random local partitions with log-uniform t_Q in [t_min, t_max].
Bracket partition_ratio_bracket(const Exponent& p, std::size_t budget, std::uint64_t seed, double t_min = 1e-3,
                                double t_max = 1e3);

/// local_to_global_ratio over lattice step functions.
Bracket local_global_bracket(const Exponent& p, double p_inf, double side, double step, std::size_t budget,
                             std::uint64_t seed);

/// max(sup, 1 / inf) of a ratio bracket.
double bracket_constant(const Bracket& b);

/// Outcome of one sampled inequality; `worst` is the largest lhs / rhs seen.
struct InequalityCheck {
  std::string name;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;  // table maximizer on the boundary
  double worst = 0.0;
  std::string witness;
};

struct NfunOptions {
  std::size_t cells = 16;
  double p_min = 1.1;
  double p_max = 5.0;
  double s_max = 4.0;
  TableSpec table{1e-16, 1e16, 32};
};

/**
 * Sampled checks on random exponents over random cubes:
 *   half-mean:  (M_{s,Q phi*})^*(t/2) <= M_{s,Q phi}(t)
 *   step-mean:  (M_{s,Q phi*})^*(mean|f| / 2) <= M_{s,Q}(phi(f)), f a random step on Q
 *   dual-level: (M_{s,Q phi*})^*(2 M_{s,Q} f_t) >= M_{s,Q}(phi(f_t)), f_t = phi*(t) / t on Q
 * with relative tolerance 1e-6. worst is lhs / rhs (rhs / lhs for dual-level).
 */
std::vector<InequalityCheck> nfun_inequalities(const NfunOptions& opt, std::size_t budget, std::uint64_t seed);

/// max relative error of the double conjugate (M_{s,Q phi*})^* against t^q on [1e-2, 1e2].
double double_conjugate_error(double q, double s, const TableSpec& table = {});

/// alpha_s(Q, t) over every local cube, at t = 1 (`at_norm` false) or t = 1 / ||chi_Q||_p.
Bracket alpha_bracket(const Exponent& p, double s, bool at_norm, const TableSpec& table = {1e-8, 1e8, 128});

}  // namespace vlp

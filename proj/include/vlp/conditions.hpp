#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vlp/exponent.hpp"
#include "vlp/grid.hpp"
#include "vlp/modular.hpp"

namespace vlp {

struct Witness {
  std::size_t sample = 0;
  std::string id;
  double value = 0.0;
};

enum class ProbeKind { sup, inf };

/**
 * Result of a supremum (or infimum) search over a sampled family. The
 * estimate is always the value of the first witness: it is a lower bound
 * for a supremum, never a certified upper bound.
 */
struct ProbeReport {
  ProbeKind kind = ProbeKind::sup;
  double estimate = 0.0;
  std::vector<Witness> witnesses;  // best first, ties by sample index
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
};

/// Builds a report from per-sample values; keeps the best `top_k`.
ProbeReport reduce_probe(ProbeKind kind, const std::vector<double>& values, const std::vector<std::string>& ids,
                         std::uint64_t seed, std::size_t budget, std::size_t top_k = 5);

std::string describe(const Cube& q);

/// max over enumerated cubes of |Q|^-1 ||chi_Q||_p ||chi_Q||_p'.
ProbeReport apx_constant(const Exponent& p, bool local, std::size_t budget, std::uint64_t seed);

/// Nonnegative weight with positive integral.
class Weight {
 public:
  explicit Weight(GridFunction samples);
  const GridFunction& samples() const { return samples_; }

 private:
  GridFunction samples_;
};

/**
 * max over local cubes of (|Q|^-1 int w)(|Q|^-1 int w^{-p'/p})^{p-1}.
 * A cube containing a zero of w contributes +inf.
 */
ProbeReport aploc_weight_constant(const Weight& w, double p0, std::size_t budget, std::uint64_t seed);

enum class OperatorTag { m_global, m_local, t_global, t_local };

enum class TestFamily {
  indicators,    // chi_Q for a random cube
  combs,         // sum of chi_{Q_i} with lacunary gaps
  profiles,      // truncated |x - x0|^{-1/p(x)}
  random_steps,  // random values on a random partition
  mixed          // cycles through the four above
};

/// Generates test function i of a family; deterministic in (seed, i).
GridFunction test_function(const Exponent& p, TestFamily family, std::uint64_t seed, std::size_t i, std::string* label = nullptr);

/// max over `budget` samples of ||op f||_p / ||f||_p; T ops also draw a partition per sample.
ProbeReport operator_norm_probe(OperatorTag op, const Exponent& p, TestFamily family, std::size_t budget, std::uint64_t seed);

struct RatioRecord {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 1.0;  // 1 when both sides vanish
};

/// ||sum t_Q chi_Q||_p against the sequence norm of t_Q ||chi_Q||_p with exponents p_Q.
RatioRecord estimate_ratio(const std::vector<double>& tvals, const Partition& part, const Exponent& p);

/// ||f||_p against the l^{p_inf} sum of ||f chi_Q||_p over equal cubes of the given side.
RatioRecord local_to_global_ratio(const GridFunction& f, const Exponent& p, double p_inf, double side);

struct DominationOptions {
  double s = 1.0;
  bool local = true;
  double a1 = 1.0;
  TableSpec table{1e-8, 1e8, 128};
};

/**
 * Empirical A2: per sampled partition, random directions t_Q are scaled by
 * bisection so that sum |Q| (M_{s,Q phi*})^*(t_Q) = A1, and the largest
 * resulting sum |Q| M_{s,Q phi}(t_Q) is reported. Samples whose hypothesis
 * cannot reach A1 are skipped and counted in `unattainable`.
 */
struct DominationReport {
  ProbeReport report;
  std::size_t unattainable = 0;
};
DominationReport domination_probe(const Exponent& p, const DominationOptions& opt, std::size_t budget, std::uint64_t seed);

/**
 * Level-integrated sums over CZ cubes of f_{0,lambda}: both
 * int lambda^-1 sum |Q| (M_{s,Q phi*})^*(lambda) and the phi analogue,
 * on a log-spaced lambda grid.
 */
struct LevelSums {
  double hypothesis = 0.0;
  double conclusion = 0.0;
  std::size_t levels = 0;
};
LevelSums level_integrated_sums(const GridFunction& f, const Exponent& p, double s, double q, std::size_t levels,
                                const TableSpec& table = {1e-8, 1e8, 128});

/// min over sampled local partitions, sets N with |Q n N| >= eps |Q| and t_Q >= 0 of the norm ratio.
ProbeReport ainfty_probe(const Exponent& p, double eps, std::size_t budget, std::uint64_t seed);

/// 1-based index of the last of the (ordered) intervals meeting a cube; 0 if none (1D).
int highest_interval_met(const Grid& g, const Cube& q, const std::vector<std::pair<double, double>>& intervals);

/**
 * Averaging-operator probe on 1D partitions, indexed by the last of the
 * given ordered intervals that a large cube (volume > 1) reaches; such a
 * cube spans at most K intervals. Entry K is the supremum over samples
 * reaching at most interval K, so it is nondecreasing in K; `at_level`
 * keeps the maximum over samples reaching exactly K.
 *
 * Global samples take one large cube [a, b) with log-uniform endpoints and
 * either the indicator of a left part of it or the profile c^{p'(x) - 1}
 * that nearly attains ||chi_Q||_p'. Local samples use random local
 * partitions and test functions supported below the start of interval K+1.
 */
struct SpanProbe {
  std::vector<ProbeReport> cumulative;  // K = 0..intervals.size()
  std::vector<double> at_level;         // -inf when no sample met exactly K
};
SpanProbe span_probe(const Exponent& p, bool local, const std::vector<std::pair<double, double>>& intervals,
                     std::size_t budget, std::uint64_t seed);

}  // namespace vlp

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vlp/grid.hpp"

namespace vlp {

/// Analytic tag carried alongside exponent samples.
struct ExponentDescriptor {
  std::string kind;  // constant | log-holder | lerner-p0 | ac-density | remapped | samples
  std::map<std::string, double> params;
  /// Point evaluation of the analytic formula; empty for sample-only exponents.
  std::function<double(const std::array<double, 2>&)> eval;
};

/// Exponent p(.) with 1 < p_minus <= p <= p_plus < inf.
class Exponent {
 public:
  Exponent(GridFunction samples, double p_minus, double p_plus, std::optional<ExponentDescriptor> descriptor = {});
  /// Bounds taken from the sample range.
  static Exponent from_samples(GridFunction samples);

  const GridFunction& samples() const { return samples_; }
  const Grid& grid() const { return samples_.grid(); }
  const GridPtr& grid_ptr() const { return samples_.grid_ptr(); }
  double operator[](std::size_t c) const { return samples_[c]; }
  std::size_t size() const { return samples_.size(); }
  double p_minus() const { return p_minus_; }
  double p_plus() const { return p_plus_; }
  const std::optional<ExponentDescriptor>& descriptor() const { return descriptor_; }

  /// beta * p(.), used for the power identities.
  Exponent scaled(double beta) const;

 private:
  GridFunction samples_;
  double p_minus_;
  double p_plus_;
  std::optional<ExponentDescriptor> descriptor_;
};

/// Strictly increasing continuous piecewise-linear map, extended with slope 1.
class PiecewiseLinearMap {
 public:
  explicit PiecewiseLinearMap(std::vector<std::pair<double, double>> breakpoints);
  static PiecewiseLinearMap identity() { return PiecewiseLinearMap({{0.0, 0.0}}); }

  double forward(double x) const;
  double inverse(double y) const;
  const std::vector<std::pair<double, double>>& breakpoints() const { return bp_; }

 private:
  std::vector<std::pair<double, double>> bp_;
};

struct ConstantExponent {
  double q = 2.0;
};
/// p(x) = p_inf + c / log(e + |x|).
struct LogHolderExponent {
  double p_inf = 2.0;
  double c = 1.0;
};
/// p(x) = base + integral_{-inf}^{x} density, density piecewise constant (1D).
struct AcExponent {
  double base = 2.0;
  GridFunction density;
};
/// beta (p0(|x|) + alpha) with the Lerner p0.
struct LernerExponent {
  double alpha = 2.0;
  double beta = 1.0;
  int k_max = 3;
};

using ExponentSpec = std::variant<ConstantExponent, LogHolderExponent, AcExponent, LernerExponent>;

Exponent build_exponent(GridPtr grid, const ExponentSpec& spec);

/**
 * p0(x) = int_{|x|}^inf chi_E(t) / (t log t) dt with
 * E = U_k (e^{k^3}, e^{k^3 e^{1/k^2}}).
 *
 * Intervals k <= k_max are integrated exactly through log log t; each full
 * interval contributes 1/k^2, so the tail sum_{k > k_max} 1/k^2 is added
 * as a constant. Valid for |x| below e^{(k_max+1)^3}.
 */
double lerner_p0(double x, int k_max = 3);

/// Left and right endpoints of the k-th E-interval.
std::pair<double, double> lerner_interval(int k);

Exponent lerner_exponent(GridPtr grid, double alpha, double beta, int k_max = 3);

/**
 * Symmetric nonuniform grid resolving the E-intervals k = 1..k_max:
 * uniform cells of width inner_spacing on [-e, e], log-spaced cells beyond,
 * with every interval endpoint on a boundary.
 */
Grid lerner_grid(int k_max = 3, std::size_t cells_per_log_unit = 8, double inner_spacing = 0.25);

/**
 * Remapping of the Lerner construction: interval lengths are kept
 * (m'_k - t'_k = m_k - t_k) while the gap before interval k+1 is stretched
 * by gap_stretch^k. Identity for x <= 0.
 */
PiecewiseLinearMap lerner_remap(int k_max, double gap_stretch);

/// Image of a 1D grid under a monotone map (edges mapped pointwise).
Grid map_grid(const Grid& g, const PiecewiseLinearMap& omega);

/// Samples p(omega^{-1}(x)) at target cell midpoints; bounds are copied.
Exponent remap_exponent(const Exponent& p, const PiecewiseLinearMap& omega, GridPtr target);

/// p' = p / (p - 1).
Exponent conjugate_exponent(const Exponent& p);

/// p_Q with 1/p_Q the volume-weighted mean of 1/p over Q.
double cube_mean_exponent(const Exponent& p, const Cube& q);

struct RegularityReport {
  double local_modulus = 0.0;
  double decay_modulus = 0.0;
  double nekvinda_value = 0.0;
};

/**
 * Log-Holder diagnostics. Pairs are exhaustive up to 2048 cells; beyond
 * that all adjacent pairs plus `pair_budget` seeded random pairs.
 */
RegularityReport regularity_report(const Exponent& p, double p_inf, double c, std::size_t pair_budget = 1 << 16,
                                   std::uint64_t seed = 0);

}  // namespace vlp

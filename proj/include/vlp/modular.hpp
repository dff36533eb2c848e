#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "vlp/exponent.hpp"
#include "vlp/grid.hpp"

namespace vlp {

/// Overflow sentinel returned by modulars and s-means.
inline constexpr double kOverflow = std::numeric_limits<double>::infinity();

/// Log-magnitudes above this saturate to kOverflow.
inline constexpr double kLogSaturation = 700.0;

/// sum_cells |f|^p * volume, evaluated as exp(p log|f|); zero cells contribute 0.
double modular(const GridFunction& f, const Exponent& p);

/// inf{lambda > 0 : modular(f / lambda) <= 1}; 0 for f == 0.
double luxemburg_norm(const GridFunction& f, const Exponent& p);

/// Norm of the indicator of a cube, using only the cube's cells.
double indicator_norm(const Exponent& p, const Cube& q);

/// Luxemburg norm of f restricted to a cube.
double restricted_norm(const GridFunction& f, const Exponent& p, const Cube& q);

/**
 * Weighted sequence Luxemburg norm inf{lambda : sum_i w_i |t_i / lambda|^{p_i} <= 1}.
 * Weights default to 1.
 */
double seq_norm(std::span<const double> t, std::span<const double> exps,
                std::optional<std::span<const double>> weights = std::nullopt);

/**
 * Root of sum_i w_i exp(p_i (a_i - mu)) = 1 in mu = log(lambda), by
 * bisection to |mu_hi - mu_lo| <= 1e-13. Terms with a_i = -inf are ignored.
 * Returns exp(mu_hi); 0 when no term is active.
 */
double solve_luxemburg(std::span<const double> log_abs, std::span<const double> exps, std::span<const double> weights);

/// phi*(p, t) = (p - 1) p^{-p'} t^{p'}, complementary to t^p.
double phi_star_eval(double p_val, double t);

enum class NKind { phi, phi_star };

/**
 * Exponent values on a cube grouped by distinct value, each with its share
 * of the cube volume. Makes repeated s-mean evaluations cheap.
 */
struct CubeExponentProfile {
  std::vector<double> p;
  std::vector<double> share;  // sums to 1
};
CubeExponentProfile cube_profile(const Exponent& p, const Cube& q);

/// M_{s,Q}(t) = ((1/|Q|) int_Q phi(x, t)^s dx)^{1/s} for phi or phi*.
double msq(const CubeExponentProfile& prof, double s, double t, NKind which);
double msq(const Exponent& p, const Cube& q, double s, double t, NKind which);

struct TableSpec {
  double t_min = 1e-8;
  double t_max = 1e8;
  std::size_t per_decade = 512;
};

/// Sampled non-negative non-decreasing function on a log-spaced positive grid.
class NFunctionTable {
 public:
  NFunctionTable(std::vector<double> t, std::vector<double> values);
  static NFunctionTable tabulate(const std::function<double(double)>& g, const TableSpec& spec = {});

  std::span<const double> t() const { return t_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return t_.size(); }
  /// Discrete second differences are >= -tol (relative to the slope scale).
  bool convex() const { return convex_; }

  /// Piecewise-linear evaluation through the origin below t_min; +inf above t_max.
  double operator()(double x) const;

 private:
  std::vector<double> t_;
  std::vector<double> values_;
  bool convex_ = false;
};

/// Legendre conjugate on the table's own grid, u -> max_t (u t - g(t)),
/// with the origin g(0) = 0 among the candidates.
NFunctionTable conj_transform(const NFunctionTable& g);

struct ConjugateValue {
  double value = 0.0;
  double argmax = 0.0;
  bool valid = true;  // false when the maximizer sits on the table boundary
};
ConjugateValue conjugate_at(const NFunctionTable& g, double u);

/// Table of M_{s,Q phi} or M_{s,Q phi*}.
NFunctionTable msq_table(const CubeExponentProfile& prof, double s, NKind which, const TableSpec& spec = {});

struct AlphaValue {
  double value = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  bool valid = true;
};

/// alpha_s(Q, t) = M_{s,Q phi}(t) / (M_{s,Q phi*})^*(t).
AlphaValue alpha_s(const Exponent& p, const Cube& q, double s, double t, const TableSpec& spec = {});

}  // namespace vlp

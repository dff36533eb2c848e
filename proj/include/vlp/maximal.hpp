#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "vlp/grid.hpp"

namespace vlp {

/// Every index-aligned interval (1D) or index square (2D).
struct AllCubes {};

/// Shifted dyadic lattice, levels 0..z_max (default: the grid resolution).
struct Dyadic {
  std::array<double, 2> shift{0.0, 0.0};
  std::optional<int> z_max;
};

using CubeFamily = std::variant<AllCubes, Dyadic>;

struct MaximalSpec {
  bool local = false;  // |Q| <= 1; implied by Dyadic
  double q = 1.0;
  CubeFamily family = AllCubes{};
  /// Cap on enumerated 2D squares; beyond it a seeded sample is used.
  std::size_t budget = std::size_t{1} << 22;
};

void validate(const MaximalSpec& spec);

namespace detail {

inline double qpow(double a, double q) {
  if (q == 1.0) return a;
  if (q == 2.0) return a * a;
  return std::pow(a, q);
}

inline double qroot(double s, double q) {
  if (q == 1.0) return s;
  if (q == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / q);
}

/**
 * q-average of |f| over a cube before taking the root: row-major sum of
 * |f|^q * volume divided by the cube volume. Shared by the kernels and the
 * brute-force reference so both round identically.
 */
double cube_power_mean(const GridFunction& f, const Cube& q, double p);

/// Dyadic levels actually used for a spec on a grid.
DyadicFamily dyadic_family(const Grid& g, const Dyadic& d);

}  // namespace detail

/**
 * Per cell, the largest q-mean of |f| over cubes of the spec's family that
 * contain the cell. A single-cell cube contributes |f| itself.
 *
 * 1D all-cubes is exact over every interval: for each left end the window
 * grows with a running sum and stops at the volume cap, so the cost is
 * O(n^2) in the worst case (global) and O(n * cells per unit) when local.
 * Keep n below about 1e5. 2D squares are summed directly per square.
 */
GridFunction maximal(const GridFunction& f, const MaximalSpec& spec = {});

/// (sum_j maximal(f_j)^r)^{1/r} cellwise.
GridFunction vector_maximal(const std::vector<GridFunction>& fs, double r, const MaximalSpec& spec = {});

/// Uniform lattice of `count` shifts per axis on [-4, 4] (endpoints included).
std::vector<std::array<double, 2>> shift_lattice(int dim, std::size_t count);

/// Mean over shifts of the shifted dyadic local q-maximal function.
GridFunction shifted_dyadic_average_bound(const GridFunction& f, double q, const std::vector<std::array<double, 2>>& shifts,
                                          std::optional<int> z_max = std::nullopt);

/// Replaces f on each cube of the partition by its mean; a cube on which f is
/// constant keeps that constant exactly.
GridFunction averaging(const GridFunction& f, const Partition& part);

/// (f * chi{|f| <= lambda}, f * chi{|f| > lambda}).
std::pair<GridFunction, GridFunction> split_at_level(const GridFunction& f, double lambda);

struct CzCube {
  Cube cube;
  int level = 0;
  double mean = 0.0;  // q-mean of |f| over the cube
};

/**
 * Maximal shifted dyadic cubes (levels 0..z_max) whose q-mean exceeds
 * lambda / 2. Levels are scanned coarse to fine and a cube is taken when no
 * ancestor was taken, so the result is disjoint and covers exactly the
 * cells where the dyadic maximal function exceeds lambda / 2.
 */
std::vector<CzCube> cz_decompose(const GridFunction& f, double lambda, double q, std::array<double, 2> shift = {0.0, 0.0},
                                 std::optional<int> z_max = std::nullopt);

/// q-mean of |f| over one cube with the single-cell convention applied.
double cube_q_mean(const GridFunction& f, const Cube& cube, double q);

}  // namespace vlp

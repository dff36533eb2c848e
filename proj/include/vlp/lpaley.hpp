#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vlp/conditions.hpp"
#include "vlp/exponent.hpp"
#include "vlp/grid.hpp"

namespace vlp {

/// Standard bump exp(-1 / (1 - (x/r)^2)) on |x| < r, scaled to unit integral.
struct BumpSpec {
  double radius = 1.0;
};

/// Unit-integral bump value at x.
double bump_value(const BumpSpec& bump, double x);

/**
 * One-dimensional Littlewood-Paley filters.
 *
 * phi0 is the bump, phi(x) = phi0(x) - phi0(x/2)/2 and
 * phi_j(x) = 2^j phi(2^j x). `dilations[j-1]` holds phi_j on a grid of
 * spacing h 2^{J-j}, so each dilation is sampled at the same relative
 * resolution. `kernels` holds the filters used by the square function on
 * the working spacing h, all on one symmetric kernel grid: index 0 is phi0
 * (phi in strict mode), index j >= 1 is phi_j.
 */
struct FilterBank {
  BumpSpec bump;
  int J = 0;
  double h = 0.0;
  bool strict = false;
  GridFunction phi0;
  GridFunction phi;
  std::vector<GridFunction> dilations;
  std::vector<GridFunction> kernels;
};

/// Cell averages of fn on a symmetric grid of spacing h covering [-radius, radius].
GridFunction sample_kernel(const std::function<double(double)>& fn, double radius, double h);

/**
 * Requires a uniform 1D grid with at least 8 cells across the support of
 * phi_J. `strict` uses phi instead of phi0 for the j = 0 term.
 */
FilterBank build_filterbank(const Grid& grid, int J, const BumpSpec& bump = {}, bool strict = false);

/// 2^J phi0(2^J x) on the bank's kernel grid.
GridFunction psi_kernel(const FilterBank& fb, int J);

enum class ConvolutionMethod { automatic, direct, fft };

/**
 * out_i = h sum_k f_k g_{i-k-G}, G = (center of g's first cell) / h: the
 * continuum convolution of the piecewise-constant f with g at f's cell
 * centers when g holds cell averages. Zero extension outside f's grid.
 * `automatic` sums directly up to 1024 cells and uses FFTW above.
 */
GridFunction convolve(const GridFunction& f, const GridFunction& g, ConvolutionMethod method = ConvolutionMethod::automatic);

/// (sum_{j=0}^{J} |k_j * f|^2)^{1/2} with the bank's kernels.
GridFunction square_function(const GridFunction& f, const FilterBank& fb);

/**
 * Smooth test function i: a few Gaussian-windowed cosines, tapered to zero
 * outside [lower + pad, upper - pad]. Deterministic in (seed, i) and
 * independent of the grid resolution.
 */
GridFunction smooth_test_function(GridPtr grid, double pad, std::uint64_t seed, std::size_t i);

struct SfBracket {
  double c_low = 0.0;
  double c_high = 0.0;
  ProbeReport low;
  ProbeReport high;
};

/// min and max of ||S f||_p / ||f||_p over `budget` smooth test functions padded by the widest kernel.
SfBracket sf_equivalence(const Exponent& p, const FilterBank& fb, std::size_t budget, std::uint64_t seed);

}  // namespace vlp

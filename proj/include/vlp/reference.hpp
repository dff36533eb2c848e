#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "vlp/grid.hpp"
#include "vlp/maximal.hpp"

// Serial, deliberately naive implementations kept as test oracles and as the
// baseline for the kernel benchmarks.
namespace vlp::reference {

/// Scans the whole cube family cube by cube; ignores spec.budget.
GridFunction maximal(const GridFunction& f, const MaximalSpec& spec);

/**
 * Scatter form of the discrete convolution: every pair (k, m) adds
 * h f_k g_m to output cell k + m + offset, where offset = c0 / h and c0 is
 * the center of the kernel's first cell.
 */
std::vector<double> convolve(std::span<const double> f, std::span<const double> g, std::ptrdiff_t offset, double h);

/// max over a dense log grid of u t - g(t), including t = 0.
double legendre_sup(const std::function<double(double)>& g, double u, double t_min, double t_max, std::size_t points);

}  // namespace vlp::reference

#include "vlp/reference.hpp"

#include <algorithm>
#include <cmath>

namespace vlp::reference {

GridFunction maximal(const GridFunction& f, const MaximalSpec& spec) {
  validate(spec);
  const Grid& g = f.grid();
  std::vector<Cube> family;
  if (const auto* d = std::get_if<Dyadic>(&spec.family)) {
    family = dyadic_cubes(g, detail::dyadic_family(g, *d));
  } else if (g.dim() == 1) {
    for (std::size_t i = 0; i < g.cells(0); ++i)
      for (std::size_t j = i + 1; j <= g.cells(0); ++j) family.push_back(make_interval(g, i, j));
  } else {
    for (std::size_t iy = 0; iy < g.cells(1); ++iy)
      for (std::size_t ix = 0; ix < g.cells(0); ++ix)
        for (std::size_t k = 1; ix + k <= g.cells(0) && iy + k <= g.cells(1); ++k)
          family.push_back(make_cube(g, {ix, iy}, {ix + k, iy + k}));
  }
  const bool local = spec.local || std::holds_alternative<Dyadic>(spec.family);
  std::vector<double> out(f.size(), 0.0);
  for (const auto& cube : family) {
    if (local && !is_local(g, cube)) continue;
    const double v = cube_q_mean(f, cube, spec.q);
    for_each_cell(g, cube, [&](std::size_t c) { out[c] = std::max(out[c], v); });
  }
  return GridFunction(f.grid_ptr(), std::move(out));
}

std::vector<double> convolve(std::span<const double> f, std::span<const double> g, std::ptrdiff_t offset, double h) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  std::vector<double> out(f.size(), 0.0);
  for (std::ptrdiff_t k = 0; k < n; ++k)
    for (std::ptrdiff_t m = 0; m < static_cast<std::ptrdiff_t>(g.size()); ++m) {
      const std::ptrdiff_t i = k + m + offset;
      if (i >= 0 && i < n) out[static_cast<std::size_t>(i)] += h * f[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(m)];
    }
  return out;
}

double legendre_sup(const std::function<double(double)>& g, double u, double t_min, double t_max, std::size_t points) {
  double best = 0.0;
  const double l0 = std::log(t_min), l1 = std::log(t_max);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(points - 1));
    best = std::max(best, u * t - g(t));
  }
  return best;
}

}  // namespace vlp::reference

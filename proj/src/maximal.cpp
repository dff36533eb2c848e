#include "vlp/maximal.hpp"

#include <algorithm>
#include <cmath>

namespace vlp {

void validate(const MaximalSpec& spec) {
  if (!(spec.q >= 1.0) || !std::isfinite(spec.q)) throw InvalidArgument("maximal q must be a finite value >= 1");
  if (spec.budget < 1) throw InvalidArgument("maximal budget must be at least 1");
}

namespace detail {

double cube_power_mean(const GridFunction& f, const Cube& q, double p) {
  const Grid& g = f.grid();
  double s = 0.0;
  for_each_cell(g, q, [&](std::size_t c) { s += qpow(std::abs(f[c]), p) * g.volume(c); });
  return s / q.volume;
}

DyadicFamily dyadic_family(const Grid& g, const Dyadic& d) {
  return DyadicFamily{d.z_max ? *d.z_max : dyadic_resolution_level(g), d.shift};
}

}  // namespace detail

double cube_q_mean(const GridFunction& f, const Cube& cube, double q) {
  if (cube.cell_count() == 1) return std::abs(f[f.grid().index(cube.lo[0], cube.lo[1])]);
  return detail::qroot(detail::cube_power_mean(f, cube, q), q);
}

namespace {

// Power means are >= 0, so -1 marks "no cube of this kind seen yet".
constexpr double kUnset = -1.0;

GridFunction combine(const GridFunction& f, const std::vector<double>& multi, const std::vector<double>& single, double q) {
  std::vector<double> out(f.size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    double v = single[c];
    if (multi[c] != kUnset) v = std::max(v, detail::qroot(multi[c], q));
    out[c] = std::max(v, 0.0);
  }
  return GridFunction(f.grid_ptr(), std::move(out));
}

void merge_max(std::vector<double>& into, const std::vector<double>& from) {
  for (std::size_t c = 0; c < into.size(); ++c) into[c] = std::max(into[c], from[c]);
}

// Each cube's mean is scattered to its cells; thread-local maxima are merged
// at the end, which is order independent.
GridFunction scatter_max(const GridFunction& f, const std::vector<Cube>& cubes, double q) {
  const Grid& g = f.grid();
  const std::size_t n = f.size();
  std::vector<double> multi(n, kUnset), single(n, kUnset);
  const auto m = static_cast<std::ptrdiff_t>(cubes.size());
#pragma omp parallel
  {
    std::vector<double> lm(n, kUnset), ls(n, kUnset);
#pragma omp for schedule(dynamic, 16) nowait
    for (std::ptrdiff_t k = 0; k < m; ++k) {
      const Cube& cube = cubes[static_cast<std::size_t>(k)];
      if (cube.cell_count() == 1) {
        const std::size_t c = g.index(cube.lo[0], cube.lo[1]);
        ls[c] = std::max(ls[c], std::abs(f[c]));
        continue;
      }
      const double mean = detail::cube_power_mean(f, cube, q);
      for_each_cell(g, cube, [&](std::size_t c) { lm[c] = std::max(lm[c], mean); });
    }
#pragma omp critical(vlp_scatter_merge)
    {
      merge_max(multi, lm);
      merge_max(single, ls);
    }
  }
  return combine(f, multi, single, q);
}

GridFunction all_intervals_1d(const GridFunction& f, bool local, double q) {
  const Grid& g = f.grid();
  const std::size_t n = f.size();
  const auto w = g.widths(0);
  std::vector<double> term(n), single(n);
  for (std::size_t j = 0; j < n; ++j) {
    single[j] = std::abs(f[j]);
    term[j] = detail::qpow(single[j], q) * g.volume(j);
  }
  std::vector<double> multi(n, kUnset);
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel
  {
    std::vector<double> lm(n, kUnset), avg(n);
#pragma omp for schedule(dynamic, 8) nowait
    for (std::ptrdiff_t si = 0; si < sn; ++si) {
      const auto i = static_cast<std::size_t>(si);
      double s = term[i], vol = w[i], minw = w[i];
      std::size_t last = i;
      for (std::size_t j = i + 1; j < n; ++j) {
        s += term[j];
        vol += w[j];
        minw = std::min(minw, w[j]);
        // the cap test is monotone in j, so the first failure ends the window
        if (local && !within_cap(vol, minw, 1.0)) break;
        avg[j] = s / vol;
        last = j;
      }
      if (last == i) continue;
      // cell x >= i+1 sees the windows [i, j] with j >= x; cell i sees all of them
      double run = kUnset;
      for (std::size_t j = last; j > i; --j) {
        run = std::max(run, avg[j]);
        lm[j] = std::max(lm[j], run);
      }
      lm[i] = std::max(lm[i], run);
    }
#pragma omp critical(vlp_interval_merge)
    merge_max(multi, lm);
  }
  return combine(f, multi, single, q);
}

}  // namespace

GridFunction maximal(const GridFunction& f, const MaximalSpec& spec) {
  validate(spec);
  const Grid& g = f.grid();
  if (const auto* d = std::get_if<Dyadic>(&spec.family)) return scatter_max(f, dyadic_cubes(g, detail::dyadic_family(g, *d)), spec.q);
  if (g.dim() == 1) return all_intervals_1d(f, spec.local, spec.q);
  const auto cap = spec.local ? std::optional<double>(1.0) : std::nullopt;
  return scatter_max(f, enum_cubes(g, cap, spec.budget, 0), spec.q);
}

GridFunction vector_maximal(const std::vector<GridFunction>& fs, double r, const MaximalSpec& spec) {
  if (fs.empty()) throw InvalidArgument("vector maximal needs at least one function");
  if (!(r > 1.0) || !std::isfinite(r)) throw InvalidArgument("vector maximal exponent must lie in (1, inf)");
  std::vector<double> acc(fs.front().size(), 0.0);
  for (const auto& f : fs) {
    if (!f.same_grid(fs.front())) throw InvalidArgument("vector maximal functions must share a grid");
    const auto m = maximal(f, spec);
    for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += detail::qpow(m[c], r);
  }
  for (double& v : acc) v = detail::qroot(v, r);
  return GridFunction(fs.front().grid_ptr(), std::move(acc));
}

std::vector<std::array<double, 2>> shift_lattice(int dim, std::size_t count) {
  if (count < 1) throw InvalidArgument("shift count must be at least 1");
  if (dim != 1 && dim != 2) throw InvalidArgument("dimension must be 1 or 2");
  std::vector<double> axis(count, 0.0);
  if (count > 1)
    for (std::size_t i = 0; i < count; ++i) axis[i] = -4.0 + 8.0 * static_cast<double>(i) / static_cast<double>(count - 1);
  std::vector<std::array<double, 2>> out;
  if (dim == 1) {
    for (double t : axis) out.push_back({t, 0.0});
  } else {
    for (double ty : axis)
      for (double tx : axis) out.push_back({tx, ty});
  }
  return out;
}

GridFunction shifted_dyadic_average_bound(const GridFunction& f, double q, const std::vector<std::array<double, 2>>& shifts,
                                          std::optional<int> z_max) {
  if (shifts.empty()) throw InvalidArgument("shift list is empty");
  std::vector<double> acc(f.size(), 0.0);
  for (const auto& t : shifts) {
    const auto m = maximal(f, MaximalSpec{true, q, Dyadic{t, z_max}});
    for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += m[c];
  }
  const double k = static_cast<double>(shifts.size());
  for (double& v : acc) v /= k;
  return GridFunction(f.grid_ptr(), std::move(acc));
}

GridFunction averaging(const GridFunction& f, const Partition& part) {
  const Grid& g = f.grid();
  std::vector<double> out(f.size());
  for (const auto& cube : part.cubes) {
    const double first = f[g.index(cube.lo[0], cube.lo[1])];
    bool constant = true;
    double s = 0.0;
    for_each_cell(g, cube, [&](std::size_t c) {
      constant = constant && f[c] == first;
      s += f[c] * g.volume(c);
    });
    const double mean = constant ? first : s / cube.volume;
    for_each_cell(g, cube, [&](std::size_t c) { out[c] = mean; });
  }
  return GridFunction(f.grid_ptr(), std::move(out));
}

std::pair<GridFunction, GridFunction> split_at_level(const GridFunction& f, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("level must be positive");
  std::vector<double> lo(f.size(), 0.0), hi(f.size(), 0.0);
  for (std::size_t c = 0; c < f.size(); ++c) (std::abs(f[c]) <= lambda ? lo : hi)[c] = f[c];
  return {GridFunction(f.grid_ptr(), std::move(lo)), GridFunction(f.grid_ptr(), std::move(hi))};
}

std::vector<CzCube> cz_decompose(const GridFunction& f, double lambda, double q, std::array<double, 2> shift,
                                 std::optional<int> z_max) {
  if (!(lambda > 0.0)) throw InvalidArgument("level must be positive");
  if (!(q >= 1.0)) throw InvalidArgument("q must be >= 1");
  const Grid& g = f.grid();
  const auto lattice = dyadic_lattice(g, detail::dyadic_family(g, Dyadic{shift, z_max}));
  std::vector<double> mean(lattice.size());
  const auto m = static_cast<std::ptrdiff_t>(lattice.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    const auto i = static_cast<std::size_t>(k);
    mean[i] = cube_q_mean(f, lattice[i].cube, q);
  }
  // lattice is ordered coarse to fine, so parents are decided first
  std::vector<char> covered(lattice.size(), 0);
  std::vector<CzCube> out;
  for (std::size_t k = 0; k < lattice.size(); ++k) {
    const auto& d = lattice[k];
    if (d.parent >= 0 && covered[static_cast<std::size_t>(d.parent)]) {
      covered[k] = 1;
      continue;
    }
    if (mean[k] > 0.5 * lambda) {
      covered[k] = 1;
      out.push_back({d.cube, d.level, mean[k]});
    }
  }
  return out;
}

}  // namespace vlp

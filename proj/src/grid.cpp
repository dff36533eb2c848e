#include "vlp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "vlp/rng.hpp"

namespace vlp {

namespace {

bool nearly_uniform(std::span<const double> w) {
  const double ref = w.front();
  return std::all_of(w.begin(), w.end(), [&](double x) { return std::abs(x - ref) <= 1e-9 * std::abs(ref); });
}

}  // namespace

Grid Grid::make(int dim, std::vector<std::vector<double>> boundaries) {
  if (dim != 1 && dim != 2) throw InvalidArgument("grid dimension must be 1 or 2");
  if (boundaries.size() != static_cast<std::size_t>(dim))
    throw InvalidArgument("expected one boundary sequence per axis");
  Grid g;
  g.dim_ = dim;
  for (int a = 0; a < dim; ++a) {
    auto& e = boundaries[a];
    if (e.size() < 2) throw InvalidArgument("boundary sequence needs at least two edges");
    for (double x : e)
      if (!std::isfinite(x)) throw InvalidArgument("boundaries must be finite");
    for (std::size_t i = 1; i < e.size(); ++i)
      if (!(e[i] > e[i - 1])) throw InvalidArgument("boundaries must be strictly increasing");
    g.edges_[a] = std::move(e);
  }
  if (dim == 1) g.edges_[1] = {0.0, 1.0};
  for (int a = 0; a < 2; ++a) {
    const auto& e = g.edges_[a];
    g.widths_[a].resize(e.size() - 1);
    for (std::size_t i = 0; i + 1 < e.size(); ++i) g.widths_[a][i] = e[i + 1] - e[i];
  }
  if (dim == 2 && !(nearly_uniform(g.widths_[0]) && nearly_uniform(g.widths_[1])))
    throw InvalidArgument("2D grids must be uniform on each axis");
  g.finalize();
  return g;
}

Grid Grid::uniform(double a, double b, std::size_t n) {
  if (n == 0 || !(b > a)) throw InvalidArgument("uniform grid needs n >= 1 and b > a");
  std::vector<double> e(n + 1);
  for (std::size_t i = 0; i <= n; ++i) e[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
  e.back() = b;
  return make(1, {std::move(e)});
}

Grid Grid::uniform2d(double ax, double bx, std::size_t nx, double ay, double by, std::size_t ny) {
  auto axis = [](double a, double b, std::size_t n) {
    if (n == 0 || !(b > a)) throw InvalidArgument("uniform grid needs n >= 1 and b > a");
    std::vector<double> e(n + 1);
    for (std::size_t i = 0; i <= n; ++i) e[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    e.back() = b;
    return e;
  };
  return make(2, {axis(ax, bx, nx), axis(ay, by, ny)});
}

void Grid::finalize() {
  const std::size_t nx = cells(0), ny = cells(1);
  volumes_.resize(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix)
      volumes_[index(ix, iy)] = dim_ == 1 ? widths_[0][ix] : widths_[0][ix] * widths_[1][iy];
  for (double v : volumes_)
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("cell volumes must be positive and finite");
  total_volume_ = cube_volume(*this, {0, 0}, {nx, ny});
  min_volume_ = *std::min_element(volumes_.begin(), volumes_.end());
}

std::array<double, 2> Grid::midpoint(std::size_t cell) const {
  const auto ij = coords(cell);
  return {center(0, ij[0]), dim_ == 2 ? center(1, ij[1]) : 0.0};
}

std::array<std::size_t, 2> Grid::coords(std::size_t cell) const {
  const std::size_t nx = cells(0);
  return {cell % nx, cell / nx};
}

bool Grid::is_uniform(int axis) const { return nearly_uniform(widths_[axis]); }

double Grid::spacing(int axis) const {
  if (!is_uniform(axis)) throw InvalidArgument("axis is not uniformly spaced");
  return (upper(axis) - lower(axis)) / static_cast<double>(cells(axis));
}

std::size_t Grid::locate(int axis, double x) const {
  const auto& e = edges_[axis];
  auto it = std::upper_bound(e.begin(), e.end(), x);
  if (it == e.begin()) return 0;
  const std::size_t i = static_cast<std::size_t>(it - e.begin()) - 1;
  return std::min(i, cells(axis) - 1);
}

std::optional<std::size_t> Grid::edge_index(int axis, double x, double rel_tol) const {
  const auto& e = edges_[axis];
  const double tol = rel_tol * std::max(1.0, std::abs(x));
  auto it = std::lower_bound(e.begin(), e.end(), x - tol);
  if (it != e.end() && std::abs(*it - x) <= tol) return static_cast<std::size_t>(it - e.begin());
  return std::nullopt;
}

bool Grid::operator==(const Grid& other) const { return dim_ == other.dim_ && edges_ == other.edges_; }

// ---------------------------------------------------------------------------

GridFunction::GridFunction(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidArgument("grid function needs a grid");
  if (values_.size() != grid_->cells()) throw InvalidArgument("value count must equal cell count");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("grid function values must be finite");
}

GridFunction GridFunction::constant(GridPtr grid, double c) {
  const std::size_t n = grid->cells();
  return GridFunction(std::move(grid), std::vector<double>(n, c));
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

GridFunction GridFunction::abs() const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [](double x) { return std::abs(x); });
  return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::scaled(double c) const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [c](double x) { return c * x; });
  return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::masked(std::span<const std::uint8_t> keep) const {
  if (keep.size() != values_.size()) throw InvalidArgument("mask size mismatch");
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = keep[i] ? values_[i] : 0.0;
  return GridFunction(grid_, std::move(v));
}

bool GridFunction::same_grid(const GridFunction& other) const {
  return grid_ == other.grid_ || *grid_ == *other.grid_;
}

namespace {
template <class Op>
GridFunction zip(const GridFunction& a, const GridFunction& b, Op op) {
  if (!a.same_grid(b)) throw InvalidArgument("grid functions live on different grids");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
  return GridFunction(a.grid_ptr(), std::move(v));
}
}  // namespace

GridFunction operator+(const GridFunction& a, const GridFunction& b) { return zip(a, b, std::plus<>{}); }
GridFunction operator-(const GridFunction& a, const GridFunction& b) { return zip(a, b, std::minus<>{}); }
GridFunction operator*(const GridFunction& a, const GridFunction& b) { return zip(a, b, std::multiplies<>{}); }

double integrate(const GridFunction& f) {
  double s = 0.0;
  const auto vol = f.grid().volumes();
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * vol[i];
  return s;
}

// ---------------------------------------------------------------------------

double cube_volume(const Grid& g, const std::array<std::size_t, 2>& lo, const std::array<std::size_t, 2>& hi) {
  double vx = 0.0;
  const auto wx = g.widths(0);
  for (std::size_t i = lo[0]; i < hi[0]; ++i) vx += wx[i];
  if (g.dim() == 1) return vx;
  double vy = 0.0;
  const auto wy = g.widths(1);
  for (std::size_t i = lo[1]; i < hi[1]; ++i) vy += wy[i];
  return vx * vy;
}

Cube make_cube(const Grid& g, std::array<std::size_t, 2> lo, std::array<std::size_t, 2> hi) {
  if (g.dim() == 1) {
    lo[1] = 0;
    hi[1] = 1;
  }
  for (int a = 0; a < 2; ++a)
    if (!(lo[a] < hi[a]) || hi[a] > g.cells(a)) throw InvalidArgument("cube index range outside the grid");
  Cube q{lo, hi, cube_volume(g, lo, hi)};
  if (!(q.volume > 0.0)) throw InvalidArgument("cube volume must be positive");
  return q;
}

Cube make_interval(const Grid& g, std::size_t lo, std::size_t hi) { return make_cube(g, {lo, 0}, {hi, 1}); }

Cube whole_domain(const Grid& g) { return make_cube(g, {0, 0}, {g.cells(0), g.cells(1)}); }

double min_cell_volume(const Grid& g, const Cube& q) {
  double m = std::numeric_limits<double>::infinity();
  for_each_cell(g, q, [&](std::size_t c) { m = std::min(m, g.volume(c)); });
  return m;
}

// ---------------------------------------------------------------------------

Partition finish_partition(const Grid& g, std::vector<Cube> cubes) {
  std::vector<std::uint8_t> hit(g.cells(), 0);
  bool local = true;
  for (const auto& q : cubes) {
    for (int a = 0; a < 2; ++a)
      if (!(q.lo[a] < q.hi[a]) || q.hi[a] > g.cells(a)) throw InvalidArgument("partition cube outside the grid");
    for_each_cell(g, q, [&](std::size_t c) {
      if (hit[c]) throw InvalidArgument("partition cubes overlap");
      hit[c] = 1;
    });
    local = local && is_local(g, q);
  }
  if (std::find(hit.begin(), hit.end(), 0) != hit.end()) throw InvalidArgument("partition leaves a gap");
  return Partition{std::move(cubes), local};
}

std::vector<std::size_t> cell_owner(const Grid& g, const Partition& part) {
  std::vector<std::size_t> owner(g.cells(), 0);
  for (std::size_t k = 0; k < part.cubes.size(); ++k)
    for_each_cell(g, part.cubes[k], [&](std::size_t c) { owner[c] = k; });
  return owner;
}

namespace {

double dist_to_origin(const Grid& g, const Cube& q) {
  double d2 = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const double lo = g.edges(a)[q.lo[a]], hi = g.edges(a)[q.hi[a]];
    const double d = lo > 0.0 ? lo : (hi < 0.0 ? -hi : 0.0);
    d2 += d * d;
  }
  return std::sqrt(d2);
}

std::vector<std::pair<std::size_t, std::size_t>> lattice_segments(const Grid& g, int axis, double side) {
  const double a = g.lower(axis), b = g.upper(axis);
  std::vector<double> cuts{a};
  for (double k = std::floor(a / side) + 1.0; k * side < b; k += 1.0)
    if (k * side > a) cuts.push_back(k * side);
  cuts.push_back(b);
  std::vector<std::pair<std::size_t, std::size_t>> seg;
  std::size_t prev = 0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const auto e = g.edge_index(axis, cuts[i]);
    if (!e) throw InvalidArgument("grid is not aligned with the equal-cube lattice");
    seg.emplace_back(prev, *e);
    prev = *e;
  }
  return seg;
}

Partition equal_cubes(const Grid& g, double side) {
  if (!(side > 0.0)) throw InvalidArgument("cube side must be positive");
  std::vector<Cube> cubes;
  const auto sx = lattice_segments(g, 0, side);
  const auto sy = g.dim() == 2 ? lattice_segments(g, 1, side)
                               : std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}};
  for (const auto& y : sy)
    for (const auto& x : sx) cubes.push_back(make_cube(g, {x.first, y.first}, {x.second, y.second}));
  std::vector<std::pair<double, std::size_t>> key(cubes.size());
  for (std::size_t i = 0; i < cubes.size(); ++i) key[i] = {dist_to_origin(g, cubes[i]), i};
  std::stable_sort(key.begin(), key.end(), [](auto& l, auto& r) { return l.first < r.first; });
  std::vector<Cube> ordered;
  ordered.reserve(cubes.size());
  for (auto& [d, i] : key) ordered.push_back(cubes[i]);
  return finish_partition(g, std::move(ordered));
}

// 1D: split [lo, hi) at a random position snapped to the nearest interior edge.
void split_local_1d(const Grid& g, std::size_t lo, std::size_t hi, Rng& rng, std::vector<Cube>& out) {
  const Cube q = make_interval(g, lo, hi);
  const bool must = !is_local(g, q);
  const bool may = hi - lo > 1 && rng.coin(0.35);
  if (!must && !may) {
    out.push_back(q);
    return;
  }
  const auto e = g.edges(0);
  const double x = e[lo] + rng.uniform(0.1, 0.9) * (e[hi] - e[lo]);
  auto it = std::lower_bound(e.begin() + static_cast<std::ptrdiff_t>(lo) + 1, e.begin() + static_cast<std::ptrdiff_t>(hi), x);
  std::size_t cut = static_cast<std::size_t>(it - e.begin());
  if (cut > lo + 1 && x - e[cut - 1] < e[cut] - x) --cut;
  cut = std::clamp(cut, lo + 1, hi - 1);
  split_local_1d(g, lo, cut, rng, out);
  split_local_1d(g, cut, hi, rng, out);
}

// 2D greedy square tiling: at the first uncovered cell place the largest
// square not exceeding the drawn side that fits.
std::vector<Cube> greedy_squares(const Grid& g, Rng& rng, bool local, double max_side) {
  const std::size_t nx = g.cells(0), ny = g.cells(1);
  std::vector<std::uint8_t> used(g.cells(), 0);
  std::vector<Cube> out;
  const double h = std::min(g.spacing(0), g.spacing(1));
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) {
      if (used[g.index(ix, iy)]) continue;
      const double side = rng.log_uniform(h, std::max(h, max_side));
      std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(side / h)));
      k = std::min({k, nx - ix, ny - iy});
      auto fits = [&](std::size_t kk) {
        for (std::size_t y = iy; y < iy + kk; ++y)
          for (std::size_t x = ix; x < ix + kk; ++x)
            if (used[g.index(x, y)]) return false;
        return !local || is_local(g, make_cube(g, {ix, iy}, {ix + kk, iy + kk}));
      };
      while (k > 1 && !fits(k)) --k;
      const Cube q = make_cube(g, {ix, iy}, {ix + k, iy + k});
      for_each_cell(g, q, [&](std::size_t c) { used[c] = 1; });
      out.push_back(q);
    }
  return out;
}

std::vector<Cube> random_global_1d(const Grid& g, Rng& rng, double max_side) {
  std::vector<Cube> out;
  const auto e = g.edges(0);
  const double hmin = g.min_cell_volume();
  std::size_t lo = 0;
  while (lo < g.cells()) {
    const double len = rng.log_uniform(hmin, std::max(hmin, max_side));
    auto it = std::lower_bound(e.begin() + static_cast<std::ptrdiff_t>(lo) + 1, e.end(), e[lo] + len);
    std::size_t hi = std::min(static_cast<std::size_t>(it - e.begin()), g.cells());
    hi = std::max(hi, lo + 1);
    out.push_back(make_interval(g, lo, hi));
    lo = hi;
  }
  return out;
}

}  // namespace

Partition make_partition(const Grid& g, const PartitionSpec& spec) {
  return std::visit(
      [&](const auto& s) -> Partition {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, EqualCubes>) {
          return equal_cubes(g, s.side);
        } else if constexpr (std::is_same_v<S, RandomLocal>) {
          Rng rng(s.seed);
          std::vector<Cube> cubes;
          if (g.dim() == 1)
            split_local_1d(g, 0, g.cells(), rng, cubes);
          else
            cubes = greedy_squares(g, rng, true, 1.0);
          return finish_partition(g, std::move(cubes));
        } else if constexpr (std::is_same_v<S, RandomGlobal>) {
          Rng rng(s.seed);
          double extent = g.upper(0) - g.lower(0);
          if (g.dim() == 2) extent = std::min(extent, g.upper(1) - g.lower(1));
          const double max_side = s.max_side > 0.0 ? s.max_side : extent;
          auto cubes = g.dim() == 1 ? random_global_1d(g, rng, max_side) : greedy_squares(g, rng, false, max_side);
          return finish_partition(g, std::move(cubes));
        } else {
          std::vector<Cube> cubes;
          for (const auto& q : s.cubes) cubes.push_back(make_cube(g, q.lo, q.hi));
          return finish_partition(g, std::move(cubes));
        }
      },
      spec);
}

// ---------------------------------------------------------------------------

namespace {

// Cubes anchored at one start index (1D) or one corner (2D) that satisfy the cap.
struct Anchor {
  std::size_t ix = 0, iy = 0;
  std::size_t count = 0;
};

std::vector<Anchor> anchors(const Grid& g, std::optional<double> cap) {
  std::vector<Anchor> out;
  const std::size_t nx = g.cells(0), ny = g.cells(1);
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t kmax = g.dim() == 1 ? nx - ix : std::min(nx - ix, ny - iy);
      std::size_t count = kmax;
      if (cap) {
        // same summation order as cube_volume
        const double inf = std::numeric_limits<double>::infinity();
        double sx = 0.0, sy = 0.0, minx = inf, miny = inf, minw = inf;
        count = 0;
        for (std::size_t k = 1; k <= kmax; ++k) {
          sx += g.widths(0)[ix + k - 1];
          double vol = sx;
          if (g.dim() == 2) {
            sy += g.widths(1)[iy + k - 1];
            vol = sx * sy;
            minx = std::min(minx, g.widths(0)[ix + k - 1]);
            miny = std::min(miny, g.widths(1)[iy + k - 1]);
            minw = minx * miny;
          } else {
            minw = std::min(minw, g.widths(0)[ix + k - 1]);
          }
          if (!within_cap(vol, minw, *cap)) break;
          ++count;
        }
      }
      out.push_back({ix, iy, count});
    }
  return out;
}

Cube anchored(const Grid& g, const Anchor& a, std::size_t k) {
  if (g.dim() == 1) return make_interval(g, a.ix, a.ix + k);
  return make_cube(g, {a.ix, a.iy}, {a.ix + k, a.iy + k});
}

}  // namespace

std::vector<Cube> enum_cubes(const Grid& g, std::optional<double> max_volume, std::size_t budget, std::uint64_t seed) {
  if (budget < 1) throw InvalidArgument("budget must be at least 1");
  const auto anc = anchors(g, max_volume);
  std::size_t total = 0;
  for (const auto& a : anc) total += a.count;

  std::vector<Cube> out;
  if (total <= budget) {
    out.reserve(total);
    for (const auto& a : anc)
      for (std::size_t k = 1; k <= a.count; ++k) out.push_back(anchored(g, a, k));
    return out;
  }

  // Sample (anchor, side) pairs; with enough budget every single cell is kept
  // and the remainder is drawn from the multi-cell cubes.
  const bool keep_singles = budget >= g.cells();
  const std::size_t skip = keep_singles ? 1 : 0;
  std::vector<std::size_t> prefix(anc.size() + 1, 0);
  for (std::size_t i = 0; i < anc.size(); ++i) prefix[i + 1] = prefix[i] + (anc[i].count - std::min(skip, anc[i].count));
  std::set<std::pair<std::size_t, std::size_t>> chosen;
  if (keep_singles)
    for (std::size_t i = 0; i < anc.size(); ++i) chosen.insert({i, 1});
  Rng rng(seed);
  while (chosen.size() < budget) {
    const std::size_t r = rng.index(prefix.back());
    const std::size_t i = static_cast<std::size_t>(std::upper_bound(prefix.begin(), prefix.end(), r) - prefix.begin()) - 1;
    chosen.insert({i, r - prefix[i] + 1 + skip});
  }
  out.reserve(chosen.size());
  for (const auto& [i, k] : chosen) out.push_back(anchored(g, anc[i], k));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Segment {
  std::size_t lo, hi;
};

std::vector<Segment> dyadic_segments(const Grid& g, int axis, double side, double shift) {
  const double a = g.lower(axis), b = g.upper(axis);
  std::vector<double> cuts{a};
  // lattice points k*side - shift strictly inside (a, b)
  double k = std::floor((a + shift) / side);
  for (;; k += 1.0) {
    const double x = k * side - shift;
    if (x >= b) break;
    if (x > a && std::abs(x - a) > 1e-9 * std::max(1.0, std::abs(a))) cuts.push_back(x);
  }
  if (std::abs(cuts.back() - b) <= 1e-9 * std::max(1.0, std::abs(b))) cuts.pop_back();
  cuts.push_back(b);
  std::vector<Segment> seg;
  std::size_t prev = 0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const auto e = g.edge_index(axis, cuts[i]);
    if (!e) throw InvalidArgument("grid is not aligned with the shifted dyadic lattice");
    seg.push_back({prev, *e});
    prev = *e;
  }
  return seg;
}

}  // namespace

std::vector<DyadicCube> dyadic_lattice(const Grid& g, const DyadicFamily& family) {
  if (family.max_level < 0) throw InvalidArgument("dyadic max level must be non-negative");
  std::vector<DyadicCube> out;
  std::vector<std::vector<Segment>> prev_axes;
  std::size_t prev_begin = 0;
  for (int z = 0; z <= family.max_level; ++z) {
    const double side = std::ldexp(1.0, -z);
    std::vector<std::vector<Segment>> axes;
    for (int a = 0; a < g.dim(); ++a) axes.push_back(dyadic_segments(g, a, side, family.shift[a]));
    if (g.dim() == 1) axes.push_back({{0, 1}});
    const std::size_t begin = out.size();
    for (std::size_t sy = 0; sy < axes[1].size(); ++sy)
      for (std::size_t sx = 0; sx < axes[0].size(); ++sx) {
        DyadicCube d;
        d.cube = make_cube(g, {axes[0][sx].lo, axes[1][sy].lo}, {axes[0][sx].hi, axes[1][sy].hi});
        d.level = z;
        if (z > 0) {
          std::array<std::size_t, 2> pidx{};
          for (int a = 0; a < 2; ++a) {
            const auto& ps = prev_axes[a];
            const std::size_t lo = a == 0 ? axes[0][sx].lo : axes[1][sy].lo;
            auto it = std::upper_bound(ps.begin(), ps.end(), lo, [](std::size_t v, const Segment& s) { return v < s.hi; });
            pidx[a] = static_cast<std::size_t>(it - ps.begin());
          }
          d.parent = static_cast<std::ptrdiff_t>(prev_begin + pidx[0] + prev_axes[0].size() * pidx[1]);
        }
        out.push_back(d);
      }
    prev_axes = std::move(axes);
    prev_begin = begin;
  }
  return out;
}

std::vector<Cube> dyadic_cubes(const Grid& g, const DyadicFamily& family) {
  std::vector<Cube> out;
  for (const auto& d : dyadic_lattice(g, family)) out.push_back(d.cube);
  return out;
}

int dyadic_resolution_level(const Grid& g) {
  double h = std::numeric_limits<double>::infinity();
  for (int a = 0; a < g.dim(); ++a)
    for (double w : g.widths(a)) h = std::min(h, w);
  const int z = static_cast<int>(std::lround(-std::log2(h)));
  return std::max(z, 0);
}

}  // namespace vlp

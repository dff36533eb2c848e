#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace vlp {

/// Thrown when an argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Cell decomposition of a 1D interval or a 2D box.
 *
 * Cells are indexed linearly; in 2D the index is ix + nx * iy. 1D grids
 * may be nonuniform, 2D grids must be uniform on each axis. Immutable
 * after construction and shared between functions via GridPtr.
 */
class Grid {
 public:
  static Grid make(int dim, std::vector<std::vector<double>> boundaries);
  static Grid uniform(double a, double b, std::size_t n);
  static Grid uniform2d(double ax, double bx, std::size_t nx, double ay, double by, std::size_t ny);

  int dim() const { return dim_; }
  std::size_t cells() const { return volumes_.size(); }
  std::size_t cells(int axis) const { return edges_[axis].size() - 1; }

  std::span<const double> edges(int axis) const { return edges_[axis]; }
  std::span<const double> widths(int axis) const { return widths_[axis]; }
  std::span<const double> volumes() const { return volumes_; }
  double volume(std::size_t cell) const { return volumes_[cell]; }

  double lower(int axis) const { return edges_[axis].front(); }
  double upper(int axis) const { return edges_[axis].back(); }
  double center(int axis, std::size_t i) const { return 0.5 * (edges_[axis][i] + edges_[axis][i + 1]); }
  /// Cell midpoint; the second coordinate is 0 for 1D grids.
  std::array<double, 2> midpoint(std::size_t cell) const;

  std::size_t index(std::size_t ix, std::size_t iy) const { return ix + cells(0) * iy; }
  std::array<std::size_t, 2> coords(std::size_t cell) const;

  double total_volume() const { return total_volume_; }
  double min_cell_volume() const { return min_volume_; }
  bool is_uniform(int axis) const;
  /// Uniform spacing along an axis; throws for nonuniform axes.
  double spacing(int axis) const;

  /// Index of the cell containing x along an axis, clamped to the grid.
  std::size_t locate(int axis, double x) const;
  /// Index of the boundary equal to x up to a relative tolerance, if any.
  std::optional<std::size_t> edge_index(int axis, double x, double rel_tol = 1e-9) const;

  bool operator==(const Grid& other) const;

 private:
  Grid() = default;
  void finalize();

  int dim_ = 1;
  std::array<std::vector<double>, 2> edges_;
  std::array<std::vector<double>, 2> widths_;
  std::vector<double> volumes_;
  double total_volume_ = 0.0;
  double min_volume_ = 0.0;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr share(Grid g) { return std::make_shared<const Grid>(std::move(g)); }

/// Piecewise-constant real field, one finite value per cell.
class GridFunction {
 public:
  GridFunction(GridPtr grid, std::vector<double> values);

  static GridFunction constant(GridPtr grid, double c);
  /// Samples fn at cell midpoints.
  template <class Fn>
  static GridFunction sample(GridPtr grid, Fn&& fn) {
    std::vector<double> v(grid->cells());
    for (std::size_t c = 0; c < v.size(); ++c) v[c] = fn(grid->midpoint(c));
    return GridFunction(std::move(grid), std::move(v));
  }

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t c) const { return values_[c]; }
  std::size_t size() const { return values_.size(); }

  double max_abs() const;
  GridFunction abs() const;
  GridFunction scaled(double c) const;
  /// Multiplies by the indicator of a set of cells.
  GridFunction masked(std::span<const std::uint8_t> keep) const;

  bool same_grid(const GridFunction& other) const;

  friend GridFunction operator+(const GridFunction& a, const GridFunction& b);
  friend GridFunction operator-(const GridFunction& a, const GridFunction& b);
  friend GridFunction operator*(const GridFunction& a, const GridFunction& b);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Exact integral of the piecewise-constant model.
double integrate(const GridFunction& f);

/// Axis-aligned box of cells, half-open index ranges per axis.
struct Cube {
  std::array<std::size_t, 2> lo{0, 0};
  std::array<std::size_t, 2> hi{1, 1};
  double volume = 0.0;

  std::size_t side(int axis) const { return hi[axis] - lo[axis]; }
  std::size_t cell_count() const { return side(0) * side(1); }
  bool contains(const std::array<std::size_t, 2>& ij) const {
    return ij[0] >= lo[0] && ij[0] < hi[0] && ij[1] >= lo[1] && ij[1] < hi[1];
  }
  bool same_cells(const Cube& o) const { return lo == o.lo && hi == o.hi; }
};

Cube make_cube(const Grid& g, std::array<std::size_t, 2> lo, std::array<std::size_t, 2> hi);
Cube make_interval(const Grid& g, std::size_t lo, std::size_t hi);
Cube whole_domain(const Grid& g);
/// Volume summed left to right along each axis; every kernel uses this order.
double cube_volume(const Grid& g, const std::array<std::size_t, 2>& lo, const std::array<std::size_t, 2>& hi);
double min_cell_volume(const Grid& g, const Cube& q);

/// Visits the linear cell indices of a cube in row-major order (x fastest).
template <class Fn>
void for_each_cell(const Grid& g, const Cube& q, Fn&& fn) {
  for (std::size_t iy = q.lo[1]; iy < q.hi[1]; ++iy)
    for (std::size_t ix = q.lo[0]; ix < q.hi[0]; ++ix) fn(g.index(ix, iy));
}

/// Volume cap with one cell of slack: volume < cap + slack.
inline bool within_cap(double volume, double slack, double cap) {
  return volume < cap + slack - 1e-12 * cap;
}

/// Local cube test used throughout: |Q| <= 1 up to one cell of slack.
inline bool is_local(const Grid& g, const Cube& q) { return within_cap(q.volume, min_cell_volume(g, q), 1.0); }

/// Disjoint covering family of cubes.
struct Partition {
  std::vector<Cube> cubes;
  bool local = false;
};

struct EqualCubes {
  double side = 1.0;
};
/// Random binary splits until every piece is local, then further splits at random.
struct RandomLocal {
  std::uint64_t seed = 0;
};
/// Greedy tiling with log-uniform random sides up to max_side.
struct RandomGlobal {
  std::uint64_t seed = 0;
  double max_side = 0.0;  // 0 means the whole domain extent
};
struct ExplicitCubes {
  std::vector<Cube> cubes;
};
using PartitionSpec = std::variant<EqualCubes, RandomLocal, RandomGlobal, ExplicitCubes>;

Partition make_partition(const Grid& g, const PartitionSpec& spec);
/// Validates disjointness and coverage and sets the local flag.
Partition finish_partition(const Grid& g, std::vector<Cube> cubes);
/// Cube index owning each cell.
std::vector<std::size_t> cell_owner(const Grid& g, const Partition& part);

/**
 * Enumerates index-aligned cubes (intervals in 1D, index squares in 2D).
 *
 * Exhaustive when the family fits the budget. Otherwise a seeded sample of
 * exactly `budget` distinct cubes; when budget >= cell count the sample
 * contains every single-cell cube.
 */
std::vector<Cube> enum_cubes(const Grid& g, std::optional<double> max_volume, std::size_t budget,
                             std::uint64_t seed);

struct DyadicFamily {
  int max_level = 0;
  std::array<double, 2> shift{0.0, 0.0};
};

struct DyadicCube {
  Cube cube;
  int level = 0;
  std::ptrdiff_t parent = -1;  // index into the same lattice vector, -1 at level 0
};

/// Shifted dyadic cubes 2^-z((0,1)^n + k) - t clipped to the domain, level by level.
std::vector<DyadicCube> dyadic_lattice(const Grid& g, const DyadicFamily& family);
std::vector<Cube> dyadic_cubes(const Grid& g, const DyadicFamily& family);
/// Finest level whose side matches the smallest cell width, for uniform dyadic grids.
int dyadic_resolution_level(const Grid& g);

}  // namespace vlp

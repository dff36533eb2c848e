#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vlp/maximal.hpp"
#include "vlp/reference.hpp"

using namespace vlp;

namespace {

GridFunction indicator(const GridPtr& g, double a, double b) {
  return GridFunction::sample(g, [a, b](const std::array<double, 2>& x) { return x[0] >= a && x[0] < b ? 1.0 : 0.0; });
}

GridFunction random_function(const GridPtr& g, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(g->cells());
  for (auto& x : v) x = u(gen);
  return GridFunction(g, std::move(v));
}

}  // namespace

TEST_CASE("constants are fixed points") {
  const auto g = share(Grid::uniform(-3.0, 3.0, 48));
  const auto c = GridFunction::constant(g, 1.75);
  for (const MaximalSpec& spec : {MaximalSpec{}, MaximalSpec{true, 1.0}, MaximalSpec{false, 2.5}, MaximalSpec{true, 1.0, Dyadic{}}}) {
    const auto m = maximal(c, spec);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(m[i] == doctest::Approx(1.75).epsilon(1e-14));
  }
  const auto avg = shifted_dyadic_average_bound(c, 1.0, shift_lattice(1, 5));
  for (std::size_t i = 0; i < avg.size(); ++i) CHECK(avg[i] == doctest::Approx(1.75).epsilon(1e-14));
}

TEST_CASE("indicator windows") {
  const double h = 1.0 / 16.0;
  const auto g = share(Grid::uniform(-2.0, 3.0, 80));
  const auto f = indicator(g, 0.0, 1.0);
  // the cell ending at x = 1.5
  const std::size_t c = g->locate(0, 1.5 - 0.5 * h);
  CHECK(maximal(f, MaximalSpec{true, 1.0})[c] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(maximal(f, MaximalSpec{false, 1.0})[c] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  // q = 2 on an indicator is the square root of the q = 1 value
  CHECK(maximal(f, MaximalSpec{false, 2.0})[c] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("unshifted dyadic cubes do not cross integers") {
  const auto g = share(Grid::uniform(-2.0, 3.0, 40));
  const auto f = indicator(g, 0.0, 1.0);
  const auto m = maximal(f, MaximalSpec{true, 1.0, Dyadic{}});
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double x = g->center(0, i);
    if (x > 1.0 && x < 2.0) CHECK(m[i] == 0.0);
    if (x > 0.0 && x < 1.0) CHECK(m[i] == 1.0);
  }
  // one shift underestimates the local maximal function just right of 1
  const auto lone = shifted_dyadic_average_bound(f, 1.0, {{0.0, 0.0}});
  const auto loc = maximal(f, MaximalSpec{true, 1.0});
  const std::size_t c = g->locate(0, 1.05);
  CHECK(lone[c] == 0.0);
  CHECK(loc[c] > 0.5);
}

TEST_CASE("kernels agree with the brute-force reference") {
  const auto g1 = share(Grid::uniform(-4.0, 4.0, 37));
  const auto g2 = share(Grid::uniform2d(-2.0, 2.0, 9, -1.0, 1.0, 6));
  const auto nonuni = share(Grid::make(1, {{-2.0, -1.5, -1.2, 0.0, 0.1, 0.8, 2.0, 2.05, 3.0}}));
  for (const auto& g : {g1, g2, nonuni}) {
    const auto f = random_function(g, 11);
    for (const MaximalSpec& spec : {MaximalSpec{}, MaximalSpec{true, 1.0}, MaximalSpec{false, 1.7}, MaximalSpec{true, 2.0}}) {
      const auto fast = maximal(f, spec);
      const auto slow = reference::maximal(f, spec);
      for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == slow[i]);
    }
  }
  const auto g32 = share(Grid::uniform(-4.0, 4.0, 32));
  const auto f = random_function(g32, 3);
  const MaximalSpec dy{true, 1.0, Dyadic{{0.5, 0.0}, std::nullopt}};
  const auto fast = maximal(f, dy);
  const auto slow = reference::maximal(f, dy);
  for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == slow[i]);
}

TEST_CASE("maximal dominates |f|") {
  const auto g = share(Grid::uniform(-4.0, 4.0, 64));
  const auto f = random_function(g, 5);
  const auto m = maximal(f, MaximalSpec{true, 1.0});
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(m[i] >= std::abs(f[i]));
}

TEST_CASE("invalid specs") {
  CHECK_THROWS_AS(validate(MaximalSpec{false, 0.5}), InvalidArgument);
  const auto g = share(Grid::uniform(0.0, 2.0, 4));
  CHECK_THROWS_AS(maximal(GridFunction::constant(g, 1.0), MaximalSpec{true, 1.0, Dyadic{{0.3, 0.0}, std::nullopt}}), InvalidArgument);
}

TEST_CASE("averaging") {
  const auto g = share(Grid::uniform(0.0, 2.0, 2));
  const auto f = GridFunction(g, {0.5, 1.5});
  const auto fine = averaging(f, make_partition(*g, EqualCubes{1.0}));
  CHECK(fine[0] == 0.5);
  CHECK(fine[1] == 1.5);
  const auto coarse = averaging(f, make_partition(*g, ExplicitCubes{{make_interval(*g, 0, 2)}}));
  CHECK(coarse[0] == 1.0);
  CHECK(coarse[1] == 1.0);
  const auto c = averaging(GridFunction::constant(g, 0.3), make_partition(*g, ExplicitCubes{{make_interval(*g, 0, 2)}}));
  CHECK(c[0] == 0.3);
}

TEST_CASE("split at level") {
  const auto g = share(Grid::uniform(0.0, 2.0, 2));
  const auto f = GridFunction(g, {0.2, 0.8});
  auto [lo, hi] = split_at_level(f, 0.5);
  CHECK(lo[0] == 0.2);
  CHECK(lo[1] == 0.0);
  CHECK(hi[0] == 0.0);
  CHECK(hi[1] == 0.8);
  std::tie(lo, hi) = split_at_level(f, 0.8);
  CHECK(lo[1] == 0.8);
  CHECK(hi[1] == 0.0);
  std::tie(lo, hi) = split_at_level(f, 5.0);
  CHECK(hi.max_abs() == 0.0);
}

TEST_CASE("Calderon-Zygmund cubes") {
  const auto g = share(Grid::uniform(-2.0, 3.0, 20));
  const auto f = indicator(g, 0.0, 1.0);
  const auto cz = cz_decompose(f, 0.6, 1.0);
  REQUIRE(cz.size() == 1);
  CHECK(g->edges(0)[cz[0].cube.lo[0]] == 0.0);
  CHECK(g->edges(0)[cz[0].cube.hi[0]] == 1.0);
  CHECK(cz[0].mean == 1.0);
  CHECK(cz_decompose(f, 2.5, 1.0).empty());

  // the union is exactly where the dyadic maximal exceeds lambda / 2
  const auto r = random_function(g, 8);
  const double lambda = 1.4;
  const auto cubes = cz_decompose(r, lambda, 1.0);
  std::vector<int> hits(g->cells(), 0);
  for (const auto& c : cubes) for_each_cell(*g, c.cube, [&](std::size_t k) { ++hits[k]; });
  const auto md = maximal(r, MaximalSpec{true, 1.0, Dyadic{}});
  for (std::size_t i = 0; i < hits.size(); ++i) {
    CHECK(hits[i] <= 1);
    CHECK((hits[i] == 1) == (md[i] > lambda / 2.0));
  }
}

TEST_CASE("vector maximal") {
  const auto g = share(Grid::uniform(-2.0, 2.0, 32));
  const auto f = random_function(g, 1);
  const auto h = random_function(g, 2);
  const MaximalSpec spec{true, 1.0};
  const auto mf = maximal(f, spec);
  const auto mh = maximal(h, spec);
  const auto one = vector_maximal({f}, 2.0, spec);
  const auto dup = vector_maximal({f, f}, 2.0, spec);
  const auto pair = vector_maximal({f, h}, 2.0, spec);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(one[i] == doctest::Approx(mf[i]).epsilon(1e-14));
    CHECK(dup[i] == doctest::Approx(std::sqrt(2.0) * mf[i]).epsilon(1e-14));
    CHECK(pair[i] == doctest::Approx(std::hypot(mf[i], mh[i])).epsilon(1e-14));
  }
}

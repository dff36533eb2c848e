#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vlp/exponent.hpp"

using namespace vlp;

namespace {

constexpr double kPi26 = std::numbers::pi * std::numbers::pi / 6.0;

}  // namespace

TEST_CASE("constant and log-Holder exponents") {
  const auto g = share(Grid::uniform(-4.0, 4.0, 16));
  const auto c = build_exponent(g, ConstantExponent{2.0});
  CHECK(c.p_minus() == 2.0);
  CHECK(c.p_plus() == 2.0);
  CHECK_THROWS_AS(build_exponent(g, ConstantExponent{1.0}), InvalidArgument);

  const auto lh = build_exponent(g, LogHolderExponent{2.0, 1.0});
  REQUIRE(lh.descriptor());
  CHECK(lh.descriptor()->eval({0.0, 0.0}) == doctest::Approx(3.0));
  CHECK(lh.p_plus() == doctest::Approx(3.0));
  for (std::size_t i = 0; i < lh.size(); ++i) {
    const double x = g->center(0, i);
    CHECK(lh[i] == doctest::Approx(2.0 + 1.0 / std::log(std::numbers::e + std::abs(x))).epsilon(1e-14));
  }
}

TEST_CASE("absolutely continuous exponent integrates its density") {
  const auto g = share(Grid::uniform(-2.0, 3.0, 20));
  const auto density = GridFunction::sample(g, [](const std::array<double, 2>& x) { return x[0] > 0.0 && x[0] < 1.0 ? 1.0 : 0.0; });
  const auto p = build_exponent(g, AcExponent{2.0, density});
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = g->center(0, i);
    const double expect = x <= 0.0 ? 2.0 : x >= 1.0 ? 3.0 : 2.0 + x;
    CHECK(p[i] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("Lerner p0") {
  CHECK(std::abs(lerner_p0(0.0) - kPi26) <= 1e-12);
  CHECK(std::abs(lerner_p0(std::exp(8.0)) - (kPi26 - 1.0)) <= 1e-12);
  // above every retained interval only the tail constant remains
  const double tail = kPi26 - 1.0 - 0.25 - 1.0 / 9.0;
  CHECK(lerner_p0(std::exp(100.0)) == doctest::Approx(tail).epsilon(1e-12));
  // inside interval 1: integral of 1/s from log x to e^{1}
  const double x = std::exp(1.5);
  const double expect = std::log(std::exp(1.0)) - std::log(1.5) + (kPi26 - 1.0);
  CHECK(lerner_p0(x) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(lerner_p0(-x) == lerner_p0(x));
}

TEST_CASE("Lerner intervals and grid") {
  const auto [t1, m1] = lerner_interval(1);
  CHECK(t1 == doctest::Approx(std::numbers::e));
  CHECK(m1 == doctest::Approx(std::exp(std::numbers::e)));
  const auto g = lerner_grid(3);
  for (int k = 1; k <= 3; ++k) {
    const auto [a, b] = lerner_interval(k);
    CHECK(g.edge_index(0, a).has_value());
    CHECK(g.edge_index(0, b).has_value());
    CHECK(g.edge_index(0, -a).has_value());
  }
  const auto gp = share(Grid::make(1, {{-1.0, 0.0, 1.0}}));
  const auto p = lerner_exponent(gp, 2.0, 1.0, 3);
  REQUIRE(p.descriptor());
  CHECK(p.descriptor()->eval({0.0, 0.0}) == doctest::Approx(2.0 + kPi26));
  const auto far = lerner_exponent(share(Grid::make(1, {{1e60, 1e61}})), 2.0, 0.6, 3);
  // beyond e^{64} only the tail contributes: 0.6 (2 + tail)
  CHECK(far[0] == doctest::Approx(0.6 * (2.0 + kPi26 - 1.0 - 0.25 - 1.0 / 9.0)));
}

TEST_CASE("conjugate exponent") {
  const auto g = share(Grid::uniform(0.0, 1.0, 4));
  CHECK(conjugate_exponent(build_exponent(g, ConstantExponent{2.0}))[0] == 2.0);
  CHECK(conjugate_exponent(build_exponent(g, ConstantExponent{3.0}))[0] == doctest::Approx(1.5));
  CHECK(conjugate_exponent(build_exponent(g, ConstantExponent{4.0 / 3.0}))[0] == doctest::Approx(4.0));
}

TEST_CASE("cube mean exponent") {
  const auto g = share(Grid::uniform(0.0, 2.0, 2));
  const Exponent p = Exponent::from_samples(GridFunction(g, {2.0, 4.0}));
  CHECK(cube_mean_exponent(p, make_interval(*g, 0, 2)) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK(cube_mean_exponent(p, make_interval(*g, 1, 2)) == 4.0);
  const auto c = build_exponent(g, ConstantExponent{1.7});
  CHECK(cube_mean_exponent(c, make_interval(*g, 0, 2)) == doctest::Approx(1.7).epsilon(1e-15));
}

TEST_CASE("remapping") {
  const auto id = PiecewiseLinearMap::identity();
  CHECK(id.forward(3.5) == 3.5);
  CHECK(id.inverse(-2.0) == -2.0);

  const PiecewiseLinearMap twice({{0.0, 0.0}, {1.0, 2.0}, {2.0, 4.0}});
  CHECK(twice.forward(1.5) == 3.0);
  CHECK(twice.inverse(3.0) == 1.5);
  CHECK_THROWS_AS(PiecewiseLinearMap({{0.0, 0.0}, {1.0, 0.0}}), InvalidArgument);

  const auto src = share(Grid::uniform(-2.0, 2.0, 8));
  const auto step = Exponent::from_samples(GridFunction::sample(src, [](const std::array<double, 2>& x) { return x[0] < 0.0 ? 2.0 : 3.0; }));
  const auto same = remap_exponent(step, id, src);
  for (std::size_t i = 0; i < step.size(); ++i) CHECK(same[i] == step[i]);

  // x -> 2x keeps the jump at 0 and doubles the plateau on the right
  const auto target = share(Grid::uniform(-2.0, 4.0, 12));
  const PiecewiseLinearMap stretch({{0.0, 0.0}, {2.0, 4.0}});
  const auto moved = remap_exponent(step, stretch, target);
  for (std::size_t i = 0; i < moved.size(); ++i) CHECK(moved[i] == (target->center(0, i) < 0.0 ? 2.0 : 3.0));
}

TEST_CASE("regularity diagnostics") {
  const auto g = share(Grid::uniform(-64.0, 64.0, 512));
  const auto p = build_exponent(g, LogHolderExponent{2.0, 1.0});
  const auto r = regularity_report(p, 2.0, 0.5);
  CHECK(r.decay_modulus <= 1.0 + 1e-12);
  CHECK(r.decay_modulus >= 0.999);
  CHECK(std::isfinite(r.nekvinda_value));

  // a jump of 1 between adjacent cells of width h: modulus log(1/h)
  double prev = 0.0;
  for (std::size_t n : {64, 256, 1024}) {
    const auto gs = share(Grid::uniform(-1.0, 1.0, n));
    const auto ps = Exponent::from_samples(GridFunction::sample(gs, [](const std::array<double, 2>& x) { return x[0] < 0.0 ? 2.0 : 3.0; }));
    const double h = 2.0 / static_cast<double>(n);
    const double m = regularity_report(ps, 2.0, 0.5).local_modulus;
    CHECK(m == doctest::Approx(std::log(1.0 / h)).epsilon(1e-12));
    CHECK(m > prev);
    prev = m;
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vlp/conditions.hpp"
#include "vlp/maximal.hpp"

using namespace vlp;

namespace {

// lambda with lambda^{-a} + lambda^{-b} = 1, by bisection.
double two_term_root(double a, double b) {
  double lo = 1.0, hi = 100.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (std::pow(mid, -a) + std::pow(mid, -b) > 1.0 ? lo : hi) = mid;
  }
  return hi;
}

std::vector<double> random_values(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

}  // namespace

TEST_CASE("probe reduction keeps the best witnesses") {
  const auto r = reduce_probe(ProbeKind::sup, {1.0, 3.0, 3.0, 2.0}, {"a", "b", "c", "d"}, 4, 4, 3);
  CHECK(r.estimate == 3.0);
  REQUIRE(r.witnesses.size() == 3);
  CHECK(r.witnesses[0].id == "b");
  CHECK(r.witnesses[1].id == "c");
  CHECK(r.witnesses[2].id == "d");
  const auto lo = reduce_probe(ProbeKind::inf, {1.0, 0.5}, {"a", "b"}, 0, 2);
  CHECK(lo.estimate == 0.5);
  CHECK_THROWS_AS(reduce_probe(ProbeKind::sup, {1.0}, {}, 0, 1), InvalidArgument);
}

TEST_CASE("A_p constant") {
  const auto g = share(Grid::uniform(-2.0, 2.0, 16));
  CHECK(apx_constant(build_exponent(g, ConstantExponent{3.0}), false, 1000, 0).estimate == doctest::Approx(1.0).epsilon(1e-9));
  const auto lh = apx_constant(build_exponent(g, LogHolderExponent{2.0, 1.0}), false, 1000, 0);
  CHECK(lh.estimate >= 0.5);
  CHECK(lh.samples == 136);

  // two unit cells with p = 2 and 4: single cells give 1, the union falls below
  const auto two = share(Grid::uniform(0.0, 2.0, 2));
  const auto p = Exponent::from_samples(GridFunction(two, {2.0, 4.0}));
  const double expect = 0.5 * two_term_root(2.0, 4.0) * two_term_root(2.0, 4.0 / 3.0);
  const auto all = apx_constant(p, false, 100, 0);
  CHECK(all.estimate == doctest::Approx(1.0).epsilon(1e-10));
  REQUIRE(all.witnesses.size() == 3);
  CHECK(all.witnesses[2].value == doctest::Approx(expect).epsilon(1e-10));
  CHECK(apx_constant(p, true, 100, 0).estimate == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("A_p^loc weights") {
  const auto g = share(Grid::uniform(0.0, 1.0, 2));
  CHECK(aploc_weight_constant(Weight(GridFunction::constant(g, 1.0)), 3.0, 100, 0).estimate == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(aploc_weight_constant(Weight(GridFunction::constant(g, 7.0)), 1.5, 100, 0).estimate == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(aploc_weight_constant(Weight(GridFunction(g, {1.0, 4.0})), 2.0, 100, 0).estimate == doctest::Approx(25.0 / 16.0).epsilon(1e-14));
  const auto z = share(Grid::uniform(0.0, 2.0, 2));
  CHECK(aploc_weight_constant(Weight(GridFunction(z, {0.0, 1.0})), 2.0, 100, 0).estimate == INFINITY);
  CHECK_THROWS_AS(Weight(GridFunction::constant(g, 0.0)), InvalidArgument);
}

TEST_CASE("operator norm probes") {
  const auto g = share(Grid::uniform(-8.0, 8.0, 128));
  const auto p2 = build_exponent(g, ConstantExponent{2.0});
  const auto t = operator_norm_probe(OperatorTag::t_global, p2, TestFamily::mixed, 40, 1);
  CHECK(t.estimate <= 1.0 + 1e-12);
  CHECK(t.samples == 40);
  const auto m = operator_norm_probe(OperatorTag::m_local, p2, TestFamily::random_steps, 20, 1);
  CHECK(m.estimate >= 1.0);
  const auto again = operator_norm_probe(OperatorTag::m_local, p2, TestFamily::random_steps, 20, 1);
  CHECK(again.estimate == m.estimate);
  CHECK(again.witnesses[0].id == m.witnesses[0].id);
}

TEST_CASE("global maximal ratio of an indicator grows with the domain") {
  double prev = 0.0;
  for (double r : {4.0, 16.0, 64.0}) {
    const auto g = share(Grid::uniform(-r, r, static_cast<std::size_t>(16.0 * r)));
    const auto p = build_exponent(g, ConstantExponent{2.0});
    const auto f = GridFunction::sample(g, [](const std::array<double, 2>& x) { return x[0] >= 0.0 && x[0] < 1.0 ? 1.0 : 0.0; });
    const double ratio = luxemburg_norm(maximal(f, MaximalSpec{}), p) / luxemburg_norm(f, p);
    CHECK(ratio > prev);
    prev = ratio;
  }
}

TEST_CASE("partition ratio") {
  const auto g = share(Grid::uniform(-4.0, 4.0, 32));
  const auto part = make_partition(*g, RandomLocal{3});
  const auto t = random_values(part.cubes.size(), 4);
  for (double q : {1.5, 2.0, 4.0}) {
    const auto r = estimate_ratio(t, part, build_exponent(g, ConstantExponent{q}));
    CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-8));
  }
  const auto lh = build_exponent(g, LogHolderExponent{2.0, 1.0});
  const auto zero = estimate_ratio(std::vector<double>(part.cubes.size(), 0.0), part, lh);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK(zero.ratio == 1.0);
  const auto r = estimate_ratio(t, part, lh);
  CHECK(r.ratio > 0.2);
  CHECK(r.ratio < 5.0);
  CHECK_THROWS_AS(estimate_ratio({1.0}, part, lh), InvalidArgument);
}

TEST_CASE("local to global ratio") {
  const auto g = share(Grid::uniform(-4.0, 4.0, 32));
  const auto f = GridFunction(g, random_values(32, 9));
  CHECK(local_to_global_ratio(f, build_exponent(g, ConstantExponent{3.0}), 3.0, 1.0).ratio == doctest::Approx(1.0).epsilon(1e-8));
  const auto lh = build_exponent(g, LogHolderExponent{2.0, 1.0});
  const auto one = GridFunction::sample(g, [](const std::array<double, 2>& x) { return x[0] >= 1.0 && x[0] < 2.0 ? 1.0 + x[0] : 0.0; });
  CHECK(local_to_global_ratio(one, lh, 2.0, 1.0).ratio == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(local_to_global_ratio(one, lh, 2.0, 0.0), InvalidArgument);
}

TEST_CASE("domination with a constant exponent reproduces A1") {
  const auto g = share(Grid::uniform(-2.0, 2.0, 16));
  DominationOptions opt;
  opt.a1 = 1.0;
  const auto rep = domination_probe(build_exponent(g, ConstantExponent{2.0}), opt, 10, 2);
  CHECK(rep.unattainable == 0);
  CHECK(rep.report.estimate == doctest::Approx(1.0).epsilon(1e-2));
  opt.a1 = 0.0;
  CHECK_THROWS_AS(domination_probe(build_exponent(g, ConstantExponent{2.0}), opt, 10, 2), InvalidArgument);
}

TEST_CASE("A_infinity probe") {
  const auto g = share(Grid::uniform(-2.0, 2.0, 16));
  const auto lh = build_exponent(g, LogHolderExponent{2.0, 1.0});
  CHECK(ainfty_probe(lh, 1.0, 20, 0).estimate == doctest::Approx(1.0).epsilon(1e-12));
  const auto half = ainfty_probe(lh, 0.5, 50, 0);
  CHECK(half.estimate > 0.0);
  CHECK(half.estimate <= 1.0 + 1e-12);
  CHECK_THROWS_AS(ainfty_probe(lh, 0.0, 20, 0), InvalidArgument);
}

TEST_CASE("highest interval met") {
  const auto g = Grid::uniform(0.0, 10.0, 10);
  const std::vector<std::pair<double, double>> iv{{1.0, 2.0}, {4.0, 5.0}, {7.0, 8.0}};
  CHECK(highest_interval_met(g, make_interval(g, 0, 1), iv) == 0);
  CHECK(highest_interval_met(g, make_interval(g, 0, 2), iv) == 1);
  CHECK(highest_interval_met(g, make_interval(g, 2, 4), iv) == 0);
  CHECK(highest_interval_met(g, make_interval(g, 1, 8), iv) == 3);
  CHECK(highest_interval_met(g, make_interval(g, 4, 5), iv) == 2);
}

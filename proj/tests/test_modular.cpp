#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "vlp/modular.hpp"
#include "vlp/reference.hpp"

using namespace vlp;

namespace {

const double kGolden = std::sqrt((1.0 + std::sqrt(5.0)) / 2.0);

GridPtr unit_cells(std::size_t n) { return share(Grid::uniform(0.0, static_cast<double>(n), n)); }

Exponent steps(const GridPtr& g, std::vector<double> v) { return Exponent::from_samples(GridFunction(g, std::move(v))); }

// Independent bisection on lambda for sum_i lambda^{-p_i} = 1.
double bisect_unit_terms(const std::vector<double>& p) {
  double lo = 1.0, hi = 1e3;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (double e : p) s += std::pow(mid, -e);
    (s > 1.0 ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

TEST_CASE("modular") {
  const auto g = unit_cells(2);
  const auto p3 = build_exponent(g, ConstantExponent{3.0});
  CHECK(modular(GridFunction(g, {1.0, 0.0}), p3) == 1.0);
  CHECK(modular(GridFunction(g, {2.0, 0.0}), p3) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(modular(GridFunction(g, {2.0, 3.0}), steps(g, {2.0, 3.0})) == doctest::Approx(31.0).epsilon(1e-14));
  CHECK(modular(GridFunction(g, {1e300, 1.0}), p3) == kOverflow);
}

TEST_CASE("Luxemburg norm") {
  const auto g = unit_cells(2);
  CHECK(luxemburg_norm(GridFunction(g, {1.0, 0.0}), build_exponent(g, ConstantExponent{2.0})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(luxemburg_norm(GridFunction(g, {2.0, 0.0}), build_exponent(g, ConstantExponent{3.0})) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(luxemburg_norm(GridFunction::constant(g, 0.0), build_exponent(g, ConstantExponent{3.0})) == 0.0);
  const double n = luxemburg_norm(GridFunction(g, {1.0, 1.0}), steps(g, {2.0, 4.0}));
  CHECK(n == doctest::Approx(kGolden).epsilon(1e-12));
  CHECK(n == doctest::Approx(bisect_unit_terms({2.0, 4.0})).epsilon(1e-12));
  CHECK(kGolden == doctest::Approx(1.2720196).epsilon(1e-7));
}

TEST_CASE("norm is homogeneous and unit-modular") {
  const auto g = share(Grid::uniform(-2.0, 2.0, 16));
  const auto p = build_exponent(g, LogHolderExponent{2.0, 1.0});
  const auto f = GridFunction::sample(g, [](const std::array<double, 2>& x) { return 1.0 + x[0] * x[0]; });
  const double n = luxemburg_norm(f, p);
  CHECK(modular(f.scaled(1.0 / n), p) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(luxemburg_norm(f.scaled(7.5), p) == doctest::Approx(7.5 * n).epsilon(1e-12));
}

TEST_CASE("indicator and restricted norms") {
  const auto g = unit_cells(4);
  const auto p = steps(g, {2.0, 4.0, 3.0, 3.0});
  CHECK(indicator_norm(p, make_interval(*g, 0, 2)) == doctest::Approx(kGolden).epsilon(1e-12));
  const auto f = GridFunction(g, {5.0, 5.0, 1.0, 1.0});
  CHECK(restricted_norm(f, p, make_interval(*g, 2, 4)) == doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));
}

TEST_CASE("sequence norm") {
  const std::vector<double> ones{1.0, 1.0};
  CHECK(seq_norm(ones, std::vector<double>{2.0, 2.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(seq_norm(std::vector<double>{0.37}, std::vector<double>{5.5}) == doctest::Approx(0.37).epsilon(1e-12));
  CHECK(seq_norm(ones, std::vector<double>{2.0, 4.0}) == doctest::Approx(kGolden).epsilon(1e-12));
  const std::vector<double> w{4.0, 4.0};
  CHECK(seq_norm(ones, std::vector<double>{2.0, 2.0}, std::span<const double>(w)) ==
        doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
  CHECK(seq_norm(std::vector<double>{0.0, 0.0}, std::vector<double>{2.0, 2.0}) == 0.0);
}

TEST_CASE("conjugate N-function") {
  CHECK(phi_star_eval(2.0, 3.0) == doctest::Approx(9.0 / 4.0).epsilon(1e-14));
  CHECK(phi_star_eval(3.0, 1.0) == doctest::Approx(2.0 * std::pow(3.0, -1.5)).epsilon(1e-14));
  CHECK(phi_star_eval(3.0, 1.0) == doctest::Approx(0.3849002).epsilon(1e-7));
  for (double p : {1.2, 2.0, 5.0}) CHECK(phi_star_eval(p, 0.0) == 0.0);
  // Young: t u <= t^p + phi*(p, u) with equality at u = p t^{p-1}
  for (double p : {1.3, 2.5, 4.0})
    for (double t : {0.1, 1.0, 3.0}) {
      const double u = p * std::pow(t, p - 1.0);
      CHECK(t * u == doctest::Approx(std::pow(t, p) + phi_star_eval(p, u)).epsilon(1e-12));
    }
}

TEST_CASE("s-means") {
  const auto g = unit_cells(2);
  const auto q = make_interval(*g, 0, 2);
  const auto p2 = build_exponent(g, ConstantExponent{2.0});
  for (double t : {0.5, 1.0, 3.0}) {
    CHECK(msq(p2, q, 1.0, t, NKind::phi) == doctest::Approx(t * t).epsilon(1e-14));
    CHECK(msq(p2, q, 2.0, t, NKind::phi) == doctest::Approx(t * t).epsilon(1e-14));
  }
  CHECK(msq(steps(g, {2.0, 4.0}), q, 1.0, 2.0, NKind::phi) == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(msq(steps(g, {2.0, 4.0}), q, 2.0, 2.0, NKind::phi) == doctest::Approx(std::sqrt((16.0 + 256.0) / 2.0)).epsilon(1e-14));
  CHECK(msq(p2, q, 1.0, 1e200, NKind::phi) == kOverflow);

  const auto prof = cube_profile(steps(g, {3.0, 3.0}), q);
  REQUIRE(prof.p.size() == 1);
  CHECK(prof.share[0] == 1.0);
}

TEST_CASE("Legendre transform against a dense sup") {
  const TableSpec spec{1e-6, 1e6, 256};
  const auto quarter = NFunctionTable::tabulate([](double t) { return t * t / 4.0; }, spec);
  CHECK(quarter.convex());
  const auto conj = conj_transform(quarter);
  for (double u : {1e-3, 0.1, 1.0, 7.0, 100.0}) {
    const double oracle = reference::legendre_sup([](double t) { return t * t / 4.0; }, u, 1e-6, 1e6, 600000);
    CHECK(conj(u) == doctest::Approx(u * u).epsilon(1e-3));
    CHECK(conj(u) == doctest::Approx(oracle).epsilon(1e-3));
  }
  const auto sq = conj_transform(NFunctionTable::tabulate([](double t) { return t * t; }, spec));
  for (double u : {1e-2, 1.0, 50.0}) CHECK(sq(u) == doctest::Approx(u * u / 4.0).epsilon(1e-3));

  const auto zero = conj_transform(NFunctionTable::tabulate([](double) { return 0.0; }, spec));
  for (double u : {1e-3, 1.0, 10.0}) CHECK(zero(u) == doctest::Approx(u * 1e6).epsilon(1e-12));

  const auto at = conjugate_at(quarter, 1.0);
  CHECK(at.valid);
  CHECK(at.argmax == doctest::Approx(2.0).epsilon(1e-2));
  CHECK_FALSE(conjugate_at(quarter, 1e6).valid);
}

TEST_CASE("alpha_s") {
  const auto g = unit_cells(2);
  const auto q = make_interval(*g, 0, 2);
  const auto p2 = build_exponent(g, ConstantExponent{2.0});
  for (double t : {1e-2, 1.0, 30.0}) {
    const auto a = alpha_s(p2, q, 1.0, t);
    CHECK(a.valid);
    CHECK(a.value == doctest::Approx(1.0).epsilon(1e-4));
  }
  // constant q != 2: alpha is still 1 (phi and phi* are exact conjugates)
  const auto p3 = build_exponent(g, ConstantExponent{3.0});
  CHECK(alpha_s(p3, q, 2.0, 0.7).value == doctest::Approx(1.0).epsilon(1e-4));
}

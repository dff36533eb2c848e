#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vlp/lpaley.hpp"
#include "vlp/modular.hpp"
#include "vlp/reference.hpp"

using namespace vlp;

namespace {

GridFunction random_function(const GridPtr& g, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n;
  std::vector<double> v(g->cells());
  for (auto& x : v) x = n(gen);
  return GridFunction(g, std::move(v));
}

double l2_squared(const GridFunction& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * f[i] * f.grid().volume(i);
  return s;
}

std::ptrdiff_t offset_of(const GridFunction& g, double h) { return std::lround(g.grid().center(0, 0) / h); }

}  // namespace

TEST_CASE("filters integrate to one and zero") {
  const auto g = Grid::uniform(-8.0, 8.0, 1024);
  const auto fb = build_filterbank(g, 4);
  CHECK(std::abs(integrate(fb.phi0) - 1.0) <= 1e-6);
  CHECK(std::abs(integrate(fb.phi)) <= 1e-6);
  for (const auto& d : fb.dilations) CHECK(std::abs(integrate(d)) <= 1e-6);
  CHECK(std::abs(integrate(fb.kernels[0]) - 1.0) <= 1e-6);
  REQUIRE(fb.kernels.size() == 5);
}

TEST_CASE("dilations shrink the support") {
  const auto g = Grid::uniform(-8.0, 8.0, 1024);
  const auto fb = build_filterbank(g, 4);
  for (int j = 1; j <= 4; ++j) {
    const auto& k = fb.kernels[static_cast<std::size_t>(j)];
    const double r = 2.0 * std::ldexp(1.0, -j);
    for (std::size_t i = 0; i < k.size(); ++i) {
      const double lo = k.grid().edges(0)[i], hi = k.grid().edges(0)[i + 1];
      if (lo >= r || hi <= -r) CHECK(k[i] == 0.0);
    }
  }
}

TEST_CASE("too coarse a grid is rejected") {
  CHECK_THROWS_AS(build_filterbank(Grid::uniform(-8.0, 8.0, 64), 6), InvalidArgument);
  CHECK_THROWS_AS(build_filterbank(Grid::uniform2d(0.0, 1.0, 8, 0.0, 1.0, 8), 0), InvalidArgument);
}

TEST_CASE("telescoping identity") {
  const auto g = Grid::uniform(-8.0, 8.0, 2048);
  const int J = 5;
  const auto fb = build_filterbank(g, J);
  const auto psi = psi_kernel(fb, J);
  REQUIRE(psi.size() == fb.kernels[0].size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    double s = 0.0;
    for (const auto& k : fb.kernels) s += k[i];
    CHECK(std::abs(s - psi[i]) <= 1e-6 * std::max(1.0, std::abs(psi[i])));
  }
}

TEST_CASE("convolution") {
  const auto g = share(Grid::uniform(-4.0, 4.0, 64));
  const double h = 1.0 / 8.0;
  const auto kern = sample_kernel([](double x) { return std::exp(-x * x); }, 1.0, h);
  const std::ptrdiff_t G = offset_of(kern, h);

  // discrete delta at cell 20
  std::vector<double> d(64, 0.0);
  d[20] = 1.0 / h;
  const auto shifted = convolve(GridFunction(g, d), kern);
  for (std::size_t i = 0; i < 64; ++i) {
    const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(i) - 20 - G;
    const double expect = k >= 0 && k < static_cast<std::ptrdiff_t>(kern.size()) ? kern[static_cast<std::size_t>(k)] : 0.0;
    CHECK(std::abs(shifted[i] - expect) <= 1e-10);
  }
  CHECK(convolve(GridFunction::constant(g, 0.0), kern).max_abs() == 0.0);

  const auto f = random_function(g, 1);
  const auto direct = convolve(f, kern, ConvolutionMethod::direct);
  const auto fft = convolve(f, kern, ConvolutionMethod::fft);
  const auto slow = reference::convolve(f.values(), kern.values(), G, h);
  for (std::size_t i = 0; i < 64; ++i) {
    CHECK(std::abs(direct[i] - fft[i]) <= 1e-10);
    CHECK(std::abs(direct[i] - slow[i]) <= 1e-10);
  }
  CHECK_THROWS_AS(convolve(f, sample_kernel([](double) { return 1.0; }, 1.0, 0.1)), InvalidArgument);
}

TEST_CASE("convolution commutes") {
  const double h = 4.0 / 33.0;
  const auto a = sample_kernel([](double x) { return std::cos(3.0 * x) + x; }, 2.0, h);
  const auto b = sample_kernel([](double x) { return std::exp(x); }, 2.0, h);
  REQUIRE(a.size() == b.size());
  // on a symmetric kernel grid of odd size the two orders share one center
  const auto ab = convolve(a, b, ConvolutionMethod::direct);
  const auto ba = convolve(b, a, ConvolutionMethod::fft);
  for (std::size_t i = 0; i < ab.size(); ++i) CHECK(std::abs(ab[i] - ba[i]) <= 1e-10);
}

TEST_CASE("square function") {
  const auto g = share(Grid::uniform(-8.0, 8.0, 1024));
  const auto fb = build_filterbank(*g, 4);
  CHECK(square_function(GridFunction::constant(g, 0.0), fb).max_abs() == 0.0);

  const auto f = smooth_test_function(g, 2.5, 3, 0);
  const auto s = square_function(f, fb);
  const auto s3 = square_function(f.scaled(-3.0), fb);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(s3[i] - 3.0 * s[i]) <= 1e-10 * std::max(1.0, s[i]));

  double parts = 0.0;
  for (const auto& k : fb.kernels) parts += l2_squared(convolve(f, k, ConvolutionMethod::direct));
  CHECK(l2_squared(s) == doctest::Approx(parts).epsilon(1e-9));
}

TEST_CASE("square function commutes with whole-cell translation") {
  const auto g = share(Grid::uniform(-8.0, 8.0, 512));
  const auto fb = build_filterbank(*g, 3);
  const auto f = GridFunction::sample(g, [](const std::array<double, 2>& x) { return std::exp(-4.0 * x[0] * x[0]) * std::cos(5.0 * x[0]); });
  std::vector<double> moved(512, 0.0);
  const std::size_t shift = 37;
  for (std::size_t i = 0; i + shift < 512; ++i) moved[i + shift] = f[i];
  const auto sf = square_function(f, fb);
  const auto sm = square_function(GridFunction(g, moved), fb);
  for (std::size_t i = 100; i + shift < 412; ++i) CHECK(std::abs(sm[i + shift] - sf[i]) <= 1e-10);

  const auto p = build_exponent(g, ConstantExponent{2.0});
  CHECK(luxemburg_norm(sm, p) / luxemburg_norm(GridFunction(g, moved), p) ==
        doctest::Approx(luxemburg_norm(sf, p) / luxemburg_norm(f, p)).epsilon(1e-10));
}

TEST_CASE("square function bracket") {
  const auto g = share(Grid::uniform(-8.0, 8.0, 1024));
  const auto fb = build_filterbank(*g, 4);
  const auto p = build_exponent(g, LogHolderExponent{2.0, 1.0});
  const auto one = sf_equivalence(p, fb, 1, 5);
  CHECK(one.c_low == one.c_high);
  const auto f = smooth_test_function(g, 2.0 * fb.bump.radius + fb.h, 5, 0);
  CHECK(one.c_low == doctest::Approx(luxemburg_norm(square_function(f, fb), p) / luxemburg_norm(f, p)).epsilon(1e-14));
  const auto many = sf_equivalence(p, fb, 6, 5);
  CHECK(many.c_low <= many.c_high);
  CHECK(many.c_low > 0.0);
  CHECK(std::isfinite(many.c_high));
}

TEST_CASE("smooth test functions do not depend on the resolution") {
  const auto coarse = share(Grid::uniform(-8.0, 8.0, 256));
  const auto fine = share(Grid::uniform(-8.0, 8.0, 512));
  const auto a = smooth_test_function(coarse, 2.5, 9, 4);
  const auto b = smooth_test_function(fine, 2.5, 9, 4);
  CHECK(integrate(a) == doctest::Approx(integrate(b)).epsilon(1e-2).scale(1.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = coarse->center(0, i);
    if (x < -5.5 || x > 5.5) CHECK(a[i] == 0.0);
  }
}

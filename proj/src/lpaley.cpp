#include "vlp/lpaley.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <sstream>

#include "vlp/modular.hpp"
#include "vlp/rng.hpp"

namespace vlp {

namespace {

double raw_bump(double u) {
  const double d = 1.0 - u * u;
  return d > 0.0 ? std::exp(-1.0 / d) : 0.0;
}

double bump_mass() {
  static const double mass =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(raw_bump, -1.0, 1.0, 20, 1e-15);
  return mass;
}

double kernel_offset(const GridFunction& g, double h) {
  const double c0 = g.grid().center(0, 0) / h;
  const double G = std::round(c0);
  if (std::abs(c0 - G) > 1e-6) throw InvalidArgument("kernel cell centers are not on the lattice of the spacing");
  return G;
}

double uniform_spacing(const Grid& g) {
  if (g.dim() != 1) throw InvalidArgument("convolution is one-dimensional");
  return g.spacing(0);
}

}  // namespace

double bump_value(const BumpSpec& bump, double x) { return raw_bump(x / bump.radius) / (bump.radius * bump_mass()); }

GridFunction sample_kernel(const std::function<double(double)>& fn, double radius, double h) {
  if (!(radius > 0.0) || !(h > 0.0)) throw InvalidArgument("kernel radius and spacing must be positive");
  const auto K = static_cast<std::size_t>(std::ceil(radius / h - 0.5));
  const std::size_t n = 2 * K + 1;
  std::vector<double> e(n + 1);
  for (std::size_t i = 0; i <= n; ++i) e[i] = (static_cast<double>(i) - static_cast<double>(K) - 0.5) * h;
  auto grid = share(Grid::make(1, {e}));
  std::vector<double> v(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::max(e[i], -radius), b = std::min(e[i + 1], radius);
    if (!(b > a)) continue;
    v[i] = boost::math::quadrature::gauss<double, 20>::integrate(fn, a, b) / (e[i + 1] - e[i]);
  }
  return GridFunction(grid, std::move(v));
}

FilterBank build_filterbank(const Grid& grid, int J, const BumpSpec& bump, bool strict) {
  if (grid.dim() != 1 || !grid.is_uniform(0)) throw InvalidArgument("filter bank needs a uniform 1D grid");
  if (J < 0) throw InvalidArgument("J must be non-negative");
  if (!(bump.radius > 0.0)) throw InvalidArgument("bump radius must be positive");
  const double h = grid.spacing(0);
  const double r = bump.radius;
  const double finest = J == 0 ? 2.0 * r : 4.0 * r * std::ldexp(1.0, -J);
  if (finest / h < 8.0 * (1.0 - 1e-9)) throw InvalidArgument("grid too coarse for level J");

  auto phi0 = [bump](double x) { return bump_value(bump, x); };
  auto phi = [bump](double x) { return bump_value(bump, x) - 0.5 * bump_value(bump, 0.5 * x); };
  auto phi_j = [phi](int j) {
    const double s = std::ldexp(1.0, j);
    return [phi, s](double x) { return s * phi(s * x); };
  };

  FilterBank fb{bump, J, h, strict, GridFunction::constant(share(Grid::uniform(0, 1, 1)), 0.0),
                GridFunction::constant(share(Grid::uniform(0, 1, 1)), 0.0), {}, {}};
  const double hb = std::ldexp(h, J);
  fb.phi0 = sample_kernel(phi0, r, hb);
  fb.phi = sample_kernel(phi, 2.0 * r, hb);
  for (int j = 1; j <= J; ++j) fb.dilations.push_back(sample_kernel(phi_j(j), 2.0 * r * std::ldexp(1.0, -j), std::ldexp(hb, -j)));
  // one kernel grid for every level so the filters can be added cellwise
  fb.kernels.push_back(strict ? sample_kernel(phi, 2.0 * r, h) : sample_kernel(phi0, 2.0 * r, h));
  for (int j = 1; j <= J; ++j) fb.kernels.push_back(sample_kernel(phi_j(j), 2.0 * r, h));
  return fb;
}

GridFunction psi_kernel(const FilterBank& fb, int J) {
  const double s = std::ldexp(1.0, J);
  const BumpSpec bump = fb.bump;
  return sample_kernel([bump, s](double x) { return s * bump_value(bump, s * x); }, 2.0 * bump.radius, fb.h);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> convolve_direct(std::span<const double> f, std::span<const double> g, std::ptrdiff_t G, double h) {
  const auto n = static_cast<std::ptrdiff_t>(f.size()), m = static_cast<std::ptrdiff_t>(g.size());
  std::vector<double> out(f.size(), 0.0);
#pragma omp parallel for schedule(static) if (n > 256)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    // g index i - k - G must lie in [0, m)
    const std::ptrdiff_t k_lo = std::max<std::ptrdiff_t>(0, i - G - m + 1);
    const std::ptrdiff_t k_hi = std::min<std::ptrdiff_t>(n - 1, i - G);
    double s = 0.0;
    for (std::ptrdiff_t k = k_lo; k <= k_hi; ++k) s += f[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(i - k - G)];
    out[static_cast<std::size_t>(i)] = h * s;
  }
  return out;
}

std::vector<double> convolve_fft(std::span<const double> f, std::span<const double> g, std::ptrdiff_t G, double h) {
  const std::size_t n = f.size(), m = g.size();
  const std::size_t L = n + m - 1;
  const std::size_t nc = L / 2 + 1;
  double* a = fftw_alloc_real(L);
  double* b = fftw_alloc_real(L);
  fftw_complex* A = fftw_alloc_complex(nc);
  fftw_complex* B = fftw_alloc_complex(nc);
  fftw_plan pa, pb, inv;
  // planning is not thread safe; execution is
#pragma omp critical(vlp_fftw_plan)
  {
    pa = fftw_plan_dft_r2c_1d(static_cast<int>(L), a, A, FFTW_ESTIMATE);
    pb = fftw_plan_dft_r2c_1d(static_cast<int>(L), b, B, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(L), A, a, FFTW_ESTIMATE);
  }
  std::fill(a, a + L, 0.0);
  std::fill(b, b + L, 0.0);
  std::copy(f.begin(), f.end(), a);
  std::copy(g.begin(), g.end(), b);
  fftw_execute(pa);
  fftw_execute(pb);
  for (std::size_t k = 0; k < nc; ++k) {
    const std::complex<double> z = std::complex<double>(A[k][0], A[k][1]) * std::complex<double>(B[k][0], B[k][1]);
    A[k][0] = z.real();
    A[k][1] = z.imag();
  }
  fftw_execute(inv);
  std::vector<double> out(n, 0.0);
  const double scale = h / static_cast<double>(L);
  for (std::size_t i = 0; i < n; ++i) {
    const std::ptrdiff_t t = static_cast<std::ptrdiff_t>(i) - G;
    if (t >= 0 && t < static_cast<std::ptrdiff_t>(L)) out[i] = a[t] * scale;
  }
#pragma omp critical(vlp_fftw_plan)
  {
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(inv);
  }
  fftw_free(a);
  fftw_free(b);
  fftw_free(A);
  fftw_free(B);
  return out;
}

}  // namespace

GridFunction convolve(const GridFunction& f, const GridFunction& g, ConvolutionMethod method) {
  const double h = uniform_spacing(f.grid());
  const double hg = uniform_spacing(g.grid());
  if (std::abs(h - hg) > 1e-9 * h) throw InvalidArgument("spacing mismatch between function and kernel");
  const auto G = static_cast<std::ptrdiff_t>(kernel_offset(g, h));
  if (method == ConvolutionMethod::automatic) method = f.size() <= 1024 ? ConvolutionMethod::direct : ConvolutionMethod::fft;
  auto out = method == ConvolutionMethod::direct ? convolve_direct(f.values(), g.values(), G, h)
                                                 : convolve_fft(f.values(), g.values(), G, h);
  return GridFunction(f.grid_ptr(), std::move(out));
}

GridFunction square_function(const GridFunction& f, const FilterBank& fb) {
  if (std::abs(uniform_spacing(f.grid()) - fb.h) > 1e-9 * fb.h) throw InvalidArgument("filter bank built for another spacing");
  const auto levels = static_cast<std::ptrdiff_t>(fb.kernels.size());
  std::vector<std::vector<double>> parts(fb.kernels.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < levels; ++j) {
    const auto c = convolve(f, fb.kernels[static_cast<std::size_t>(j)]);
    parts[static_cast<std::size_t>(j)].assign(c.values().begin(), c.values().end());
  }
  std::vector<double> s(f.size(), 0.0);
  for (const auto& part : parts)
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += part[i] * part[i];
  for (double& x : s) x = std::sqrt(x);
  return GridFunction(f.grid_ptr(), std::move(s));
}

// ---------------------------------------------------------------------------

namespace {

// C-infinity step from 0 (t <= 0) to 1 (t >= 1).
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

}  // namespace

GridFunction smooth_test_function(GridPtr grid, double pad, std::uint64_t seed, std::size_t i) {
  const double a = grid->lower(0) + pad, b = grid->upper(0) - pad;
  if (!(b > a)) throw InvalidArgument("padding leaves no interior");
  Rng rng = Rng::stream(seed, i);
  const double half = 0.5 * (b - a);
  const double ramp = 0.2 * half;
  struct Wave {
    double amp, center, width, freq, phase;
  };
  std::vector<Wave> waves(1 + rng.index(3));
  for (auto& w : waves) {
    w.amp = rng.uniform(0.2, 1.0) * (rng.coin() ? 1.0 : -1.0);
    w.center = rng.uniform(a + 0.3 * half, b - 0.3 * half);
    w.width = rng.log_uniform(0.25, 1.0) * std::min(1.0, half / 3.0);
    w.freq = rng.uniform(0.0, 3.0);
    w.phase = rng.uniform(0.0, 6.283185307179586);
  }
  return GridFunction::sample(grid, [&](const std::array<double, 2>& x) {
    const double taper = smooth_step((x[0] - a) / ramp) * smooth_step((b - x[0]) / ramp);
    if (taper == 0.0) return 0.0;
    double s = 0.0;
    for (const auto& w : waves) {
      const double u = (x[0] - w.center) / w.width;
      s += w.amp * std::exp(-0.5 * u * u) * std::cos(w.freq * x[0] + w.phase);
    }
    return taper * s;
  });
}

SfBracket sf_equivalence(const Exponent& p, const FilterBank& fb, std::size_t budget, std::uint64_t seed) {
  if (budget < 1) throw InvalidArgument("budget must be at least 1");
  const double pad = 2.0 * fb.bump.radius + fb.h;
  std::vector<double> vals(budget);
  std::vector<std::string> ids(budget);
  for (std::size_t i = 0; i < budget; ++i) {
    const auto f = smooth_test_function(p.grid_ptr(), pad, seed, i);
    const auto s = square_function(f, fb);
    const double nf = luxemburg_norm(f, p);
    vals[i] = nf == 0.0 ? 1.0 : luxemburg_norm(s, p) / nf;
    ids[i] = "smooth sample " + std::to_string(i);
  }
  SfBracket out;
  out.low = reduce_probe(ProbeKind::inf, vals, ids, seed, budget);
  out.high = reduce_probe(ProbeKind::sup, vals, ids, seed, budget);
  out.c_low = out.low.estimate;
  out.c_high = out.high.estimate;
  return out;
}

}  // namespace vlp

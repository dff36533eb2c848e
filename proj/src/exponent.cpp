#include "vlp/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vlp/rng.hpp"

namespace vlp {

Exponent::Exponent(GridFunction samples, double p_minus, double p_plus, std::optional<ExponentDescriptor> descriptor)
    : samples_(std::move(samples)), p_minus_(p_minus), p_plus_(p_plus), descriptor_(std::move(descriptor)) {
  if (!(p_minus_ > 1.0)) throw InvalidArgument("exponent requires p_minus > 1");
  if (!std::isfinite(p_plus_) || p_plus_ < p_minus_) throw InvalidArgument("exponent requires finite p_plus >= p_minus");
  for (double v : samples_.values())
    if (v < p_minus_ * (1 - 1e-14) || v > p_plus_ * (1 + 1e-14))
      throw InvalidArgument("exponent samples outside [p_minus, p_plus]");
}

Exponent Exponent::from_samples(GridFunction samples) {
  const auto v = samples.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double pm = *lo, pp = *hi;
  ExponentDescriptor d{"samples", {}, {}};
  return Exponent(std::move(samples), pm, pp, std::move(d));
}

Exponent Exponent::scaled(double beta) const {
  std::optional<ExponentDescriptor> d;
  if (descriptor_) {
    d = *descriptor_;
    d->params["scale"] = beta;
    if (descriptor_->eval) d->eval = [f = descriptor_->eval, beta](const std::array<double, 2>& x) { return beta * f(x); };
  }
  return Exponent(samples_.scaled(beta), beta * p_minus_, beta * p_plus_, std::move(d));
}

// ---------------------------------------------------------------------------

PiecewiseLinearMap::PiecewiseLinearMap(std::vector<std::pair<double, double>> breakpoints) : bp_(std::move(breakpoints)) {
  if (bp_.empty()) throw InvalidArgument("map needs at least one breakpoint");
  for (std::size_t i = 1; i < bp_.size(); ++i)
    if (!(bp_[i].first > bp_[i - 1].first) || !(bp_[i].second > bp_[i - 1].second))
      throw InvalidArgument("map breakpoints must be strictly increasing in both coordinates");
}

namespace {
double interp(const std::vector<std::pair<double, double>>& bp, double x, bool inverse) {
  auto key = [inverse](const std::pair<double, double>& p) { return inverse ? p.second : p.first; };
  auto val = [inverse](const std::pair<double, double>& p) { return inverse ? p.first : p.second; };
  if (x <= key(bp.front())) return val(bp.front()) + (x - key(bp.front()));
  if (x >= key(bp.back())) return val(bp.back()) + (x - key(bp.back()));
  auto it = std::upper_bound(bp.begin(), bp.end(), x, [&](double v, const auto& p) { return v < key(p); });
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double s = (x - key(a)) / (key(b) - key(a));
  return val(a) + s * (val(b) - val(a));
}
}  // namespace

double PiecewiseLinearMap::forward(double x) const { return interp(bp_, x, false); }
double PiecewiseLinearMap::inverse(double y) const { return interp(bp_, y, true); }

// ---------------------------------------------------------------------------

std::pair<double, double> lerner_interval(int k) {
  const double k3 = static_cast<double>(k) * k * k;
  return {std::exp(k3), std::exp(k3 * std::exp(1.0 / (static_cast<double>(k) * k)))};
}

double lerner_p0(double x, int k_max) {
  if (k_max < 1) throw InvalidArgument("k_max must be at least 1");
  const double a = std::abs(x);
  const double la = a > 0.0 ? std::log(a) : -std::numeric_limits<double>::infinity();
  double sum = 0.0, partial = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const double kk = static_cast<double>(k);
    const double inv_k2 = 1.0 / (kk * kk);
    partial += inv_k2;
    const double lt = kk * kk * kk;            // log of the left endpoint
    const double lm = lt * std::exp(inv_k2);   // log of the right endpoint
    if (la <= lt)
      sum += inv_k2;
    else if (la < lm)
      sum += 3.0 * std::log(kk) + inv_k2 - std::log(la);
  }
  const double tail = std::numbers::pi * std::numbers::pi / 6.0 - partial;
  return sum + tail;
}

Grid lerner_grid(int k_max, std::size_t cells_per_log_unit, double inner_spacing) {
  if (k_max < 1 || cells_per_log_unit < 1 || !(inner_spacing > 0.0)) throw InvalidArgument("invalid lerner grid parameters");
  const double e = std::numbers::e;
  std::vector<double> pos;
  const std::size_t n0 = static_cast<std::size_t>(std::ceil(e / inner_spacing));
  for (std::size_t i = 1; i <= n0; ++i) pos.push_back(e * static_cast<double>(i) / static_cast<double>(n0));
  // log-coordinates of every interval endpoint, then one extra log unit
  std::vector<double> keys{1.0};
  for (int k = 1; k <= k_max; ++k) {
    const double kk = static_cast<double>(k);
    const double lt = kk * kk * kk;
    if (lt > keys.back()) keys.push_back(lt);
    keys.push_back(lt * std::exp(1.0 / (kk * kk)));
  }
  keys.push_back(keys.back() + 1.0);
  for (std::size_t s = 1; s < keys.size(); ++s) {
    const double du = keys[s] - keys[s - 1];
    const std::size_t m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(du * static_cast<double>(cells_per_log_unit))));
    for (std::size_t i = 1; i <= m; ++i) {
      const double u = i == m ? keys[s] : keys[s - 1] + du * static_cast<double>(i) / static_cast<double>(m);
      pos.push_back(std::exp(u));
    }
  }
  std::vector<double> edges;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) edges.push_back(-*it);
  edges.push_back(0.0);
  edges.insert(edges.end(), pos.begin(), pos.end());
  return Grid::make(1, {std::move(edges)});
}

Exponent lerner_exponent(GridPtr grid, double alpha, double beta, int k_max) {
  if (!(alpha > 1.0)) throw InvalidArgument("lerner exponent requires alpha > 1");
  if (!(beta > 1.0 / alpha) || beta > 1.0) throw InvalidArgument("lerner exponent requires 1/alpha < beta <= 1");
  if (!(beta * alpha > 1.0)) throw InvalidArgument("lerner exponent requires beta * alpha > 1");
  auto eval = [alpha, beta, k_max](const std::array<double, 2>& x) { return beta * (lerner_p0(x[0], k_max) + alpha); };
  auto samples = GridFunction::sample(grid, eval);
  ExponentDescriptor d{"lerner-p0", {{"alpha", alpha}, {"beta", beta}, {"k_max", k_max}}, eval};
  const double top = beta * (std::numbers::pi * std::numbers::pi / 6.0 + alpha);
  return Exponent(std::move(samples), beta * alpha, top, std::move(d));
}

PiecewiseLinearMap lerner_remap(int k_max, double gap_stretch) {
  if (!(gap_stretch >= 1.0)) throw InvalidArgument("gap stretch must be >= 1");
  std::vector<std::pair<double, double>> bp{{0.0, 0.0}};
  double prev_m = 0.0, prev_m_new = 0.0, factor = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    const auto [t, m] = lerner_interval(k);
    const double t_new = prev_m_new + (t - prev_m) * factor;
    const double m_new = t_new + (m - t);
    bp.emplace_back(t, t_new);
    bp.emplace_back(m, m_new);
    prev_m = m;
    prev_m_new = m_new;
    factor *= gap_stretch;
  }
  return PiecewiseLinearMap(std::move(bp));
}

Grid map_grid(const Grid& g, const PiecewiseLinearMap& omega) {
  if (g.dim() != 1) throw InvalidArgument("map_grid is 1D only");
  std::vector<double> e;
  for (double x : g.edges(0)) e.push_back(omega.forward(x));
  return Grid::make(1, {std::move(e)});
}

Exponent remap_exponent(const Exponent& p, const PiecewiseLinearMap& omega, GridPtr target) {
  if (p.grid().dim() != 1 || target->dim() != 1) throw InvalidArgument("remap_exponent is 1D only");
  std::vector<double> v(target->cells());
  for (std::size_t c = 0; c < v.size(); ++c) {
    const double x = omega.inverse(target->center(0, c));
    v[c] = p[p.grid().locate(0, x)];
  }
  std::optional<ExponentDescriptor> d;
  ExponentDescriptor dd{"remapped", {{"breakpoints", static_cast<double>(omega.breakpoints().size())}}, {}};
  // sample-based: source cells are looked up, no analytic evaluator
  d = std::move(dd);
  return Exponent(GridFunction(std::move(target), std::move(v)), p.p_minus(), p.p_plus(), std::move(d));
}

Exponent build_exponent(GridPtr grid, const ExponentSpec& spec) {
  return std::visit(
      [&](const auto& s) -> Exponent {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ConstantExponent>) {
          ExponentDescriptor d{"constant", {{"q", s.q}}, [q = s.q](const std::array<double, 2>&) { return q; }};
          return Exponent(GridFunction::constant(grid, s.q), s.q, s.q, std::move(d));
        } else if constexpr (std::is_same_v<S, LogHolderExponent>) {
          auto eval = [pi = s.p_inf, c = s.c](const std::array<double, 2>& x) {
            return pi + c / std::log(std::numbers::e + std::hypot(x[0], x[1]));
          };
          auto samples = GridFunction::sample(grid, eval);
          const double lo = std::min(s.p_inf, s.p_inf + s.c), hi = std::max(s.p_inf, s.p_inf + s.c);
          ExponentDescriptor d{"log-holder", {{"p_inf", s.p_inf}, {"c", s.c}}, eval};
          return Exponent(std::move(samples), lo, hi, std::move(d));
        } else if constexpr (std::is_same_v<S, AcExponent>) {
          if (grid->dim() != 1 || !(s.density.grid() == *grid)) throw InvalidArgument("ac exponent needs a 1D density on the grid");
          double total = 0.0;
          for (std::size_t i = 0; i < s.density.size(); ++i) total += std::abs(s.density[i]) * grid->volume(i);
          if (!std::isfinite(total)) throw InvalidArgument("density is not integrable on the grid");
          // exact antiderivative: prefix sums at cell edges, linear inside cells
          auto prefix = std::make_shared<std::vector<double>>(grid->cells() + 1, 0.0);
          for (std::size_t i = 0; i < grid->cells(); ++i) (*prefix)[i + 1] = (*prefix)[i] + s.density[i] * grid->volume(i);
          auto eval = [g = grid, prefix, dens = s.density, base = s.base](const std::array<double, 2>& x) {
            if (x[0] <= g->lower(0)) return base;
            if (x[0] >= g->upper(0)) return base + prefix->back();
            const std::size_t c = g->locate(0, x[0]);
            return base + (*prefix)[c] + dens[c] * (x[0] - g->edges(0)[c]);
          };
          auto samples = GridFunction::sample(grid, eval);
          const auto v = samples.values();
          double lo = std::min(s.base, s.base + prefix->back()), hi = std::max(s.base, s.base + prefix->back());
          for (double p : *prefix) {
            lo = std::min(lo, s.base + p);
            hi = std::max(hi, s.base + p);
          }
          lo = std::min(lo, *std::min_element(v.begin(), v.end()));
          hi = std::max(hi, *std::max_element(v.begin(), v.end()));
          ExponentDescriptor d{"ac-density", {{"base", s.base}, {"l1", total}}, eval};
          return Exponent(std::move(samples), lo, hi, std::move(d));
        } else {
          return lerner_exponent(grid, s.alpha, s.beta, s.k_max);
        }
      },
      spec);
}

Exponent conjugate_exponent(const Exponent& p) {
  if (!(p.p_minus() > 1.0)) throw InvalidArgument("conjugate requires p_minus > 1");
  std::vector<double> v(p.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = p[i] / (p[i] - 1.0);
  std::optional<ExponentDescriptor> d;
  if (p.descriptor()) {
    d = ExponentDescriptor{"conjugate", p.descriptor()->params, {}};
    d->params["of_" + p.descriptor()->kind] = 1.0;
    if (p.descriptor()->eval)
      d->eval = [f = p.descriptor()->eval](const std::array<double, 2>& x) {
        const double q = f(x);
        return q / (q - 1.0);
      };
  }
  const double lo = p.p_plus() / (p.p_plus() - 1.0), hi = p.p_minus() / (p.p_minus() - 1.0);
  return Exponent(GridFunction(p.grid_ptr(), std::move(v)), lo, hi, std::move(d));
}

double cube_mean_exponent(const Exponent& p, const Cube& q) {
  double s = 0.0;
  for_each_cell(p.grid(), q, [&](std::size_t c) { s += p.grid().volume(c) / p[c]; });
  return q.volume / s;
}

// ---------------------------------------------------------------------------

RegularityReport regularity_report(const Exponent& p, double p_inf, double c, std::size_t pair_budget, std::uint64_t seed) {
  if (!(c > 0.0 && c < 1.0)) throw InvalidArgument("nekvinda constant must lie in (0, 1)");
  if (!(p_inf > 1.0)) throw InvalidArgument("p_inf must exceed 1");
  const Grid& g = p.grid();
  const std::size_t n = g.cells();
  std::vector<std::array<double, 2>> mid(n);
  for (std::size_t i = 0; i < n; ++i) mid[i] = g.midpoint(i);

  RegularityReport r;
  auto pair = [&](std::size_t i, std::size_t j) {
    const double d = std::hypot(mid[i][0] - mid[j][0], mid[i][1] - mid[j][1]);
    if (d > 0.0 && d < 0.5) r.local_modulus = std::max(r.local_modulus, std::abs(p[i] - p[j]) * std::log(1.0 / d));
  };
  if (n <= 2048) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pair(i, j);
  } else {
    const std::size_t nx = g.cells(0), ny = g.cells(1);
    for (std::size_t iy = 0; iy < ny; ++iy)
      for (std::size_t ix = 0; ix < nx; ++ix) {
        if (ix + 1 < nx) pair(g.index(ix, iy), g.index(ix + 1, iy));
        if (iy + 1 < ny) pair(g.index(ix, iy), g.index(ix, iy + 1));
      }
    Rng rng(seed);
    for (std::size_t s = 0; s < pair_budget; ++s) {
      const std::size_t i = rng.index(n);
      const auto ij = g.coords(i);
      std::array<std::size_t, 2> lo{}, hi{};
      for (int a = 0; a < 2; ++a) {
        if (a >= g.dim()) {
          lo[a] = 0;
          hi[a] = 1;
          continue;
        }
        const double x = g.center(a, ij[a]);
        lo[a] = g.locate(a, x - 0.5);
        hi[a] = g.locate(a, x + 0.5) + 1;
      }
      const std::size_t jx = lo[0] + rng.index(hi[0] - lo[0]);
      const std::size_t jy = lo[1] + rng.index(hi[1] - lo[1]);
      pair(i, g.index(jx, jy));
    }
  }
  const double logc = std::log(c);
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = std::abs(p[i] - p_inf);
    r.decay_modulus = std::max(r.decay_modulus, dev * std::log(std::numbers::e + std::hypot(mid[i][0], mid[i][1])));
    if (dev > 0.0) r.nekvinda_value += g.volume(i) * std::exp(logc / dev);
  }
  return r;
}

}  // namespace vlp

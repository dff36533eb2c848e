#include "vlp/modular.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace vlp {

namespace {

double saturating_exp(double x) { return x > kLogSaturation ? kOverflow : std::exp(x); }

struct Terms {
  std::vector<double> a, p, w;
  void add(double value, double expo, double weight) {
    if (value == 0.0) return;
    a.push_back(std::log(std::abs(value)));
    p.push_back(expo);
    w.push_back(weight);
  }
  double solve() const { return solve_luxemburg(a, p, w); }
};

}  // namespace

double modular(const GridFunction& f, const Exponent& p) {
  if (!f.same_grid(p.samples())) throw InvalidArgument("function and exponent live on different grids");
  double sum = 0.0;
  const auto vol = f.grid().volumes();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0.0) continue;
    const double e = p[i] * std::log(std::abs(f[i]));
    if (e > kLogSaturation) return kOverflow;
    sum += std::exp(e) * vol[i];
  }
  return sum;
}

double solve_luxemburg(std::span<const double> log_abs, std::span<const double> exps, std::span<const double> weights) {
  const std::size_t n = log_abs.size();
  if (exps.size() != n || weights.size() != n) throw InvalidArgument("luxemburg term arrays differ in length");
  std::vector<double> a, p, lw;
  a.reserve(n);
  p.reserve(n);
  lw.reserve(n);
  double amax = -kOverflow, wmin = kOverflow, wsum = 0.0, pmin = kOverflow;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(log_abs[i] > -kOverflow) || !(weights[i] > 0.0)) continue;
    a.push_back(log_abs[i]);
    p.push_back(exps[i]);
    lw.push_back(std::log(weights[i]));
    amax = std::max(amax, log_abs[i]);
    wmin = std::min(wmin, weights[i]);
    wsum += weights[i];
    pmin = std::min(pmin, exps[i]);
  }
  if (a.empty()) return 0.0;

  // G(mu) = sum w exp(p (a - mu)), strictly decreasing in mu
  auto g = [&](double mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double e = p[i] * (a[i] - mu) + lw[i];
      if (e > kLogSaturation) return kOverflow;
      s += std::exp(e);
    }
    return s;
  };

  double lo = amax + std::log(wmin) / pmin - std::log(2.0);
  double hi = amax + std::log(wsum + 1.0);
  for (double step = 1.0; g(hi) > 1.0; step *= 2.0) hi += step;
  for (double step = 1.0; g(lo) <= 1.0; step *= 2.0) lo -= step;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(hi);
}

double luxemburg_norm(const GridFunction& f, const Exponent& p) {
  if (!f.same_grid(p.samples())) throw InvalidArgument("function and exponent live on different grids");
  Terms t;
  const auto vol = f.grid().volumes();
  for (std::size_t i = 0; i < f.size(); ++i) t.add(f[i], p[i], vol[i]);
  return t.solve();
}

double indicator_norm(const Exponent& p, const Cube& q) {
  Terms t;
  for_each_cell(p.grid(), q, [&](std::size_t c) { t.add(1.0, p[c], p.grid().volume(c)); });
  return t.solve();
}

double restricted_norm(const GridFunction& f, const Exponent& p, const Cube& q) {
  Terms t;
  for_each_cell(p.grid(), q, [&](std::size_t c) { t.add(f[c], p[c], p.grid().volume(c)); });
  return t.solve();
}

double seq_norm(std::span<const double> t, std::span<const double> exps, std::optional<std::span<const double>> weights) {
  if (exps.size() != t.size() || (weights && weights->size() != t.size()))
    throw InvalidArgument("sequence, exponents and weights must have equal length");
  Terms terms;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(exps[i] > 1.0) || !std::isfinite(exps[i])) throw InvalidArgument("sequence exponents must lie in (1, inf)");
    terms.add(t[i], exps[i], weights ? (*weights)[i] : 1.0);
  }
  return terms.solve();
}

double phi_star_eval(double p_val, double t) {
  if (!(p_val > 1.0)) throw InvalidArgument("phi* requires p > 1");
  if (t < 0.0) throw InvalidArgument("phi* requires t >= 0");
  if (t == 0.0) return 0.0;
  const double pp = p_val / (p_val - 1.0);
  return saturating_exp(std::log(p_val - 1.0) - pp * std::log(p_val) + pp * std::log(t));
}

// ---------------------------------------------------------------------------

CubeExponentProfile cube_profile(const Exponent& p, const Cube& q) {
  std::map<double, double> groups;
  for_each_cell(p.grid(), q, [&](std::size_t c) { groups[p[c]] += p.grid().volume(c); });
  CubeExponentProfile prof;
  for (const auto& [pv, vol] : groups) {
    prof.p.push_back(pv);
    prof.share.push_back(vol / q.volume);
  }
  return prof;
}

double msq(const CubeExponentProfile& prof, double s, double t, NKind which) {
  if (!(s >= 1.0)) throw InvalidArgument("s-mean requires s >= 1");
  if (t < 0.0) throw InvalidArgument("s-mean requires t >= 0");
  if (t == 0.0) return 0.0;
  const double lt = std::log(t);
  // log-sum-exp of log(share) + s log phi
  double top = -kOverflow;
  std::vector<double> e(prof.p.size());
  for (std::size_t g = 0; g < e.size(); ++g) {
    const double pv = prof.p[g];
    double lphi;
    if (which == NKind::phi) {
      lphi = pv * lt;
    } else {
      const double pp = pv / (pv - 1.0);
      lphi = std::log(pv - 1.0) - pp * std::log(pv) + pp * lt;
    }
    e[g] = std::log(prof.share[g]) + s * lphi;
    top = std::max(top, e[g]);
  }
  double acc = 0.0;
  for (double x : e) acc += std::exp(x - top);
  return saturating_exp((top + std::log(acc)) / s);
}

double msq(const Exponent& p, const Cube& q, double s, double t, NKind which) {
  return msq(cube_profile(p, q), s, t, which);
}

// ---------------------------------------------------------------------------

NFunctionTable::NFunctionTable(std::vector<double> t, std::vector<double> values) : t_(std::move(t)), values_(std::move(values)) {
  if (t_.size() != values_.size() || t_.size() < 2) throw InvalidArgument("table needs matching t and value arrays");
  if (!(t_.front() > 0.0)) throw InvalidArgument("table grid must be positive");
  if (t_.front() > 1e-6 || t_.back() < 1e6) throw InvalidArgument("table must span at least [1e-6, 1e6]");
  for (std::size_t i = 1; i < t_.size(); ++i)
    if (!(t_[i] > t_[i - 1])) throw InvalidArgument("table grid must be strictly increasing");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0)) throw InvalidArgument("table values must be non-negative");
    if (i > 0 && values_[i] < values_[i - 1] * (1.0 - 1e-12)) throw InvalidArgument("table values must be non-decreasing");
  }
  convex_ = true;
  double prev = -kOverflow;
  for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
    if (!std::isfinite(values_[i + 1])) break;
    const double slope = (values_[i + 1] - values_[i]) / (t_[i + 1] - t_[i]);
    if (slope < prev - 1e-9 * std::abs(prev) - 1e-300) {
      convex_ = false;
      break;
    }
    prev = slope;
  }
}

NFunctionTable NFunctionTable::tabulate(const std::function<double(double)>& g, const TableSpec& spec) {
  if (!(spec.t_min > 0.0) || !(spec.t_max > spec.t_min) || spec.per_decade < 1) throw InvalidArgument("invalid table spec");
  const double l0 = std::log10(spec.t_min), l1 = std::log10(spec.t_max);
  const std::size_t n = static_cast<std::size_t>(std::llround((l1 - l0) * static_cast<double>(spec.per_decade))) + 1;
  std::vector<double> t(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = i + 1 == n ? spec.t_max : std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(n - 1));
    v[i] = g(t[i]);
  }
  t[0] = spec.t_min;
  return NFunctionTable(std::move(t), std::move(v));
}

double NFunctionTable::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  if (x < t_.front()) return values_.front() * x / t_.front();
  if (x > t_.back()) return kOverflow;
  auto it = std::upper_bound(t_.begin(), t_.end(), x);
  if (it == t_.end()) return values_.back();
  const std::size_t j = static_cast<std::size_t>(it - t_.begin());
  const double s = (x - t_[j - 1]) / (t_[j] - t_[j - 1]);
  if (!std::isfinite(values_[j])) return s == 0.0 ? values_[j - 1] : kOverflow;
  return values_[j - 1] + s * (values_[j] - values_[j - 1]);
}

NFunctionTable conj_transform(const NFunctionTable& g) {
  // lower convex hull of {(0,0)} U {(t_i, g_i)}
  std::vector<double> hx{0.0}, hy{0.0};
  const auto t = g.t();
  const auto v = g.values();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(v[i])) break;
    while (hx.size() >= 2) {
      const std::size_t k = hx.size();
      const double cross = (hx[k - 1] - hx[k - 2]) * (v[i] - hy[k - 2]) - (hy[k - 1] - hy[k - 2]) * (t[i] - hx[k - 2]);
      if (cross <= 0.0) {
        hx.pop_back();
        hy.pop_back();
      } else {
        break;
      }
    }
    hx.push_back(t[i]);
    hy.push_back(v[i]);
  }
  std::vector<double> out(t.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double u = t[i];
    while (j + 1 < hx.size() && u * hx[j + 1] - hy[j + 1] >= u * hx[j] - hy[j]) ++j;
    out[i] = u * hx[j] - hy[j];
  }
  return NFunctionTable(std::vector<double>(t.begin(), t.end()), std::move(out));
}

ConjugateValue conjugate_at(const NFunctionTable& g, double u) {
  const auto t = g.t();
  const auto v = g.values();
  ConjugateValue best{0.0, 0.0, false};
  std::size_t arg = t.size();  // origin
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(v[i])) break;
    const double val = u * t[i] - v[i];
    if (val > best.value) {
      best.value = val;
      arg = i;
    }
  }
  if (arg < t.size()) best.argmax = t[arg];
  best.valid = arg > 0 && arg + 1 < t.size() && std::isfinite(v[arg + 1]);
  return best;
}

NFunctionTable msq_table(const CubeExponentProfile& prof, double s, NKind which, const TableSpec& spec) {
  return NFunctionTable::tabulate([&](double t) { return msq(prof, s, t, which); }, spec);
}

AlphaValue alpha_s(const Exponent& p, const Cube& q, double s, double t, const TableSpec& spec) {
  if (!(t > 0.0)) throw InvalidArgument("alpha_s requires t > 0");
  const auto prof = cube_profile(p, q);
  AlphaValue a;
  a.numerator = msq(prof, s, t, NKind::phi);
  const auto table = msq_table(prof, s, NKind::phi_star, spec);
  const auto den = conjugate_at(table, t);
  if (!(den.value >= 1e-300)) throw std::domain_error("conjugate vanishes at t");
  a.denominator = den.value;
  a.value = a.numerator / a.denominator;
  const double cell = std::pow(10.0, 1.0 / static_cast<double>(spec.per_decade));
  a.valid = den.valid && t > spec.t_min * cell && t < spec.t_max / cell;
  return a;
}

}  // namespace vlp

#include "vlp/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include "vlp/maximal.hpp"
#include "vlp/rng.hpp"

namespace vlp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm_ratio(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 1.0 : kInf;
  return num / den;
}

Rng function_stream(std::uint64_t seed, std::size_t i) { return Rng::stream(seed, 2 * static_cast<std::uint64_t>(i)); }
std::uint64_t partition_seed(std::uint64_t seed, std::size_t i) {
  return Rng::stream(seed, 2 * static_cast<std::uint64_t>(i) + 1).next();
}

// Random index range [lo, hi) of log-uniform length inside [0, n).
std::pair<std::size_t, std::size_t> random_range(Rng& rng, std::size_t n, std::size_t max_len) {
  const std::size_t lo = rng.index(n);
  const std::size_t room = std::min(n - lo, std::max<std::size_t>(max_len, 1));
  const auto len = std::min(room, static_cast<std::size_t>(rng.log_uniform(1.0, static_cast<double>(room) + 1.0)));
  return {lo, lo + std::max<std::size_t>(len, 1)};
}

Cube random_cube(const Grid& g, Rng& rng) {
  if (g.dim() == 1) {
    const auto [lo, hi] = random_range(rng, g.cells(0), g.cells(0));
    return make_interval(g, lo, hi);
  }
  const std::size_t ix = rng.index(g.cells(0)), iy = rng.index(g.cells(1));
  const std::size_t room = std::min(g.cells(0) - ix, g.cells(1) - iy);
  const auto k = std::clamp<std::size_t>(static_cast<std::size_t>(rng.log_uniform(1.0, static_cast<double>(room) + 1.0)), 1, room);
  return make_cube(g, {ix, iy}, {ix + k, iy + k});
}

void fill_cube(const Grid& g, const Cube& q, double v, std::vector<double>& out) {
  for_each_cell(g, q, [&](std::size_t c) { out[c] = v; });
}

}  // namespace

ProbeReport reduce_probe(ProbeKind kind, const std::vector<double>& values, const std::vector<std::string>& ids,
                         std::uint64_t seed, std::size_t budget, std::size_t top_k) {
  if (values.size() != ids.size()) throw InvalidArgument("probe values and ids differ in length");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  auto better = [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return kind == ProbeKind::sup ? values[a] > values[b] : values[a] < values[b];
    return a < b;
  };
  const std::size_t k = std::min(top_k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), better);
  ProbeReport r;
  r.kind = kind;
  r.samples = values.size();
  r.seed = seed;
  r.budget = budget;
  for (std::size_t j = 0; j < k; ++j) r.witnesses.push_back({order[j], ids[order[j]], values[order[j]]});
  r.estimate = r.witnesses.empty() ? (kind == ProbeKind::sup ? -kInf : kInf) : r.witnesses.front().value;
  return r;
}

std::string describe(const Cube& q) {
  std::ostringstream os;
  os << "cube[" << q.lo[0] << ':' << q.hi[0];
  if (q.lo[1] != 0 || q.hi[1] != 1) os << ',' << q.lo[1] << ':' << q.hi[1];
  os << ']';
  return os.str();
}

// ---------------------------------------------------------------------------

ProbeReport apx_constant(const Exponent& p, bool local, std::size_t budget, std::uint64_t seed) {
  const auto cubes = enum_cubes(p.grid(), local ? std::optional<double>(1.0) : std::nullopt, budget, seed);
  const Exponent pc = conjugate_exponent(p);
  std::vector<double> vals(cubes.size());
  std::vector<std::string> ids(cubes.size());
  const auto m = static_cast<std::ptrdiff_t>(cubes.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    const auto& q = cubes[static_cast<std::size_t>(k)];
    vals[static_cast<std::size_t>(k)] = indicator_norm(p, q) * indicator_norm(pc, q) / q.volume;
    ids[static_cast<std::size_t>(k)] = describe(q);
  }
  return reduce_probe(ProbeKind::sup, vals, ids, seed, budget);
}

Weight::Weight(GridFunction samples) : samples_(std::move(samples)) {
  for (std::size_t c = 0; c < samples_.size(); ++c)
    if (samples_[c] < 0.0) throw InvalidArgument("weight must be nonnegative");
  if (!(integrate(samples_) > 0.0)) throw InvalidArgument("weight must have positive integral");
}

ProbeReport aploc_weight_constant(const Weight& w, double p0, std::size_t budget, std::uint64_t seed) {
  if (!(p0 > 1.0) || !std::isfinite(p0)) throw InvalidArgument("weight exponent must lie in (1, inf)");
  const GridFunction& ws = w.samples();
  const Grid& g = ws.grid();
  const auto cubes = enum_cubes(g, 1.0, budget, seed);
  const double dual = -1.0 / (p0 - 1.0);  // -p'/p
  std::vector<double> vals(cubes.size());
  std::vector<std::string> ids(cubes.size());
  const auto m = static_cast<std::ptrdiff_t>(cubes.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const auto& q = cubes[i];
    double a = 0.0, b = 0.0;
    bool zero = false;
    for_each_cell(g, q, [&](std::size_t c) {
      if (ws[c] == 0.0) zero = true;
      a += ws[c] * g.volume(c);
      if (!zero) b += std::pow(ws[c], dual) * g.volume(c);
    });
    vals[i] = zero ? kInf : (a / q.volume) * std::pow(b / q.volume, p0 - 1.0);
    ids[i] = describe(q);
  }
  return reduce_probe(ProbeKind::sup, vals, ids, seed, budget);
}

// ---------------------------------------------------------------------------

GridFunction test_function(const Exponent& p, TestFamily family, std::uint64_t seed, std::size_t i, std::string* label) {
  const Grid& g = p.grid();
  Rng rng = function_stream(seed, i);
  if (family == TestFamily::mixed) family = static_cast<TestFamily>(i % 4);
  std::vector<double> v(g.cells(), 0.0);
  std::ostringstream os;
  switch (family) {
    case TestFamily::indicators: {
      const Cube q = random_cube(g, rng);
      fill_cube(g, q, 1.0, v);
      os << "indicator " << describe(q);
      break;
    }
    case TestFamily::combs: {
      const std::size_t nx = g.cells(0);
      const std::size_t width = std::max<std::size_t>(1, static_cast<std::size_t>(rng.log_uniform(1.0, std::max(2.0, nx / 8.0))));
      std::size_t gap = std::max<std::size_t>(1, static_cast<std::size_t>(rng.log_uniform(1.0, std::max(2.0, nx / 16.0))));
      std::size_t x = rng.index(nx);
      const std::size_t y0 = g.dim() == 2 ? rng.index(g.cells(1)) : 0;
      const std::size_t y1 = g.dim() == 2 ? std::min(g.cells(1), y0 + width) : 1;
      int teeth = 0;
      os << "comb start " << x << " width " << width << " gap " << gap;
      while (x < nx && teeth < 8) {
        const std::size_t hi = std::min(nx, x + width);
        fill_cube(g, make_cube(g, {x, y0}, {hi, y1}), 1.0, v);
        x = hi + gap;
        gap *= 2;
        ++teeth;
      }
      break;
    }
    case TestFamily::profiles: {
      const std::size_t c0 = rng.index(g.cells());
      const auto x0 = g.midpoint(c0);
      const double radius = rng.log_uniform(0.5, 8.0);
      const double floor_dist = 0.5 * std::sqrt(g.volume(c0));
      for (std::size_t c = 0; c < v.size(); ++c) {
        const auto x = g.midpoint(c);
        const double d = std::max(std::hypot(x[0] - x0[0], x[1] - x0[1]), floor_dist);
        if (d <= radius) v[c] = std::pow(d, -1.0 / p[c]);
      }
      os << "profile at cell " << c0 << " radius " << radius;
      break;
    }
    case TestFamily::random_steps:
    case TestFamily::mixed: {
      const auto part = make_partition(g, RandomGlobal{rng.next(), 0.0});
      for (const auto& q : part.cubes) fill_cube(g, q, rng.coin(0.25) ? 0.0 : rng.uniform(), v);
      os << "steps on " << part.cubes.size() << " cubes";
      break;
    }
  }
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) v[rng.index(v.size())] = 1.0;
  if (label) *label = os.str();
  return GridFunction(p.grid_ptr(), std::move(v));
}

ProbeReport operator_norm_probe(OperatorTag op, const Exponent& p, TestFamily family, std::size_t budget, std::uint64_t seed) {
  if (budget < 1) throw InvalidArgument("budget must be at least 1");
  std::vector<double> vals(budget);
  std::vector<std::string> ids(budget);
  const auto m = static_cast<std::ptrdiff_t>(budget);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    const auto i = static_cast<std::size_t>(k);
    std::string label;
    const GridFunction f = test_function(p, family, seed, i, &label);
    std::optional<GridFunction> out;
    switch (op) {
      case OperatorTag::m_global: out = maximal(f, MaximalSpec{false, 1.0}); break;
      case OperatorTag::m_local: out = maximal(f, MaximalSpec{true, 1.0}); break;
      case OperatorTag::t_global:
      case OperatorTag::t_local: {
        const std::uint64_t ps = partition_seed(seed, i);
        const auto part = op == OperatorTag::t_local ? make_partition(p.grid(), RandomLocal{ps})
                                                     : make_partition(p.grid(), RandomGlobal{ps, 0.0});
        out = averaging(f, part);
        label += " partition of " + std::to_string(part.cubes.size());
        break;
      }
    }
    vals[i] = norm_ratio(luxemburg_norm(*out, p), luxemburg_norm(f, p));
    ids[i] = std::move(label);
  }
  return reduce_probe(ProbeKind::sup, vals, ids, seed, budget);
}

// ---------------------------------------------------------------------------

RatioRecord estimate_ratio(const std::vector<double>& tvals, const Partition& part, const Exponent& p) {
  if (tvals.size() != part.cubes.size()) throw InvalidArgument("one value per cube is required");
  const Grid& g = p.grid();
  std::vector<double> v(g.cells(), 0.0);
  std::vector<double> seq(tvals.size()), exps(tvals.size());
  for (std::size_t k = 0; k < tvals.size(); ++k) {
    fill_cube(g, part.cubes[k], tvals[k], v);
    seq[k] = std::abs(tvals[k]) * indicator_norm(p, part.cubes[k]);
    exps[k] = cube_mean_exponent(p, part.cubes[k]);
  }
  RatioRecord r;
  r.lhs = luxemburg_norm(GridFunction(p.grid_ptr(), std::move(v)), p);
  r.rhs = seq_norm(seq, exps);
  r.ratio = norm_ratio(r.lhs, r.rhs);
  return r;
}

RatioRecord local_to_global_ratio(const GridFunction& f, const Exponent& p, double p_inf, double side) {
  if (!(side > 0.0)) throw InvalidArgument("cube side must be positive");
  const auto part = make_partition(p.grid(), EqualCubes{side});
  std::vector<double> norms(part.cubes.size());
  for (std::size_t k = 0; k < norms.size(); ++k) norms[k] = restricted_norm(f, p, part.cubes[k]);
  const std::vector<double> exps(norms.size(), p_inf);
  RatioRecord r;
  r.lhs = luxemburg_norm(f, p);
  r.rhs = seq_norm(norms, exps);
  r.ratio = norm_ratio(r.lhs, r.rhs);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// Per-profile N-function data, cached by the exponent profile of the cube.
struct CubeFunctions {
  CubeExponentProfile prof;
  std::shared_ptr<const NFunctionTable> conj_star;  // (M_{s,Q phi*})^*
};

class ProfileCache {
 public:
  ProfileCache(const Exponent& p, double s, const TableSpec& spec) : p_(p), s_(s), spec_(spec) {}

  const CubeFunctions& get(const Cube& q) {
    auto prof = cube_profile(p_, q);
    std::vector<double> key = prof.p;
    key.insert(key.end(), prof.share.begin(), prof.share.end());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    CubeFunctions cf;
    cf.conj_star = std::make_shared<const NFunctionTable>(conj_transform(msq_table(prof, s_, NKind::phi_star, spec_)));
    cf.prof = std::move(prof);
    return cache_.emplace(std::move(key), std::move(cf)).first->second;
  }

 private:
  const Exponent& p_;
  double s_;
  TableSpec spec_;
  std::map<std::vector<double>, CubeFunctions> cache_;
};

}  // namespace

DominationReport domination_probe(const Exponent& p, const DominationOptions& opt, std::size_t budget, std::uint64_t seed) {
  if (!(opt.a1 > 0.0)) throw InvalidArgument("A1 must be positive");
  if (!(opt.s >= 1.0)) throw InvalidArgument("s must be >= 1");
  if (budget < 1) throw InvalidArgument("budget must be at least 1");
  std::vector<double> vals(budget, -kInf);
  std::vector<std::string> ids(budget);
  std::vector<char> skipped(budget, 0);
  const auto m = static_cast<std::ptrdiff_t>(budget);
#pragma omp parallel
  {
    ProfileCache cache(p, opt.s, opt.table);
#pragma omp for schedule(dynamic, 1)
    for (std::ptrdiff_t k = 0; k < m; ++k) {
      const auto i = static_cast<std::size_t>(k);
      const std::uint64_t ps = partition_seed(seed, i);
      const auto part = opt.local ? make_partition(p.grid(), RandomLocal{ps}) : make_partition(p.grid(), RandomGlobal{ps, 0.0});
      Rng rng = function_stream(seed, i);
      std::vector<const CubeFunctions*> fns;
      std::vector<double> dir;
      for (const auto& q : part.cubes) {
        fns.push_back(&cache.get(q));
        dir.push_back(rng.log_uniform(1e-2, 1.0));
      }
      auto hyp = [&](double c) {
        double s = 0.0;
        for (std::size_t j = 0; j < fns.size(); ++j) s += part.cubes[j].volume * (*fns[j]->conj_star)(c * dir[j]);
        return s;
      };
      // bisection in log c for the largest c with hyp(c) <= A1
      double lo = -60.0, hi = 60.0;
      if (hyp(std::exp(lo)) > opt.a1) {
        skipped[i] = 1;
        continue;
      }
      for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        (hyp(std::exp(mid)) <= opt.a1 ? lo : hi) = mid;
      }
      const double c = std::exp(lo);
      if (!(hyp(c) >= opt.a1 * (1.0 - 1e-6))) {
        skipped[i] = 1;
        continue;
      }
      double concl = 0.0;
      for (std::size_t j = 0; j < fns.size(); ++j) concl += part.cubes[j].volume * msq(fns[j]->prof, opt.s, c * dir[j], NKind::phi);
      vals[i] = concl;
      ids[i] = "partition of " + std::to_string(part.cubes.size()) + " cubes, scale " + std::to_string(c);
    }
  }
  std::vector<double> kept;
  std::vector<std::string> kept_ids;
  DominationReport out;
  for (std::size_t i = 0; i < budget; ++i) {
    if (skipped[i]) {
      ++out.unattainable;
      continue;
    }
    kept.push_back(vals[i]);
    kept_ids.push_back(ids[i]);
  }
  out.report = reduce_probe(ProbeKind::sup, kept, kept_ids, seed, budget);
  return out;
}

LevelSums level_integrated_sums(const GridFunction& f, const Exponent& p, double s, double q, std::size_t levels,
                                const TableSpec& table) {
  if (levels < 2) throw InvalidArgument("need at least two levels");
  const double top = f.max_abs();
  LevelSums out;
  out.levels = levels;
  if (top == 0.0) return out;
  ProfileCache cache(p, s, table);
  const double l0 = std::log(1e-3 * top), l1 = std::log(2.0 * top);
  const double dl = (l1 - l0) / static_cast<double>(levels - 1);
  for (std::size_t k = 0; k < levels; ++k) {
    const double lambda = std::exp(l0 + dl * static_cast<double>(k));
    const double wgt = (k == 0 || k + 1 == levels) ? 0.5 * dl : dl;  // trapezoid in log lambda
    const auto f0 = split_at_level(f, lambda).first;
    for (const auto& cz : cz_decompose(f0, lambda, q)) {
      const auto& fn = cache.get(cz.cube);
      out.hypothesis += wgt * cz.cube.volume * (*fn.conj_star)(lambda);
      out.conclusion += wgt * cz.cube.volume * msq(fn.prof, s, lambda, NKind::phi);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

ProbeReport ainfty_probe(const Exponent& p, double eps, std::size_t budget, std::uint64_t seed) {
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("eps must lie in (0, 1]");
  if (budget < 1) throw InvalidArgument("budget must be at least 1");
  const Grid& g = p.grid();
  std::vector<double> vals(budget);
  std::vector<std::string> ids(budget);
  const auto m = static_cast<std::ptrdiff_t>(budget);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const auto part = make_partition(g, RandomLocal{partition_seed(seed, i)});
    Rng rng = function_stream(seed, i);
    std::vector<double> full(g.cells(), 0.0), sub(g.cells(), 0.0);
    for (const auto& q : part.cubes) {
      const double t = rng.uniform();
      std::vector<std::size_t> cells;
      for_each_cell(g, q, [&](std::size_t c) { cells.push_back(c); });
      for (std::size_t j = cells.size(); j > 1; --j) std::swap(cells[j - 1], cells[rng.index(j)]);
      double vol = 0.0;
      for (std::size_t c : cells) {
        if (vol >= eps * q.volume * (1.0 - 1e-12)) break;
        sub[c] = t;
        vol += g.volume(c);
      }
      fill_cube(g, q, t, full);
    }
    const double num = luxemburg_norm(GridFunction(p.grid_ptr(), std::move(sub)), p);
    const double den = luxemburg_norm(GridFunction(p.grid_ptr(), std::move(full)), p);
    vals[i] = norm_ratio(num, den);
    ids[i] = "local partition of " + std::to_string(part.cubes.size()) + " cubes";
  }
  return reduce_probe(ProbeKind::inf, vals, ids, seed, budget);
}

// ---------------------------------------------------------------------------

int highest_interval_met(const Grid& g, const Cube& q, const std::vector<std::pair<double, double>>& intervals) {
  const double a = g.edges(0)[q.lo[0]], b = g.edges(0)[q.hi[0]];
  int n = 0;
  for (std::size_t k = 0; k < intervals.size(); ++k)
    if (a < intervals[k].second && intervals[k].first < b) n = static_cast<int>(k) + 1;
  return n;
}

SpanProbe span_probe(const Exponent& p, bool local, const std::vector<std::pair<double, double>>& intervals,
                     std::size_t budget, std::uint64_t seed) {
  const Grid& g = p.grid();
  if (g.dim() != 1) throw InvalidArgument("span probe is one-dimensional");
  if (budget < 1) throw InvalidArgument("budget must be at least 1");
  const std::size_t levels = intervals.size() + 1;
  const double top = g.upper(0);
  if (!(top > 1.0)) throw InvalidArgument("span probe needs a domain reaching beyond 1");
  std::vector<double> vals(budget);
  std::vector<int> span(budget);
  std::vector<std::string> ids(budget);
  const auto m = static_cast<std::ptrdiff_t>(budget);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < m; ++k) {
    const auto i = static_cast<std::size_t>(k);
    Rng rng = function_stream(seed, i);
    std::vector<double> v(g.cells(), 0.0);
    std::optional<Partition> part;
    std::ostringstream os;
    if (!local) {
      // one large cube [a, b) and the indicator of its left part [a, c)
      const double la = rng.uniform(0.0, std::log(top));
      const double lb = rng.uniform(la, std::log(top));
      const std::size_t ia = g.locate(0, std::exp(la));
      const std::size_t ib = std::max(ia + 1, std::min(g.cells(0), g.locate(0, std::exp(lb)) + 1));
      const double lc = rng.uniform(std::log(g.edges(0)[ia + 1]), std::log(g.edges(0)[ib]));
      const std::size_t ic = std::clamp<std::size_t>(g.locate(0, std::exp(lc)) + 1, ia + 1, ib);
      std::vector<Cube> cubes;
      for (std::size_t c = 0; c < ia; ++c) cubes.push_back(make_interval(g, c, c + 1));
      cubes.push_back(make_interval(g, ia, ib));
      for (std::size_t c = ib; c < g.cells(0); ++c) cubes.push_back(make_interval(g, c, c + 1));
      const Cube big = make_interval(g, ia, ib);
      if (rng.coin()) {
        for (std::size_t c = ia; c < ic; ++c) v[c] = 1.0;
        os << "indicator " << describe(make_interval(g, ia, ic)) << " in ";
      } else {
        // near-extremal for int_Q f against ||f||_p: f = c^{p'(x) - 1}
        const double lc0 = -std::log(indicator_norm(conjugate_exponent(p), big)) + rng.uniform(-0.7, 0.7);
        for (std::size_t c = ia; c < ib; ++c) v[c] = std::exp(lc0 / (p[c] - 1.0));
        os << "dual profile in ";
      }
      span[i] = big.volume > 1.0 ? highest_interval_met(g, big, intervals) : 0;
      part = finish_partition(g, std::move(cubes));
      os << "large " << describe(big);
    } else {
      // support restricted to |x| below the start of interval K+1
      const int level = static_cast<int>(rng.index(levels));
      const double bound = static_cast<std::size_t>(level) < intervals.size() ? intervals[static_cast<std::size_t>(level)].first : top;
      const auto f = test_function(p, TestFamily::mixed, rng.next(), i);
      for (std::size_t c = 0; c < g.cells(); ++c)
        if (std::abs(g.center(0, c)) < bound) v[c] = f[c];
      if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) v[g.locate(0, 0.0)] = 1.0;
      span[i] = level;
      part = make_partition(g, RandomLocal{partition_seed(seed, i)});
      os << "local partition of " << part->cubes.size() << " cubes, support below " << bound;
    }
    const GridFunction f(p.grid_ptr(), std::move(v));
    vals[i] = norm_ratio(luxemburg_norm(averaging(f, *part), p), luxemburg_norm(f, p));
    ids[i] = os.str();
  }
  SpanProbe out;
  out.at_level.assign(levels, -kInf);
  for (std::size_t i = 0; i < budget; ++i) {
    const auto s = static_cast<std::size_t>(span[i]);
    out.at_level[s] = std::max(out.at_level[s], vals[i]);
  }
  for (std::size_t K = 0; K < levels; ++K) {
    std::vector<double> kv;
    std::vector<std::string> ki;
    for (std::size_t i = 0; i < budget; ++i)
      if (static_cast<std::size_t>(span[i]) <= K) {
        kv.push_back(vals[i]);
        ki.push_back("sample " + std::to_string(i) + ": " + ids[i]);
      }
    out.cumulative.push_back(reduce_probe(ProbeKind::sup, kv, ki, seed, budget));
  }
  return out;
}

}  // namespace vlp

#include "cechlab/properties.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "cechlab/errors.hpp"
#include "cechlab/geometric_graph.hpp"
#include "cechlab/parallel.hpp"
#include "cechlab/sampling.hpp"
#include "cechlab/witness.hpp"

namespace cechlab {

namespace {

void require_scale(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ArgumentError("property scale must be positive and finite");
}

void require_arity(std::size_t p) {
  if (p == 0) throw ArgumentError("property arity must be >= 1");
}

double factorial(std::size_t p) {
  double f = 1.0;
  for (std::size_t i = 2; i <= p; ++i) f *= static_cast<double>(i);
  return f;
}

// Y connected in the graph with edges at distance <= s.
bool connected_at(const PointCloud& y, double s) {
  const std::size_t n = y.size();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  const double s2 = s * s;
  while (!stack.empty()) {
    const Index a = stack.back();
    stack.pop_back();
    for (Index b = 0; b < n; ++b) {
      if (seen[b] || y.squared_distance(a, b) > s2) continue;
      seen[b] = 1;
      ++reached;
      stack.push_back(b);
    }
  }
  return reached == n;
}

std::vector<std::vector<Index>> adjacency_at(const PointCloud& cloud, double s) {
  return geometric_graph(cloud, s).adjacency();
}

// Every connected vertex set of size p in `adj`, each exactly once (ESU).
template <class Visit>
void connected_subsets(const std::vector<std::vector<Index>>& adj, std::size_t p, Visit&& visit) {
  const std::size_t n = adj.size();
  std::vector<std::uint32_t> cover(n, 0);  // # members of sub equal or adjacent to u
  std::vector<Index> sub, sorted;
  auto push = [&](Index w) {
    sub.push_back(w);
    ++cover[w];
    for (Index u : adj[w]) ++cover[u];
  };
  auto pop = [&] {
    const Index w = sub.back();
    sub.pop_back();
    --cover[w];
    for (Index u : adj[w]) --cover[u];
  };
  auto extend = [&](auto&& self, std::vector<Index> ext, Index root) -> void {
    if (sub.size() == p) {
      sorted = sub;
      std::sort(sorted.begin(), sorted.end());
      visit(std::span<const Index>(sorted));
      return;
    }
    while (!ext.empty()) {
      const Index w = ext.back();
      ext.pop_back();
      std::vector<Index> next = ext;
      for (Index u : adj[w])
        if (u > root && cover[u] == 0) next.push_back(u);
      push(w);
      self(self, std::move(next), root);
      pop();
    }
  };
  for (Index v = 0; v < n; ++v) {
    push(v);
    std::vector<Index> ext;
    for (Index u : adj[v])
      if (u > v) ext.push_back(u);
    extend(extend, std::move(ext), v);
    pop();
  }
}

// Every p-clique of `adj` (sorted adjacency lists).
template <class Visit>
void cliques(const std::vector<std::vector<Index>>& adj, std::size_t p, Visit&& visit) {
  std::vector<Index> clique;
  std::vector<std::vector<Index>> cand(p + 1);
  auto extend = [&](auto&& self, std::size_t level) -> void {
    if (clique.size() == p) {
      visit(std::span<const Index>(clique));
      return;
    }
    const auto& c = cand[level];
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Index u = c[i];
      auto& next = cand[level + 1];
      next.clear();
      std::set_intersection(c.begin() + static_cast<std::ptrdiff_t>(i + 1), c.end(), adj[u].begin(),
                            adj[u].end(), std::back_inserter(next));
      if (next.size() + clique.size() + 1 < p) continue;
      clique.push_back(u);
      self(self, level + 1);
      clique.pop_back();
    }
  };
  for (Index v = 0; v < adj.size(); ++v) {
    clique.assign(1, v);
    cand[0].clear();
    for (Index u : adj[v])
      if (u > v) cand[0].push_back(u);
    extend(extend, 0);
  }
}

template <class Visit>
void for_each_candidate(const PropertyDescriptor& g, const PointCloud& cloud, Visit&& visit) {
  const std::size_t p = g.arity;
  if (p == 0 || p > cloud.size()) return;
  if (p == 1) {
    for (Index v = 0; v < cloud.size(); ++v) {
      const Index one[1] = {v};
      visit(std::span<const Index>(one));
    }
    return;
  }
  if (g.enumeration == Enumeration::Connected) {
    connected_subsets(adjacency_at(cloud, g.connect_factor * g.scale), p, visit);
  } else {
    cliques(adjacency_at(cloud, g.locality_radius()), p, visit);
  }
}

// Every p-subset, in lexicographic order.
template <class Visit>
void all_subsets(std::size_t n, std::size_t p, Visit&& visit) {
  if (p == 0 || p > n) return;
  std::vector<Index> idx(p);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    visit(std::span<const Index>(idx));
    std::size_t i = p;
    while (i > 0 && idx[i - 1] == n - p + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < p; ++j) idx[j] = idx[j - 1] + 1;
  }
}

Estimate mean_and_se(const std::vector<double>& v) {
  Estimate e;
  if (v.empty()) return e;
  const double n = static_cast<double>(v.size());
  e.value = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - e.value) * (x - e.value);
    e.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return e;
}

}  // namespace

PropertyDescriptor PropertyDescriptor::at_scale(double r) const {
  require_scale(r);
  PropertyDescriptor g = *this;
  g.scale = r;
  return g;
}

ContextIndicator ContextIndicator::at_scale(double s) const {
  require_scale(s);
  ContextIndicator c = *this;
  c.scale = s;
  return c;
}

std::string SubsetPropertyDescriptor::name() const {
  return context ? context->name + "*" + base.name : base.name;
}

bool SubsetPropertyDescriptor::operator()(const PointCloud& x, std::span<const Index> y) const {
  if (y.size() != base.arity) return false;
  if (!base(x.subset(y))) return false;
  if (!context) return true;
  const SpatialGrid grid(x, context->reach * context->scale);
  return context->kernel({x, grid}, y, context->scale);
}

SubsetPropertyDescriptor SubsetPropertyDescriptor::at_scale(double r) const {
  SubsetPropertyDescriptor h = *this;
  h.base = base.at_scale(r);
  if (context) h.context = context->at_scale(r * context_ratio);
  return h;
}

SubsetPropertyDescriptor with_context(PropertyDescriptor base, ContextIndicator context) {
  SubsetPropertyDescriptor h;
  h.context_ratio = context.scale / base.scale;
  h.base = std::move(base);
  h.context = std::move(context);
  return h;
}

SubsetPropertyDescriptor without_context(PropertyDescriptor base) {
  SubsetPropertyDescriptor h;
  h.base = std::move(base);
  return h;
}

PropertyDescriptor custom_property(std::string name, std::size_t arity, double r, double diam_factor,
                                   PropertyDescriptor::Indicator indicator) {
  require_arity(arity);
  require_scale(r);
  if (!(diam_factor > 0.0) || !std::isfinite(diam_factor))
    throw ArgumentError("locality constant C must be positive and finite");
  if (!indicator) throw ArgumentError("property needs an indicator");
  PropertyDescriptor g{std::move(name), arity, r, diam_factor, Enumeration::Diameter, 0.0, std::move(indicator)};

  if (arity >= 2) {
    RandomStream probe(0x10ca11e5);
    const double side = 4.0 * g.locality_radius();
    for (int trial = 0; trial < 256; ++trial) {
      std::vector<double> coords(2 * arity);
      for (double& v : coords) v = probe.uniform(0.0, side);
      const PointCloud y(2, std::move(coords));
      if (g(y) && y.diameter() > g.locality_radius())
        throw ArgumentError("property '" + g.name + "' is not local: indicator is 1 on a set of diameter " +
                            std::to_string(y.diameter()) + " > C r p");
    }
  }
  return g;
}

PropertyDescriptor iso_graph(const SmallGraph& gamma, double r, std::size_t p) {
  require_scale(r);
  if (p != gamma.size()) throw ArgumentError("iso_graph arity must equal the pattern's vertex count");
  if (!gamma.connected()) throw ArgumentError("iso_graph pattern must be connected (otherwise not local)");
  return {"iso[" + gamma.describe() + "]", p, r, 1.0, Enumeration::Connected, 1.0,
          [gamma](const PointCloud& y, double s) { return SmallGraph::geometric(y, s).isomorphic(gamma); }};
}

PropertyDescriptor spread(double r, std::size_t p) {
  require_scale(r);
  require_arity(p);
  return {"spread", p, r, 1.0, Enumeration::Diameter, 0.0, [p](const PointCloud& y, double s) {
            // beta_0(Y, r) = p means pairwise > 2r, which also gives > r.
            const double lo = 2.0 * s, hi = s * static_cast<double>(p);
            for (Index i = 0; i < y.size(); ++i)
              for (Index j = i + 1; j < y.size(); ++j) {
                const double dist = y.distance(i, j);
                if (!(dist > lo) || dist > hi) return false;
              }
            return true;
          }};
}

PropertyDescriptor conn(double r, std::size_t p) {
  require_scale(r);
  require_arity(p);
  return {"conn", p, r, 2.0, Enumeration::Connected, 2.0,
          [](const PointCloud& y, double s) { return connected_at(y, 2.0 * s); }};
}

PropertyDescriptor zeta(double r, std::size_t p, double theta, int k) {
  require_scale(r);
  require_arity(p);
  if (!(theta >= 1.0) || !std::isfinite(theta)) throw ArgumentError("theta must be >= 1");
  if (k < 0) throw ArgumentError("homology dimension must be >= 0");
  return {"zeta", p, r, 2.0 * theta, Enumeration::Connected, 2.0,
          [theta, k](const PointCloud& y, double s) {
            return connected_at(y, 2.0 * s) && zeta_indicator(y, s, theta, k);
          }};
}

ContextIndicator sep(double s) {
  require_scale(s);
  return {"sep", s, 2.0, [](const ContextIndicator::View& view, std::span<const Index> y, double scale) {
            for (Index i : y)
              if (view.grid.any_within_excluding(view.x.point(i), 2.0 * scale, y)) return false;
            return true;
          }};
}

SubsetPropertyDescriptor comp(double r, std::size_t p) { return with_context(conn(r, p), sep(r)); }

SubsetPropertyDescriptor upsilon(double r, std::size_t p, double theta, int k) {
  return with_context(zeta(r, p, theta, k), sep(theta * r));
}

std::uint64_t count_property(const PropertyDescriptor& g, const PointCloud& cloud) {
  std::uint64_t total = 0;
  for_each_candidate(g, cloud, [&](std::span<const Index> y) { total += g(cloud.subset(y)); });
  return total;
}

std::uint64_t subset_count(const SubsetPropertyDescriptor& h, const PointCloud& cloud) {
  if (!h.context) return count_property(h.base, cloud);
  if (h.base.arity == 0 || h.base.arity > cloud.size()) return 0;
  const auto& ctx = *h.context;
  const SpatialGrid grid(cloud, ctx.reach * ctx.scale);
  const ContextIndicator::View view{cloud, grid};
  std::uint64_t total = 0;
  for_each_candidate(h.base, cloud, [&](std::span<const Index> y) {
    // Context first: the separation test is usually cheaper than the base.
    if (ctx.kernel(view, y, ctx.scale) && h.base(cloud.subset(y))) ++total;
  });
  return total;
}

std::uint64_t count_property_exhaustive(const PropertyDescriptor& g, const PointCloud& cloud) {
  std::uint64_t total = 0;
  all_subsets(cloud.size(), g.arity, [&](std::span<const Index> y) { total += g(cloud.subset(y)); });
  return total;
}

std::uint64_t subset_count_exhaustive(const SubsetPropertyDescriptor& h, const PointCloud& cloud) {
  std::uint64_t total = 0;
  all_subsets(cloud.size(), h.base.arity, [&](std::span<const Index> y) { total += h(cloud, y); });
  return total;
}

std::uint64_t component_count(const SmallGraph& gamma, const PointCloud& cloud, double r) {
  if (gamma.size() < 2) throw ArgumentError("component pattern needs at least 2 vertices");
  return subset_count(with_context(iso_graph(gamma, r, gamma.size()), sep(r)), cloud);
}

Estimate estimate_mu(const PropertyDescriptor& g, const Density& f, std::size_t samples, RandomStream& rng) {
  if (samples == 0) throw ArgumentError("estimate_mu needs at least one sample");
  const auto g1 = g.at_scale(1.0);
  const std::size_t p = g1.arity, d = f.dim();
  const double radius = g1.diam_factor * static_cast<double>(p);
  const double ball = unit_ball_volume(d) * std::pow(radius, static_cast<double>(d));
  const double inner_weight = std::pow(ball, static_cast<double>(p - 1)) / factorial(p);

  std::vector<double> values(samples);
  std::vector<double> x(d), coords(p * d);
  for (std::size_t s = 0; s < samples; ++s) {
    // Outer factor int f^p = E_{x ~ f} f(x)^{p-1}.
    f.sample_into(rng, x);
    const double outer = std::pow(f(x), static_cast<double>(p - 1));
    std::fill(coords.begin(), coords.begin() + static_cast<std::ptrdiff_t>(d), 0.0);
    for (std::size_t i = 1; i < p; ++i)
      sample_in_ball(rng, radius, std::span<double>(coords.data() + i * d, d));
    values[s] = g1(PointCloud(d, coords)) ? outer * inner_weight : 0.0;
  }
  return mean_and_se(values);
}

PalmResult palm_check(const SubsetPropertyDescriptor& h, double n, const Density& f, std::size_t trials,
                      RandomStream& rng, PalmOptions options) {
  if (trials == 0) throw ArgumentError("palm_check needs at least one trial");
  if (!(n > 0.0) || !std::isfinite(n)) throw ArgumentError("intensity must be positive");
  const std::size_t p = h.base.arity;
  const double coefficient = options.rhs_scale * std::pow(n, static_cast<double>(p)) / factorial(p);
  if (!std::isfinite(coefficient)) throw ArgumentError("n^p / p! is not representable");

  const RandomStream base = rng.split(rng());
  std::vector<double> lhs(trials), rhs(trials);
  parallel_for(trials, options.threads, [&](std::size_t t) {
    RandomStream a = base.split({0, t});
    lhs[t] = static_cast<double>(subset_count(h, sample_poisson(n, f, a)));
    RandomStream b = base.split({1, t});
    const PointCloud xp = sample_binomial(p, f, b);
    const PointCloud x = xp.joined(sample_poisson(n, f, b));
    std::vector<Index> y(p);
    std::iota(y.begin(), y.end(), 0);
    rhs[t] = h(x, y) ? 1.0 : 0.0;
  });
  PalmResult result;
  result.lhs = mean_and_se(lhs);
  result.rhs = mean_and_se(rhs);
  result.rhs.value *= coefficient;
  result.rhs.std_error *= coefficient;
  result.agree = std::abs(result.lhs.value - result.rhs.value) <=
                 options.z * (result.lhs.std_error + result.rhs.std_error);
  return result;
}

double RadiusLaw::operator()(double n) const { return c * std::pow(n, q); }

std::vector<DiagnosticRow> convergence_diagnostic(const SubsetPropertyDescriptor& h, const Density& f,
                                                  RadiusLaw law, const std::vector<double>& n_grid,
                                                  std::size_t trials, RandomStream& rng, std::size_t threads) {
  const double d = static_cast<double>(f.dim());
  if (!(law.q < -1.0 / d)) throw ConfigurationError("radius law is not subcritical: need q < -1/d");
  if (!(law.c > 0.0) || !std::isfinite(law.c)) throw ConfigurationError("radius law needs c > 0");
  if (trials == 0) throw ConfigurationError("trials must be >= 1");
  if (n_grid.empty()) throw ConfigurationError("n grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i)
    if (!(n_grid[i] >= 1.0) || (i && !(n_grid[i] > n_grid[i - 1])))
      throw ConfigurationError("n grid must be positive and strictly increasing");

  const RandomStream base = rng.split(rng());
  const double p = static_cast<double>(h.base.arity);
  std::vector<DiagnosticRow> rows;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const double n = n_grid[i];
    const double r = law(n);
    const auto hr = h.at_scale(r);
    std::vector<double> counts(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
      RandomStream s = base.split({i, t});
      counts[t] = static_cast<double>(subset_count(hr, sample_binomial(static_cast<std::size_t>(std::llround(n)), f, s)));
    });
    const Estimate e = mean_and_se(counts);
    const double norm = n * std::pow(std::pow(r, d) * n, p - 1.0);
    rows.push_back({n, r, e.value, e.std_error, e.value / norm, e.std_error / norm});
  }
  return rows;
}

void write_diagnostic_csv(std::ostream& out, const std::vector<DiagnosticRow>& rows) {
  out << "n,r,count_mean,count_se,ratio,ratio_se\n" << std::setprecision(12);
  for (const auto& row : rows)
    out << row.n << ',' << row.r << ',' << row.count_mean << ',' << row.count_se << ',' << row.ratio << ','
        << row.ratio_se << '\n';
}

}  // namespace cechlab

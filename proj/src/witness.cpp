#include "cechlab/witness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "cechlab/errors.hpp"
#include "cechlab/parallel.hpp"
#include "cechlab/persistence.hpp"
#include "cechlab/sampling.hpp"

namespace cechlab {

bool zeta_indicator(const PointCloud& y, double r, double theta, int k) {
  if (y.empty()) return false;
  return persistent_betti(y, r, theta, k) >= 1;
}

double simplex_inradius(int k) {
  if (k < 0) throw ArgumentError("k must be >= 0");
  const double kk = static_cast<double>(k);
  return std::sqrt(1.0 / ((kk + 1.0) * (kk + 2.0)));
}

namespace {

constexpr std::size_t kMaxWitnessPoints = 2000;

struct Subdivision {
  PointCloud points{1};
  std::size_t rounds = 0;
  double r = 0.0;
};

void check_witness_args(int k, double theta) {
  if (k < 1) throw ArgumentError("witness construction needs k >= 1");
  if (!(theta >= 1.0) || !std::isfinite(theta)) throw ArgumentError("theta must be >= 1");
}

// Boundary of the standard (k+1)-simplex, subdivided until every k-simplex
// has diameter <= r.
Subdivision subdivide_boundary(int k, double theta) {
  check_witness_args(k, theta);
  const std::size_t dim = static_cast<std::size_t>(k) + 2;
  const std::size_t facet_size = static_cast<std::size_t>(k) + 1;

  std::vector<std::vector<double>> vertices(dim, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i) vertices[i][i] = 1.0;
  std::vector<std::vector<std::size_t>> simplices;
  for (std::size_t skip = 0; skip < dim; ++skip) {
    std::vector<std::size_t> facet;
    for (std::size_t i = 0; i < dim; ++i)
      if (i != skip) facet.push_back(i);
    simplices.push_back(facet);
  }

  Subdivision out;
  out.r = 0.99 * simplex_inradius(k) / theta;
  auto max_diameter = [&] {
    double worst = 0.0;
    for (const auto& s : simplices)
      for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
          worst = std::max(worst, distance(vertices[s[a]], vertices[s[b]]));
    return worst;
  };

  while (max_diameter() > out.r) {
    // Barycenters are keyed by their (sorted) vertex set and summed in that
    // order, so shared faces produce identical points.
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::vector<double>> next_vertices;
    auto barycenter = [&](std::vector<std::size_t> set) {
      std::sort(set.begin(), set.end());
      auto [it, inserted] = ids.try_emplace(set, next_vertices.size());
      if (inserted) {
        std::vector<double> c(dim, 0.0);
        for (std::size_t v : set)
          for (std::size_t i = 0; i < dim; ++i) c[i] += vertices[v][i];
        for (double& x : c) x /= static_cast<double>(set.size());
        next_vertices.push_back(std::move(c));
      }
      return it->second;
    };
    std::vector<std::vector<std::size_t>> next_simplices;
    std::vector<std::size_t> perm(facet_size);
    for (const auto& s : simplices) {
      std::iota(perm.begin(), perm.end(), 0);
      do {
        std::vector<std::size_t> chain, child;
        for (std::size_t j = 0; j < facet_size; ++j) {
          chain.push_back(s[perm[j]]);
          child.push_back(barycenter(chain));
        }
        next_simplices.push_back(std::move(child));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    if (next_vertices.size() > kMaxWitnessPoints)
      throw ArgumentError("subdivided witness exceeds " + std::to_string(kMaxWitnessPoints) + " points");
    vertices = std::move(next_vertices);
    simplices = std::move(next_simplices);
    ++out.rounds;
  }

  out.points = PointCloud(dim);
  out.points.reserve(vertices.size());
  for (const auto& v : vertices) out.points.add_point(v);
  return out;
}

}  // namespace

CycleWitness construct_witness(int k, double theta) {
  auto sub = subdivide_boundary(k, theta);
  CycleWitness w;
  w.r = sub.r;
  w.theta = theta;
  w.k = k;
  w.R = simplex_inradius(k);
  w.verified_rank = persistent_betti(sub.points, w.r, theta, k);
  w.points = std::move(sub.points);
  if (w.verified_rank < 1) throw InternalError("subdivided simplex boundary failed persistence verification");
  return w;
}

std::size_t witness_subdivision_rounds(int k, double theta) { return subdivide_boundary(k, theta).rounds; }

double perturbation_radius(double R, double r, double theta) {
  if (!(r > 0.0) || !(theta >= 1.0) || !std::isfinite(R)) throw ArgumentError("need r > 0 and theta >= 1");
  if (!(R > theta * r)) throw ArgumentError("perturbation radius needs R > theta r");
  return (R - theta * r) / (theta + 1.0);
}

double perturb_and_verify(const CycleWitness& w, RandomStream& rng, std::size_t trials, double delta_scale) {
  const double delta = perturbation_radius(w.R, w.r, w.theta) * delta_scale;
  if (trials == 0) {
    std::cerr << "warning: perturb_and_verify with 0 trials is vacuously successful\n";
    return 1.0;
  }
  const std::size_t dim = w.points.dim();
  std::size_t ok = 0;
  std::vector<double> x(dim), shift(dim);
  for (std::size_t t = 0; t < trials; ++t) {
    PointCloud moved(dim);
    moved.reserve(w.points.size());
    for (Index i = 0; i < w.points.size(); ++i) {
      sample_in_ball(rng, delta, shift);
      for (std::size_t c = 0; c < dim; ++c) x[c] = w.points.point(i)[c] + shift[c];
      moved.add_point(x);
    }
    ok += persistent_betti(moved, w.r + delta, w.theta, w.k) >= 1;
  }
  return static_cast<double>(ok) / static_cast<double>(trials);
}

namespace {

std::optional<CycleWitness> try_configuration(PointCloud cloud, int k, double theta, std::size_t grid) {
  const double diam = cloud.diameter();
  if (!(diam > 0.0)) return std::nullopt;
  cloud = cloud.scaled(1.0 / diam);
  const double lo = cloud.min_pairwise_distance() / 2.0;
  const double hi = cloud.diameter() / 2.0;
  if (!(lo > 0.0)) return std::nullopt;
  const double r_max = theta * hi;
  const std::size_t kk = static_cast<std::size_t>(k);
  CechBuildOptions opts;
  opts.force_dim = kk + 1 > kDefaultMaxDimCap;
  const auto diagram = compute_persistence(build_cech_filtration(cloud, r_max, k + 1, opts));

  std::vector<double> radii;
  for (std::size_t j = 0; j < grid; ++j)
    radii.push_back(grid == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(j) / static_cast<double>(grid - 1)));
  for (const auto& iv : diagram.in_dimension(kk))
    if (iv.birth <= hi) radii.push_back(iv.birth);
  std::sort(radii.begin(), radii.end());

  for (double r : radii) {
    if (!(r > 0.0) || diagram.persistent_betti(kk, r, theta * r) == 0) continue;
    const std::size_t rank = persistent_betti(cloud, r, theta, k);
    if (rank == 0) continue;
    double R = theta * r;
    for (const auto& iv : diagram.in_dimension(kk))
      if (iv.birth <= r && iv.death > theta * r) R = std::max(R, std::min(iv.death, r_max));
    return CycleWitness{std::move(cloud), r, theta, k, R, rank};
  }
  return std::nullopt;
}

// Longest relative lifetime in dimension k, deaths capped at 4x birth.
double lifetime_ratio(const PointCloud& cloud, int k) {
  const double diam = cloud.diameter();
  if (!(diam > 0.0)) return 0.0;
  const auto diagram = compute_persistence(build_cech_filtration(cloud, 2.0 * diam, k + 1));
  double best = 0.0;
  for (const auto& iv : diagram.in_dimension(static_cast<std::size_t>(k)))
    if (iv.birth > 0.0) best = std::max(best, std::min(iv.death, 4.0 * iv.birth) / iv.birth);
  return best;
}

// Gaussian coordinate moves, accepted when the ratio does not decrease; the
// step halves after 16 consecutive rejections.
std::vector<double> refine_configuration(std::vector<double> coords, std::size_t d, int k, std::size_t steps,
                                         RandomStream& s) {
  double score = lifetime_ratio(PointCloud(d, coords), k);
  double step = 0.05;
  std::size_t misses = 0;
  std::vector<double> trial(coords.size());
  for (std::size_t i = 0; i < steps; ++i) {
    for (std::size_t c = 0; c < coords.size(); ++c) trial[c] = coords[c] + step * s.normal();
    const double next = lifetime_ratio(PointCloud(d, trial), k);
    if (next >= score) {
      coords.swap(trial);
      score = next;
      misses = 0;
    } else if (++misses == 16) {
      step *= 0.5;
      misses = 0;
    }
  }
  return coords;
}

}  // namespace

std::optional<CycleWitness> search_m(std::size_t d, int k, double theta, std::size_t p, std::size_t trials,
                                     RandomStream& rng, SearchOptions options) {
  if (d == 0) throw ArgumentError("dimension must be >= 1");
  if (k < 0) throw ArgumentError("homology dimension must be >= 0");
  if (!(theta >= 1.0) || !std::isfinite(theta)) throw ArgumentError("theta must be >= 1");
  if (options.radius_grid == 0) throw ArgumentError("radius grid must be nonempty");
  const RandomStream base = rng.split(rng());
  std::atomic<std::size_t> best{std::numeric_limits<std::size_t>::max()};
  std::optional<CycleWitness> found;
  std::mutex found_mutex;
  parallel_for(trials, options.threads, [&](std::size_t t) {
    if (t > best.load()) return;
    RandomStream s = base.split(t);
    std::vector<double> coords(p * d);
    for (double& v : coords) v = s.uniform();
    if (options.refine_steps > 0 && p >= 2) coords = refine_configuration(std::move(coords), d, k, options.refine_steps, s);
    auto w = try_configuration(PointCloud(d, std::move(coords)), k, theta, options.radius_grid);
    if (!w) return;
    std::lock_guard lock(found_mutex);
    if (t < best.load()) {
      best = t;
      found = std::move(w);
    }
  });
  return found;
}

MBracket bracket_m(std::size_t d, int k, double theta, std::size_t p_max, std::size_t trials, RandomStream& rng,
                   SearchOptions options) {
  MBracket b;
  b.theta = theta;
  b.k = k;
  b.d = d;
  b.lower_searched = static_cast<std::size_t>(std::max(k, 0)) + 1;
  b.trials_per_p = trials;
  for (std::size_t p = b.lower_searched + 1; p <= p_max; ++p) {
    if (auto w = search_m(d, k, theta, p, trials, rng, options)) {
      b.upper = p;
      b.witness = std::move(w);
      return b;
    }
    b.lower_searched = p;
  }
  return b;
}

namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  // After step i the value is C(n - k + i, i), so each division is exact.
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) throw ArgumentError("binomial overflow");
  }
  return static_cast<std::uint64_t>(result);
}

}  // namespace

std::uint64_t upper_bound_constant(std::size_t p, int k, std::size_t m) {
  if (k < 0) throw ArgumentError("homology dimension must be >= 0");
  if (p < m) return 0;
  std::uint64_t total = 0;
  for (std::size_t q = m; q <= p; ++q) {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(binomial(p, q)) * binomial(q, static_cast<std::uint64_t>(k) + 1);
    if (wide > std::numeric_limits<std::uint64_t>::max()) throw ArgumentError("constant overflows 64 bits");
    const auto term = static_cast<std::uint64_t>(wide);
    if (total > std::numeric_limits<std::uint64_t>::max() - term) throw ArgumentError("constant overflows 64 bits");
    total += term;
  }
  return total;
}

void write_witness(std::ostream& out, const CycleWitness& w) {
  out << std::setprecision(17) << w.k << ' ' << w.theta << ' ' << w.r << ' ' << w.R << ' ' << w.verified_rank
      << '\n';
  write_point_cloud(out, w.points);
}

CycleWitness read_witness(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ArgumentError("witness file is empty");
  std::istringstream h(header);
  CycleWitness w;
  if (!(h >> w.k >> w.theta >> w.r >> w.R >> w.verified_rank))
    throw ArgumentError("witness header must be `k theta r R rank`");
  w.points = read_point_cloud(in);
  const std::size_t rank = persistent_betti(w.points, w.r, w.theta, w.k);
  if (rank < 1) throw ArgumentError("witness does not carry a persistent cycle");
  if (rank != w.verified_rank) throw ArgumentError("witness rank differs from the recorded rank");
  if (!(w.R >= w.theta * w.r)) throw ArgumentError("witness needs R >= theta r");
  return w;
}

}  // namespace cechlab

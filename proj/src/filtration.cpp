#include "cechlab/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "cechlab/errors.hpp"
#include "cechlab/field.hpp"
#include "cechlab/geometric_graph.hpp"
#include "cechlab/miniball.hpp"

namespace cechlab {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

FieldSpec::FieldSpec(std::uint32_t characteristic) : p_(characteristic) {
  if (!is_prime(characteristic) || characteristic > (1u << 30))
    throw ArgumentError("field characteristic must be a prime below 2^30");
}

std::uint32_t FieldSpec::inverse(std::uint32_t a) const {
  if (a % p_ == 0) throw ArgumentError("zero has no inverse");
  // Fermat: a^(p-2).
  std::uint64_t result = 1, base = a % p_, e = p_ - 2;
  while (e) {
    if (e & 1) result = result * base % p_;
    base = base * base % p_;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

FilteredComplex::FilteredComplex(std::size_t vertex_count, std::size_t max_dim)
    : vertex_count_(vertex_count), max_dim_(max_dim) {
  if (vertex_count > std::numeric_limits<Vertex>::max())
    throw ArgumentError("too many vertices for a filtered complex");
  const std::size_t k_max = max_dim + 1;
  binomial_.assign(vertex_count + 1, std::vector<std::uint64_t>(k_max + 1, 0));
  for (std::size_t n = 0; n <= vertex_count; ++n) {
    binomial_[n][0] = 1;
    for (std::size_t k = 1; k <= std::min(n, k_max); ++k) {
      const std::uint64_t a = binomial_[n - 1][k - 1];
      const std::uint64_t b = k <= n - 1 ? binomial_[n - 1][k] : 0;
      if (a > std::numeric_limits<std::uint64_t>::max() - b)
        throw ArgumentError("simplex keys overflow 64 bits; reduce the point count or max_dim");
      binomial_[n][k] = a + b;
    }
  }
}

std::uint64_t FilteredComplex::key(std::span<const Vertex> v) const {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < v.size(); ++i) k += binomial_[v[i]][i + 1];
  return k;
}

std::optional<std::size_t> FilteredComplex::lookup(std::size_t dim, std::uint64_t k) const {
  const auto& idx = index_[dim];
  auto it = std::lower_bound(idx.begin(), idx.end(), std::pair<std::uint64_t, std::uint32_t>{k, 0});
  if (it == idx.end() || it->first != k) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> FilteredComplex::find(std::span<const Vertex> vertices) const {
  if (vertices.empty() || vertices.size() > max_dim_ + 1) return std::nullopt;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] >= vertex_count_) return std::nullopt;
    if (i && vertices[i] <= vertices[i - 1]) return std::nullopt;
  }
  return lookup(vertices.size() - 1, key(vertices));
}

std::vector<std::size_t> FilteredComplex::counts_by_dim() const {
  std::vector<std::size_t> counts(max_dim_ + 1, 0);
  for (auto d : dims_) ++counts[d];
  return counts;
}

void FilteredComplex::add(std::span<const Vertex> sorted_vertices, double value) {
  const std::size_t d = sorted_vertices.size() - 1;
  if (sorted_vertices.empty() || d > max_dim_) throw ArgumentError("simplex exceeds max_dim");
  const std::size_t base = vertices_.size();
  vertices_.resize(base + stride(), 0);
  std::copy(sorted_vertices.begin(), sorted_vertices.end(), vertices_.begin() + static_cast<std::ptrdiff_t>(base));
  dims_.push_back(static_cast<std::uint8_t>(d));
  values_.push_back(value);
}

void FilteredComplex::finalize() {
  const std::size_t n = size();
  auto rebuild_index = [this] {
    index_.assign(max_dim_ + 1, {});
    for (std::size_t i = 0; i < size(); ++i) index_[dims_[i]].emplace_back(key(vertices(i)), static_cast<std::uint32_t>(i));
    for (auto& idx : index_) std::sort(idx.begin(), idx.end());
  };
  rebuild_index();

  // Face monotonicity, dimension by dimension. A simplex whose facet is
  // missing (possible only through rounding at the r_max cutoff) is dropped.
  std::vector<char> keep(n, 1);
  std::vector<Vertex> facet;
  for (std::size_t d = 1; d <= max_dim_; ++d) {
    for (auto [k, pos] : index_[d]) {
      auto v = vertices(pos);
      double value = values_[pos];
      for (std::size_t skip = 0; skip <= d && keep[pos]; ++skip) {
        facet.clear();
        for (std::size_t i = 0; i <= d; ++i)
          if (i != skip) facet.push_back(v[i]);
        auto f = lookup(d - 1, key(facet));
        if (!f || !keep[*f]) {
          keep[pos] = 0;
        } else {
          value = std::max(value, values_[*f]);
        }
      }
      values_[pos] = value;
    }
  }

  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (keep[i]) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values_[a] != values_[b]) return values_[a] < values_[b];
    if (dims_[a] != dims_[b]) return dims_[a] < dims_[b];
    auto va = vertices(a), vb = vertices(b);
    return std::lexicographical_compare(va.begin(), va.end(), vb.begin(), vb.end());
  });

  std::vector<Vertex> vertices(order.size() * stride());
  std::vector<std::uint8_t> dims(order.size());
  std::vector<double> values(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::copy_n(vertices_.begin() + static_cast<std::ptrdiff_t>(order[i] * stride()), stride(),
                vertices.begin() + static_cast<std::ptrdiff_t>(i * stride()));
    dims[i] = dims_[order[i]];
    values[i] = values_[order[i]];
  }
  vertices_ = std::move(vertices);
  dims_ = std::move(dims);
  values_ = std::move(values);
  rebuild_index();
}

std::string FilteredComplex::validate() const {
  std::ostringstream err;
  std::vector<Vertex> facet;
  std::size_t vertex_simplices = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    auto v = vertices(i);
    if (dims_[i] == 0) {
      ++vertex_simplices;
      if (values_[i] != 0.0) err << "vertex " << v[0] << " has nonzero value\n";
      continue;
    }
    for (std::size_t skip = 0; skip < v.size(); ++skip) {
      facet.clear();
      for (std::size_t j = 0; j < v.size(); ++j)
        if (j != skip) facet.push_back(v[j]);
      auto f = find(facet);
      if (!f) {
        err << "simplex " << i << " is missing a facet\n";
      } else if (*f >= i || values_[*f] > values_[i]) {
        err << "simplex " << i << " precedes or undercuts its facet " << *f << "\n";
      }
    }
  }
  if (vertex_simplices != vertex_count_) err << "vertex count mismatch\n";
  return err.str();
}

namespace detail {

FilteredComplex build_cech_filtration_closed(const PointCloud& cloud, double r_max,
                                             std::size_t max_dim, CechBuildOptions options) {
  if (max_dim > kDefaultMaxDimCap && !options.force_dim)
    throw ArgumentError("max_dim above " + std::to_string(kDefaultMaxDimCap) +
                        " requires force_dim (combinatorial blowup)");
  const std::size_t n = cloud.size();
  FilteredComplex complex(n, max_dim);
  for (Vertex v = 0; v < n; ++v) {
    const Vertex s[1] = {v};
    complex.add(s, 0.0);
  }
  if (max_dim >= 1 && n >= 2) {
    // Padding guards the candidate graph against rounding at the cutoff;
    // membership is decided by the miniball radius alone.
    const auto graph = geometric_graph(cloud, 2.0 * r_max * (1.0 + 1e-9));
    std::vector<std::vector<Index>> up(n);
    for (auto [i, j] : graph.edges) up[i].push_back(j);

    MiniballSolver solver(cloud.dim());
    std::vector<Index> clique;
    std::vector<Vertex> as_vertices;
    // candidates[level] holds the common up-neighbors of the current clique.
    std::vector<std::vector<Index>> candidates(max_dim + 2);

    auto extend = [&](auto&& self, std::size_t level, double parent_value) -> void {
      const auto& cand = candidates[level];
      for (std::size_t c = 0; c < cand.size(); ++c) {
        const Index u = cand[c];
        clique.push_back(u);
        const double value = std::max(parent_value, solver.radius(cloud, clique));
        if (value <= r_max) {
          as_vertices.assign(clique.begin(), clique.end());
          complex.add(as_vertices, value);
          if (clique.size() < max_dim + 1) {
            auto& next = candidates[level + 1];
            next.clear();
            const auto& nb = up[u];
            std::set_intersection(cand.begin() + static_cast<std::ptrdiff_t>(c + 1), cand.end(),
                                  nb.begin(), nb.end(), std::back_inserter(next));
            if (!next.empty()) self(self, level + 1, value);
          }
        }
        clique.pop_back();
      }
    };

    for (Index v = 0; v < n; ++v) {
      if (up[v].empty()) continue;
      clique.assign(1, v);
      candidates[0] = up[v];
      extend(extend, 0, 0.0);
    }
  }
  complex.finalize();
  return complex;
}

}  // namespace detail

FilteredComplex build_cech_filtration(const PointCloud& cloud, double r_max, int max_dim,
                                      CechBuildOptions options) {
  if (max_dim < 0) throw ArgumentError("max_dim must be >= 0");
  if (!(r_max > 0.0) || std::isinf(r_max)) throw ArgumentError("r_max must be positive and finite");
  return detail::build_cech_filtration_closed(cloud, r_max, static_cast<std::size_t>(max_dim), options);
}

}  // namespace cechlab

#include "cechlab/small_graph.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "cechlab/errors.hpp"

namespace cechlab {

SmallGraph::SmallGraph(std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges)
    : n_(vertices) {
  if (vertices == 0 || vertices > kMaxVertices) throw ArgumentError("small graphs have 1 to 8 vertices");
  for (auto [a, b] : edges) {
    if (a >= n_ || b >= n_ || a == b) throw ArgumentError("invalid small-graph edge");
    adj_[a] |= static_cast<std::uint8_t>(1u << b);
    adj_[b] |= static_cast<std::uint8_t>(1u << a);
  }
}

SmallGraph SmallGraph::complete(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return SmallGraph(n, e);
}

SmallGraph SmallGraph::path(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return SmallGraph(n, e);
}

SmallGraph SmallGraph::cycle(std::size_t n) {
  if (n < 3) throw ArgumentError("cycles need at least 3 vertices");
  auto g = path(n);
  g.adj_[0] |= static_cast<std::uint8_t>(1u << (n - 1));
  g.adj_[n - 1] |= 1u;
  return g;
}

SmallGraph SmallGraph::geometric(const PointCloud& y, double r) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (Index i = 0; i < y.size(); ++i)
    for (Index j = i + 1; j < y.size(); ++j)
      if (y.squared_distance(i, j) <= r * r) e.emplace_back(i, j);
  return SmallGraph(y.size(), e);
}

std::size_t SmallGraph::degree(std::size_t v) const noexcept {
  return static_cast<std::size_t>(std::popcount(static_cast<unsigned>(adj_[v])));
}

std::size_t SmallGraph::edge_count() const noexcept {
  std::size_t twice = 0;
  for (std::size_t v = 0; v < n_; ++v) twice += degree(v);
  return twice / 2;
}

bool SmallGraph::connected() const noexcept {
  unsigned seen = 1, frontier = 1;
  while (frontier) {
    unsigned next = 0;
    for (std::size_t v = 0; v < n_; ++v)
      if (frontier >> v & 1u) next |= adj_[v];
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == (1u << n_) - 1u;
}

bool SmallGraph::isomorphic(const SmallGraph& other) const {
  if (n_ != other.n_ || edge_count() != other.edge_count()) return false;
  std::array<std::size_t, kMaxVertices> da{}, db{};
  for (std::size_t v = 0; v < n_; ++v) {
    da[v] = degree(v);
    db[v] = other.degree(v);
  }
  auto sa = da, sb = db;
  std::sort(sa.begin(), sa.begin() + static_cast<std::ptrdiff_t>(n_));
  std::sort(sb.begin(), sb.begin() + static_cast<std::ptrdiff_t>(n_));
  if (sa != sb) return false;

  // map[v] = image of this-vertex v in other.
  std::array<std::size_t, kMaxVertices> map{};
  unsigned used = 0;
  auto extend = [&](auto&& self, std::size_t v) -> bool {
    if (v == n_) return true;
    for (std::size_t w = 0; w < n_; ++w) {
      if (used >> w & 1u || db[w] != da[v]) continue;
      bool ok = true;
      for (std::size_t u = 0; u < v && ok; ++u) ok = has_edge(u, v) == other.has_edge(map[u], w);
      if (!ok) continue;
      map[v] = w;
      used |= 1u << w;
      if (self(self, v + 1)) return true;
      used &= ~(1u << w);
    }
    return false;
  };
  return extend(extend, 0);
}

std::string SmallGraph::describe() const {
  std::ostringstream s;
  s << "graph(" << n_ << ";";
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = a + 1; b < n_; ++b)
      if (has_edge(a, b)) s << ' ' << a << '-' << b;
  s << ')';
  return s.str();
}

}  // namespace cechlab

#include "cechlab/geometric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cechlab/errors.hpp"
#include "cechlab/spatial_grid.hpp"

namespace cechlab {

std::vector<std::vector<Index>> GeometricGraph::adjacency() const {
  std::vector<std::vector<Index>> adj(vertex_count);
  for (auto [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

GeometricGraph geometric_graph(const PointCloud& cloud, double r) {
  if (!(r >= 0.0) || std::isinf(r)) throw ArgumentError("graph scale must be finite and >= 0");
  GeometricGraph g;
  g.vertex_count = cloud.size();
  g.scale = r;
  const SpatialGrid grid(cloud, r);
  for (Index i = 0; i < cloud.size(); ++i) {
    const std::size_t first = g.edges.size();
    grid.for_each_within(cloud.point(i), r, [&](Index j, double) {
      if (j > i) g.edges.emplace_back(i, j);
    });
    std::sort(g.edges.begin() + static_cast<std::ptrdiff_t>(first), g.edges.end());
  }
  return g;
}

std::vector<Index> component_labels(const GeometricGraph& graph) {
  std::vector<Index> parent(graph.vertex_count);
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [i, j] : graph.edges) {
    Index a = find(i), b = find(j);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  for (Index v = 0; v < parent.size(); ++v) parent[v] = find(v);
  return parent;
}

}  // namespace cechlab

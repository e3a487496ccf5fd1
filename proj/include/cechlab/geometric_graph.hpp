#pragma once

#include <utility>
#include <vector>

#include "cechlab/point_cloud.hpp"

namespace cechlab {

/// G(P, r): an edge {i, j} for every pair at distance <= r (closed
/// condition, evaluated as squared distance <= r * r).
struct GeometricGraph {
  std::size_t vertex_count = 0;
  double scale = 0.0;
  std::vector<std::pair<Index, Index>> edges;  // i < j, lexicographically sorted

  /// Sorted neighbor lists.
  std::vector<std::vector<Index>> adjacency() const;
};

/// Grid-bucketed construction; expected work near-linear in the edge count.
GeometricGraph geometric_graph(const PointCloud& cloud, double r);

/// Connected components of the graph as a label per vertex (labels are the
/// smallest vertex index of each component).
std::vector<Index> component_labels(const GeometricGraph& graph);

}  // namespace cechlab

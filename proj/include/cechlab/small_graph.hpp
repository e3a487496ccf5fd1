#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cechlab/point_cloud.hpp"

namespace cechlab {

/// Simple undirected graph on at most 8 vertices, stored as adjacency bitmasks.
class SmallGraph {
 public:
  static constexpr std::size_t kMaxVertices = 8;

  explicit SmallGraph(std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges = {});

  static SmallGraph complete(std::size_t n);
  static SmallGraph path(std::size_t n);
  static SmallGraph cycle(std::size_t n);
  /// G(Y, r): an edge for every pair at distance <= r.
  static SmallGraph geometric(const PointCloud& y, double r);

  std::size_t size() const noexcept { return n_; }
  bool has_edge(std::size_t a, std::size_t b) const noexcept { return adj_[a] >> b & 1u; }
  std::size_t degree(std::size_t v) const noexcept;
  std::size_t edge_count() const noexcept;
  bool connected() const noexcept;

  /// Backtracking over vertex maps, pruned by degree.
  bool isomorphic(const SmallGraph& other) const;

  std::string describe() const;

 private:
  std::size_t n_;
  std::array<std::uint8_t, kMaxVertices> adj_{};
};

}  // namespace cechlab

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "cechlab/point_cloud.hpp"

namespace cechlab {

/// Uniform hash grid for fixed-radius queries.
///
/// Points are bucketed into cubic cells of width `cell_width` and stored
/// cell-contiguous in structure-of-arrays form, so each neighbor-cell scan is
/// a single SIMD distance-kernel call. Queries with radius <= cell_width visit
/// the 3^d surrounding cells. For d > kMaxGridDim, zero width, or coordinate
/// ranges that would overflow the cell index, the grid degenerates to one
/// bucket holding every point (brute force through the same kernels).
class SpatialGrid {
 public:
  static constexpr std::size_t kMaxGridDim = 6;

  SpatialGrid(const PointCloud& cloud, double cell_width);

  const PointCloud& cloud() const noexcept { return *cloud_; }
  double cell_width() const noexcept { return width_; }
  bool brute_force() const noexcept { return brute_; }

  /// Calls visit(original_index, squared_distance) for every point with
  /// squared distance <= radius^2 from `query`. Requires radius <= cell_width
  /// unless brute_force().
  template <typename Visit>
  void for_each_within(std::span<const double> query, double radius, Visit&& visit) const;

  /// Indices (ascending) of points within `radius` of `query`.
  std::vector<Index> within(std::span<const double> query, double radius) const;

  /// True if some point whose index is not in `exclude` (sorted ascending)
  /// lies within squared distance <= r2 of `query`.
  bool any_within_excluding(std::span<const double> query, double radius,
                            std::span<const Index> exclude) const;

 private:
  using CellKey = std::array<std::int64_t, kMaxGridDim>;
  struct CellHash {
    std::size_t operator()(const CellKey& k) const noexcept;
  };
  struct Range {
    std::uint32_t begin, end;
  };

  CellKey cell_of(std::span<const double> x) const;
  template <typename Fn>
  void for_each_neighbor_cell(const CellKey& center, Fn&& fn) const;
  void column_pointers(std::uint32_t begin, const double** out) const;

  const PointCloud* cloud_;
  double width_;
  bool brute_ = false;
  std::vector<Index> order_;           // sorted position -> original index
  std::vector<std::vector<double>> soa_;  // soa_[c][sorted position]
  std::unordered_map<CellKey, Range, CellHash> cells_;
};

}  // namespace cechlab

#include "cechlab/simd/distance_kernels.hpp"

namespace cechlab {

template <typename Fn>
void SpatialGrid::for_each_neighbor_cell(const CellKey& center, Fn&& fn) const {
  const std::size_t d = cloud_->dim();
  CellKey key = center;
  std::array<int, kMaxGridDim> offset{};
  offset.fill(-1);
  for (;;) {
    for (std::size_t c = 0; c < d; ++c) key[c] = center[c] + offset[c];
    if (auto it = cells_.find(key); it != cells_.end()) fn(it->second);
    std::size_t c = 0;
    while (c < d && offset[c] == 1) offset[c++] = -1;
    if (c == d) break;
    ++offset[c];
  }
}

template <typename Visit>
void SpatialGrid::for_each_within(std::span<const double> query, double radius, Visit&& visit) const {
  const auto& k = simd::kernels();
  const double r2 = radius * radius;
  const std::size_t d = cloud_->dim();
  thread_local std::vector<const double*> cols;
  thread_local std::vector<double> dist;
  cols.resize(d);
  auto scan = [&](Range range) {
    const std::size_t count = range.end - range.begin;
    if (dist.size() < count) dist.resize(count);
    column_pointers(range.begin, cols.data());
    k.squared_distances(cols.data(), d, count, query.data(), dist.data());
    for (std::size_t i = 0; i < count; ++i)
      if (dist[i] <= r2) visit(order_[range.begin + i], dist[i]);
  };
  if (brute_) {
    if (!order_.empty()) scan(Range{0, static_cast<std::uint32_t>(order_.size())});
    return;
  }
  for_each_neighbor_cell(cell_of(query), scan);
}

}  // namespace cechlab

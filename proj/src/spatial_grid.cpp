#include "cechlab/spatial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cechlab/errors.hpp"

namespace cechlab {

namespace {

// Cell coordinates beyond this magnitude are not exactly representable as
// floor(x / w) in a double-to-int64 conversion.
constexpr double kMaxCellCoordinate = 1e15;

}  // namespace

std::size_t SpatialGrid::CellHash::operator()(const CellKey& k) const noexcept {
  std::uint64_t h = 0x84222325cbf29ce4ULL;
  for (auto v : k) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

SpatialGrid::SpatialGrid(const PointCloud& cloud, double cell_width)
    : cloud_(&cloud), width_(cell_width) {
  if (!(cell_width >= 0.0) || std::isinf(cell_width))
    throw ArgumentError("grid cell width must be finite and non-negative");
  const std::size_t n = cloud.size();
  const std::size_t d = cloud.dim();
  if (n > std::numeric_limits<std::uint32_t>::max())
    throw ArgumentError("spatial grid supports at most 2^32 - 1 points");

  brute_ = d > kMaxGridDim || cell_width == 0.0;
  if (!brute_) {
    for (double v : cloud.coords())
      if (std::abs(v) / cell_width > kMaxCellCoordinate) {
        brute_ = true;
        break;
      }
  }

  order_.resize(n);
  std::iota(order_.begin(), order_.end(), Index{0});
  std::vector<CellKey> keys;
  if (!brute_) {
    keys.resize(n);
    for (Index i = 0; i < n; ++i) keys[i] = cell_of(cloud.point(i));
    std::stable_sort(order_.begin(), order_.end(),
                     [&](Index a, Index b) { return keys[a] < keys[b]; });
  }

  soa_.assign(d, std::vector<double>(n));
  for (std::size_t pos = 0; pos < n; ++pos) {
    auto p = cloud.point(order_[pos]);
    for (std::size_t c = 0; c < d; ++c) soa_[c][pos] = p[c];
  }

  if (!brute_) {
    cells_.reserve(n);
    for (std::size_t pos = 0; pos < n;) {
      std::size_t end = pos + 1;
      while (end < n && keys[order_[end]] == keys[order_[pos]]) ++end;
      cells_.emplace(keys[order_[pos]],
                     Range{static_cast<std::uint32_t>(pos), static_cast<std::uint32_t>(end)});
      pos = end;
    }
  }
}

SpatialGrid::CellKey SpatialGrid::cell_of(std::span<const double> x) const {
  CellKey key{};
  for (std::size_t c = 0; c < x.size(); ++c)
    key[c] = static_cast<std::int64_t>(std::floor(x[c] / width_));
  return key;
}

void SpatialGrid::column_pointers(std::uint32_t begin, const double** out) const {
  for (std::size_t c = 0; c < soa_.size(); ++c) out[c] = soa_[c].data() + begin;
}

std::vector<Index> SpatialGrid::within(std::span<const double> query, double radius) const {
  std::vector<Index> out;
  for_each_within(query, radius, [&](Index j, double) { out.push_back(j); });
  std::sort(out.begin(), out.end());
  return out;
}

bool SpatialGrid::any_within_excluding(std::span<const double> query, double radius,
                                       std::span<const Index> exclude) const {
  bool found = false;
  for_each_within(query, radius, [&](Index j, double) {
    if (!found && !std::binary_search(exclude.begin(), exclude.end(), j)) found = true;
  });
  return found;
}

}  // namespace cechlab

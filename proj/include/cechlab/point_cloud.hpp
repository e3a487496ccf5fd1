#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cechlab {

using Index = std::size_t;

/// Finite labeled point set in R^d with 64-bit coordinates, stored row-major.
///
/// Point indices are stable identifiers. Duplicate coordinates are allowed
/// (the cloud is a multiset of labeled vertices) and reported by
/// duplicate_pairs().
class PointCloud {
 public:
  explicit PointCloud(std::size_t dim);
  PointCloud(std::size_t dim, std::vector<double> coords);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> point(Index i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<const double> coords() const noexcept { return coords_; }

  void add_point(std::span<const double> x);
  void reserve(std::size_t n) { coords_.reserve(n * dim_); }

  PointCloud subset(std::span<const Index> indices) const;
  PointCloud translated(std::span<const double> t) const;
  PointCloud scaled(double factor) const;

  /// Concatenation; indices of `other` are shifted by size().
  PointCloud joined(const PointCloud& other) const;

  /// Pairs (i, j), i < j, with bit-identical coordinates.
  std::vector<std::pair<Index, Index>> duplicate_pairs() const;

  double squared_distance(Index i, Index j) const;
  double distance(Index i, Index j) const;

  /// Max pairwise distance (0 for fewer than two points). Quadratic.
  double diameter() const;
  /// Min pairwise distance (+inf for fewer than two points). Quadratic.
  double min_pairwise_distance() const;

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

/// Plain-text format: a header line `d N` followed by N lines of d
/// space-separated decimals. Written with 17 significant digits so reading
/// back reproduces the cloud exactly.
void write_point_cloud(std::ostream& out, const PointCloud& cloud);
PointCloud read_point_cloud(std::istream& in);

void save_point_cloud(const std::string& path, const PointCloud& cloud);
PointCloud load_point_cloud(const std::string& path);

}  // namespace cechlab

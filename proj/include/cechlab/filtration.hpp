#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cechlab/point_cloud.hpp"

namespace cechlab {

using Vertex = std::uint32_t;

/// Simplices up to a dimension cap, each valued by its filtration value,
/// sorted by (value, dimension, lexicographic vertex tuple). The order is a
/// valid filtration order: every face precedes its cofaces.
class FilteredComplex {
 public:
  FilteredComplex(std::size_t vertex_count, std::size_t max_dim);

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t max_dim() const noexcept { return max_dim_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::size_t dim(std::size_t i) const noexcept { return dims_[i]; }
  double value(std::size_t i) const noexcept { return values_[i]; }
  std::span<const Vertex> vertices(std::size_t i) const noexcept {
    return {vertices_.data() + i * stride(), dims_[i] + std::size_t{1}};
  }

  /// Filtration position of the simplex with the given sorted vertices.
  std::optional<std::size_t> find(std::span<const Vertex> vertices) const;

  /// Count of simplices per dimension.
  std::vector<std::size_t> counts_by_dim() const;

  /// Appends a simplex; finalize() must be called before use.
  void add(std::span<const Vertex> sorted_vertices, double value);
  /// Raises values to enforce face monotonicity, sorts into filtration
  /// order and builds the face lookup index.
  void finalize();

  /// Checks the documented invariants; returns an empty string when valid.
  std::string validate() const;

 private:
  std::size_t stride() const noexcept { return max_dim_ + 1; }
  std::uint64_t key(std::span<const Vertex> v) const;
  std::optional<std::size_t> lookup(std::size_t dim, std::uint64_t key) const;

  std::size_t vertex_count_;
  std::size_t max_dim_;
  std::vector<Vertex> vertices_;
  std::vector<std::uint8_t> dims_;
  std::vector<double> values_;
  std::vector<std::vector<std::uint64_t>> binomial_;
  // Per dimension: (combinatorial key, filtration position), sorted by key.
  std::vector<std::vector<std::pair<std::uint64_t, std::uint32_t>>> index_;
};

struct CechBuildOptions {
  /// Allow max_dim above kDefaultMaxDimCap.
  bool force_dim = false;
};

inline constexpr std::size_t kDefaultMaxDimCap = 3;

/// Čech filtration truncated at r_max: every simplex with at most max_dim + 1
/// vertices whose miniball radius is <= r_max, valued at that radius.
/// Candidates are cliques of G(P, 2 r_max).
FilteredComplex build_cech_filtration(const PointCloud& cloud, double r_max, int max_dim,
                                      CechBuildOptions options = {});

namespace detail {
/// Same as build_cech_filtration but accepts r_max == 0.
FilteredComplex build_cech_filtration_closed(const PointCloud& cloud, double r_max,
                                             std::size_t max_dim, CechBuildOptions options);
}  // namespace detail

}  // namespace cechlab

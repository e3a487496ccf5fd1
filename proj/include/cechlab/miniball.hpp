#pragma once

#include <span>
#include <vector>

#include "cechlab/point_cloud.hpp"

namespace cechlab {

struct Ball {
  std::vector<double> center;
  double radius = 0.0;
};

/// Smallest enclosing ball via move-to-front Welzl recursion.
///
/// The returned ball is recomputed from its support set (sorted by input
/// position, redundant support points removed), so two point lists that share
/// a support yield bit-identical radii. This keeps Čech filtration values of a
/// simplex and of the face spanning its support exactly equal.
///
/// Holds scratch buffers; reuse one solver per thread.
class MiniballSolver {
 public:
  explicit MiniballSolver(std::size_t dim);

  /// Ball of the listed points of `cloud`.
  Ball solve(const PointCloud& cloud, std::span<const Index> indices);
  double radius(const PointCloud& cloud, std::span<const Index> indices);

  /// Support set (positions into `indices`) of the last solve, ascending.
  const std::vector<std::size_t>& support() const noexcept { return support_; }

 private:
  bool circumball(std::span<const std::size_t> support);
  bool contains(std::size_t local) const;
  void welzl(std::size_t end);
  void reduce_support();

  std::size_t dim_;
  std::vector<const double*> pts_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> stack_;
  std::vector<std::size_t> support_;
  std::vector<double> center_;
  double sq_radius_ = -1.0;
  std::vector<double> gram_, rhs_, scratch_;
};

/// Convenience wrapper. Throws ArgumentError on an empty list.
Ball miniball(const PointCloud& points);

}  // namespace cechlab

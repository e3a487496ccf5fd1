#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cechlab/point_cloud.hpp"
#include "cechlab/rng.hpp"

namespace cechlab {

struct Interval {
  double lo;
  double hi;
  double length() const { return hi - lo; }
};

/// Bounded probability density with support inside an axis-aligned box.
///
/// Uniform densities are sampled directly; custom ones by rejection against
/// the uniform proposal on `box()` with acceptance f(x) / bound.
class Density {
 public:
  enum class Kind { UniformBox, CustomBounded };
  using Evaluator = std::function<double(std::span<const double>)>;

  static Density uniform_box(std::vector<Interval> box);
  static Density unit_cube(std::size_t dim);
  /// `evaluator` must vanish outside `box` and never exceed `bound`.
  static Density custom(std::vector<Interval> box, double bound, Evaluator evaluator);

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return box_.size(); }
  const std::vector<Interval>& box() const noexcept { return box_; }
  double box_volume() const;
  double bound() const noexcept { return bound_; }
  double operator()(std::span<const double> x) const;

  /// Draws one point into `out` (size dim()).
  void sample_into(RandomStream& rng, std::span<double> out) const;

  std::string describe() const;

 private:
  Density() = default;
  Kind kind_ = Kind::UniformBox;
  std::vector<Interval> box_;
  double bound_ = 0.0;
  Evaluator evaluator_;
};

}  // namespace cechlab

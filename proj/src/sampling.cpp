#include "cechlab/sampling.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cechlab/errors.hpp"

namespace cechlab {

double RandomStream::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Density Density::uniform_box(std::vector<Interval> box) {
  if (box.empty()) throw ConfigurationError("density box needs at least one dimension");
  for (const auto& iv : box)
    if (!(iv.hi > iv.lo) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw ConfigurationError("density box intervals must satisfy lo < hi");
  Density f;
  f.kind_ = Kind::UniformBox;
  f.box_ = std::move(box);
  f.bound_ = 1.0 / f.box_volume();
  return f;
}

Density Density::unit_cube(std::size_t dim) {
  return uniform_box(std::vector<Interval>(dim, Interval{0.0, 1.0}));
}

Density Density::custom(std::vector<Interval> box, double bound, Evaluator evaluator) {
  Density f = uniform_box(std::move(box));
  if (!(bound > 0.0) || !std::isfinite(bound))
    throw ConfigurationError("custom density needs a finite positive sup bound");
  if (!evaluator) throw ConfigurationError("custom density needs an evaluator");
  f.kind_ = Kind::CustomBounded;
  f.bound_ = bound;
  f.evaluator_ = std::move(evaluator);
  return f;
}

double Density::box_volume() const {
  double v = 1.0;
  for (const auto& iv : box_) v *= iv.length();
  return v;
}

double Density::operator()(std::span<const double> x) const {
  for (std::size_t i = 0; i < box_.size(); ++i)
    if (x[i] < box_[i].lo || x[i] > box_[i].hi) return 0.0;
  return kind_ == Kind::UniformBox ? bound_ : evaluator_(x);
}

void Density::sample_into(RandomStream& rng, std::span<double> out) const {
  constexpr int kMaxRejections = 1'000'000;
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    for (std::size_t i = 0; i < box_.size(); ++i) out[i] = rng.uniform(box_[i].lo, box_[i].hi);
    if (kind_ == Kind::UniformBox) return;
    const double value = evaluator_(out);
    if (!(value >= 0.0) || value > bound_)
      throw ConfigurationError("density evaluator left [0, bound] during sampling");
    if (rng.uniform() * bound_ < value) return;
  }
  throw ConfigurationError("rejection sampler made no progress; density bound too loose?");
}

std::string Density::describe() const {
  std::ostringstream s;
  s << (kind_ == Kind::UniformBox ? "uniform-box" : "custom-bounded") << " [";
  for (std::size_t i = 0; i < box_.size(); ++i)
    s << (i ? "x" : "") << '[' << box_[i].lo << ',' << box_[i].hi << ']';
  s << "] bound=" << bound_;
  return s.str();
}

PointCloud sample_binomial(std::size_t count, const Density& f, RandomStream& rng) {
  PointCloud cloud(f.dim());
  cloud.reserve(count);
  std::vector<double> x(f.dim());
  for (std::size_t i = 0; i < count; ++i) {
    f.sample_into(rng, x);
    cloud.add_point(x);
  }
  return cloud;
}

PointCloud sample_poisson(double intensity, const Density& f, RandomStream& rng) {
  if (!(intensity > 0.0) || !std::isfinite(intensity))
    throw ArgumentError("Poisson intensity must be positive and finite");
  std::poisson_distribution<long long> cardinality(intensity);
  const auto count = static_cast<std::size_t>(cardinality(rng));
  return sample_binomial(count, f, rng);
}

void sample_in_ball(RandomStream& rng, double radius, std::span<double> out) {
  // Rejection from the cube is cheap up to d ~ 5; beyond that use the
  // Gaussian direction with radial inversion.
  if (out.size() <= 5) {
    for (;;) {
      double s = 0.0;
      for (double& v : out) {
        v = rng.uniform(-1.0, 1.0);
        s += v * v;
      }
      if (s < 1.0) {
        for (double& v : out) v *= radius;
        return;
      }
    }
  }
  double s = 0.0;
  for (double& v : out) {
    v = rng.normal();
    s += v * v;
  }
  const double scale = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(out.size())) / std::sqrt(s);
  for (double& v : out) v *= scale;
}

double unit_ball_volume(std::size_t dim) {
  const double d = static_cast<double>(dim);
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

}  // namespace cechlab

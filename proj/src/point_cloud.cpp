#include "cechlab/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "cechlab/errors.hpp"

namespace cechlab {

namespace {

void check_finite(std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v)) throw ArgumentError("point coordinates must be finite");
}

}  // namespace

PointCloud::PointCloud(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ArgumentError("point cloud dimension must be positive");
}

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim == 0) throw ArgumentError("point cloud dimension must be positive");
  if (coords_.size() % dim != 0)
    throw ArgumentError("coordinate count is not a multiple of the dimension");
  check_finite(coords_);
}

void PointCloud::add_point(std::span<const double> x) {
  if (x.size() != dim_) throw ArgumentError("point has wrong number of coordinates");
  check_finite(x);
  coords_.insert(coords_.end(), x.begin(), x.end());
}

PointCloud PointCloud::subset(std::span<const Index> indices) const {
  PointCloud out(dim_);
  out.coords_.reserve(indices.size() * dim_);
  for (Index i : indices) {
    if (i >= size()) throw ArgumentError("subset index out of range");
    auto p = point(i);
    out.coords_.insert(out.coords_.end(), p.begin(), p.end());
  }
  return out;
}

PointCloud PointCloud::translated(std::span<const double> t) const {
  if (t.size() != dim_) throw ArgumentError("translation has wrong dimension");
  PointCloud out = *this;
  for (std::size_t i = 0; i < out.coords_.size(); ++i) out.coords_[i] += t[i % dim_];
  check_finite(out.coords_);
  return out;
}

PointCloud PointCloud::scaled(double factor) const {
  PointCloud out = *this;
  for (double& v : out.coords_) v *= factor;
  check_finite(out.coords_);
  return out;
}

PointCloud PointCloud::joined(const PointCloud& other) const {
  if (other.dim_ != dim_) throw ArgumentError("cannot join clouds of different dimension");
  PointCloud out = *this;
  out.coords_.insert(out.coords_.end(), other.coords_.begin(), other.coords_.end());
  return out;
}

std::vector<std::pair<Index, Index>> PointCloud::duplicate_pairs() const {
  std::vector<Index> order(size());
  std::iota(order.begin(), order.end(), Index{0});
  auto less = [&](Index a, Index b) {
    auto pa = point(a), pb = point(b);
    if (std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end())) return true;
    if (std::lexicographical_compare(pb.begin(), pb.end(), pa.begin(), pa.end())) return false;
    return a < b;
  };
  std::sort(order.begin(), order.end(), less);
  std::vector<std::pair<Index, Index>> pairs;
  for (std::size_t s = 0; s < order.size();) {
    std::size_t e = s + 1;
    while (e < order.size() && std::ranges::equal(point(order[s]), point(order[e]))) ++e;
    for (std::size_t a = s; a < e; ++a)
      for (std::size_t b = a + 1; b < e; ++b)
        pairs.emplace_back(std::min(order[a], order[b]), std::max(order[a], order[b]));
    s = e;
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

double PointCloud::squared_distance(Index i, Index j) const {
  return cechlab::squared_distance(point(i), point(j));
}

double PointCloud::distance(Index i, Index j) const { return std::sqrt(squared_distance(i, j)); }

double PointCloud::diameter() const {
  double best = 0.0;
  for (Index i = 0; i < size(); ++i)
    for (Index j = i + 1; j < size(); ++j) best = std::max(best, squared_distance(i, j));
  return std::sqrt(best);
}

double PointCloud::min_pairwise_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < size(); ++i)
    for (Index j = i + 1; j < size(); ++j) best = std::min(best, squared_distance(i, j));
  return std::sqrt(best);
}

void write_point_cloud(std::ostream& out, const PointCloud& cloud) {
  out << cloud.dim() << ' ' << cloud.size() << '\n';
  out << std::setprecision(17);
  for (Index i = 0; i < cloud.size(); ++i) {
    auto p = cloud.point(i);
    for (std::size_t c = 0; c < p.size(); ++c) out << (c ? " " : "") << p[c];
    out << '\n';
  }
}

PointCloud read_point_cloud(std::istream& in) {
  long long dim = 0, count = 0;
  if (!(in >> dim >> count) || dim <= 0 || count < 0)
    throw ArgumentError("point cloud header must be `d N` with d > 0, N >= 0");
  std::vector<double> coords(static_cast<std::size_t>(dim * count));
  for (double& v : coords) {
    std::string token;
    if (!(in >> token)) throw ArgumentError("point cloud truncated");
    std::istringstream ts(token);
    if (!(ts >> v)) throw ArgumentError("bad coordinate: " + token);
  }
  return PointCloud(static_cast<std::size_t>(dim), std::move(coords));
}

void save_point_cloud(const std::string& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot write " + path);
  write_point_cloud(out, cloud);
}

PointCloud load_point_cloud(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read " + path);
  return read_point_cloud(in);
}

}  // namespace cechlab

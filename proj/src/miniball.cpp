#include "cechlab/miniball.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cechlab/errors.hpp"

namespace cechlab {

namespace {

// Squared-radius slack for membership tests. Cocircular supports (right
// triangles, squares) sit exactly on the sphere up to rounding.
constexpr double kContainSlack = 1e-12;

}  // namespace

MiniballSolver::MiniballSolver(std::size_t dim) : dim_(dim), center_(dim) {
  if (dim == 0) throw ArgumentError("miniball dimension must be positive");
  gram_.resize((dim + 1) * (dim + 1));
  rhs_.resize(dim + 1);
  scratch_.resize(dim);
}

bool MiniballSolver::contains(std::size_t local) const {
  if (sq_radius_ < 0.0) return false;
  const double* p = pts_[local];
  double s = 0.0;
  for (std::size_t c = 0; c < dim_; ++c) {
    const double t = p[c] - center_[c];
    s += t * t;
  }
  return s <= sq_radius_ * (1.0 + kContainSlack);
}

// Smallest ball with all support points on its boundary: the circumcenter
// within their affine hull, solved through the Gram system relative to the
// first support point. Returns false (and an enclosing, possibly non-minimal
// ball) when the support is affinely dependent.
bool MiniballSolver::circumball(std::span<const std::size_t> support) {
  const std::size_t m = support.size();
  if (m == 0) {
    sq_radius_ = -1.0;
    return true;
  }
  const double* origin = pts_[support[0]];
  std::copy(origin, origin + dim_, center_.begin());
  if (m == 1) {
    sq_radius_ = 0.0;
    return true;
  }
  const std::size_t q = m - 1;
  auto edge = [&](std::size_t i, std::size_t c) { return pts_[support[i + 1]][c] - origin[c]; };
  double max_diag = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) s += edge(i, c) * edge(j, c);
      gram_[i * q + j] = gram_[j * q + i] = s;
    }
    rhs_[i] = 0.5 * gram_[i * q + i];
    max_diag = std::max(max_diag, gram_[i * q + i]);
  }

  // Gaussian elimination with partial pivoting.
  std::size_t rank = q;
  for (std::size_t col = 0; col < q; ++col) {
    std::size_t best = col;
    for (std::size_t r = col + 1; r < q; ++r)
      if (std::abs(gram_[r * q + col]) > std::abs(gram_[best * q + col])) best = r;
    if (std::abs(gram_[best * q + col]) <= 1e-13 * max_diag) {
      rank = col;
      break;
    }
    if (best != col) {
      for (std::size_t c = 0; c < q; ++c) std::swap(gram_[best * q + c], gram_[col * q + c]);
      std::swap(rhs_[best], rhs_[col]);
    }
    for (std::size_t r = col + 1; r < q; ++r) {
      const double f = gram_[r * q + col] / gram_[col * q + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < q; ++c) gram_[r * q + c] -= f * gram_[col * q + c];
      rhs_[r] -= f * rhs_[col];
    }
  }

  bool ok = true;
  if (rank < q) {
    // Degenerate support: drop the dependent tail and enclose the rest.
    ok = false;
    std::vector<std::size_t> reduced(support.begin(), support.begin() + static_cast<std::ptrdiff_t>(rank + 1));
    circumball(reduced);
  } else {
    for (std::size_t i = q; i-- > 0;) {
      double s = rhs_[i];
      for (std::size_t c = i + 1; c < q; ++c) s -= gram_[i * q + c] * scratch_[c];
      scratch_[i] = s / gram_[i * q + i];
    }
    for (std::size_t c = 0; c < dim_; ++c) {
      double s = origin[c];
      for (std::size_t i = 0; i < q; ++i) s += scratch_[i] * edge(i, c);
      center_[c] = s;
    }
  }
  double r2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* p = pts_[support[i]];
    double s = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) {
      const double t = p[c] - center_[c];
      s += t * t;
    }
    r2 = std::max(r2, s);
  }
  sq_radius_ = r2;
  return ok;
}

void MiniballSolver::welzl(std::size_t end) {
  circumball(stack_);
  support_ = stack_;
  if (stack_.size() == dim_ + 1) return;
  for (std::size_t i = 0; i < end; ++i) {
    const std::size_t j = order_[i];
    if (contains(j)) continue;
    stack_.push_back(j);
    welzl(i);
    stack_.pop_back();
    std::rotate(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(i),
                order_.begin() + static_cast<std::ptrdiff_t>(i + 1));
  }
}

void MiniballSolver::reduce_support() {
  std::sort(support_.begin(), support_.end());
  std::vector<std::size_t> trial;
  bool changed = true;
  while (changed && support_.size() > 1) {
    changed = false;
    for (std::size_t drop = 0; drop < support_.size(); ++drop) {
      trial.clear();
      for (std::size_t i = 0; i < support_.size(); ++i)
        if (i != drop) trial.push_back(support_[i]);
      circumball(trial);
      bool encloses = true;
      for (std::size_t p = 0; p < pts_.size() && encloses; ++p) encloses = contains(p);
      if (encloses) {
        support_ = trial;
        changed = true;
        break;
      }
    }
  }
}

double MiniballSolver::radius(const PointCloud& cloud, std::span<const Index> indices) {
  if (indices.empty()) throw ArgumentError("miniball of an empty point list");
  if (cloud.dim() != dim_) throw ArgumentError("miniball solver dimension mismatch");
  pts_.clear();
  for (Index i : indices) pts_.push_back(cloud.point(i).data());
  order_.resize(pts_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  stack_.clear();
  welzl(order_.size());
  reduce_support();
  circumball(support_);
  // Numerical safety net; a miss here would mean the support search failed.
  for (std::size_t p = 0; p < pts_.size(); ++p) {
    if (contains(p)) continue;
    double s = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) {
      const double t = pts_[p][c] - center_[c];
      s += t * t;
    }
    sq_radius_ = std::max(sq_radius_, s);
  }
  return std::sqrt(sq_radius_);
}

Ball MiniballSolver::solve(const PointCloud& cloud, std::span<const Index> indices) {
  const double r = radius(cloud, indices);
  return Ball{center_, r};
}

Ball miniball(const PointCloud& points) {
  if (points.empty()) throw ArgumentError("miniball of an empty point list");
  MiniballSolver solver(points.dim());
  std::vector<Index> all(points.size());
  std::iota(all.begin(), all.end(), Index{0});
  return solver.solve(points, all);
}

}  // namespace cechlab

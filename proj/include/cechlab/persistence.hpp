#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "cechlab/field.hpp"
#include "cechlab/filtration.hpp"
#include "cechlab/point_cloud.hpp"

namespace cechlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PersistenceInterval {
  std::size_t dim;
  double birth;
  double death;  // kInfinity for essential classes
  friend bool operator==(const PersistenceInterval&, const PersistenceInterval&) = default;
};

/// Multiset of persistence intervals. A class in dimension k is alive at
/// scale s iff birth <= s < death; zero-length intervals are not stored.
struct PersistenceDiagram {
  std::vector<PersistenceInterval> intervals;
  FieldSpec field{2};

  /// #{dim-k intervals with birth <= r < death}.
  std::size_t betti(std::size_t k, double r) const;
  /// #{dim-k intervals with birth <= r and death > s}: the rank of the map
  /// H_k(K_r) -> H_k(K_s) for r <= s.
  std::size_t persistent_betti(std::size_t k, double r, double s) const;
  std::vector<PersistenceInterval> in_dimension(std::size_t k) const;
};

/// Column reduction of the boundary matrix in filtration order with
/// clearing (dimensions processed top-down).
PersistenceDiagram compute_persistence(const FilteredComplex& complex, FieldSpec field = FieldSpec{2});

/// CSV with header `dim,birth,death`; death `inf` for essential classes.
void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram);
PersistenceDiagram read_diagram_csv(std::istream& in, FieldSpec field = FieldSpec{2});

/// Ordinary Betti number of Čech_r(P).
std::size_t betti(const PointCloud& cloud, double r, int k, FieldSpec field = FieldSpec{2});

/// rank H_k(Čech_r(P) -> Čech_{theta r}(P)); theta >= 1.
std::size_t persistent_betti(const PointCloud& cloud, double r, double theta, int k,
                             FieldSpec field = FieldSpec{2});

/// Independent check of betti(): dim Z_k - dim B_k from dense Gaussian
/// elimination on the full boundary matrices of Čech_r(P). At most 16 points.
std::size_t betti_oracle(const PointCloud& cloud, double r, int k, FieldSpec field = FieldSpec{2});

inline constexpr std::size_t kOracleMaxPoints = 16;

}  // namespace cechlab

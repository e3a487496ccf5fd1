#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "cechlab/point_cloud.hpp"
#include "cechlab/rng.hpp"

namespace cechlab {

/// A point set carrying a theta-persistent k-cycle at scale r, verified to
/// survive up to (at least) theta r; R is the outer radius the cycle is
/// known to survive below.
struct CycleWitness {
  PointCloud points{1};
  double r = 0.0;
  double theta = 1.0;
  int k = 1;
  double R = 0.0;
  std::size_t verified_rank = 0;
};

/// Bracket on m(theta, k): a witness with `upper` points exists; searches
/// with p <= lower_searched found none.
struct MBracket {
  double theta = 1.0;
  int k = 1;
  std::size_t d = 2;
  std::size_t upper = 0;
  std::size_t lower_searched = 0;
  std::size_t trials_per_p = 0;
  /// The configuration that set `upper`.
  std::optional<CycleWitness> witness;
};

/// 1 iff rank H_k(Cech_r(Y) -> Cech_{theta r}(Y)) >= 1.
bool zeta_indicator(const PointCloud& y, double r, double theta, int k);

/// Distance from the circumcenter of the standard (k+1)-simplex to its
/// boundary: sqrt(1 / ((k+1)(k+2))).
double simplex_inradius(int k);

/// Repeated barycentric subdivision of the boundary of the standard
/// (k+1)-simplex in R^{k+2}, with r = 0.99 R* / theta and rounds added until
/// every simplex has diameter <= r.
CycleWitness construct_witness(int k, double theta);
/// Subdivision rounds construct_witness used for (k, theta).
std::size_t witness_subdivision_rounds(int k, double theta);

/// delta = (R - theta r) / (theta + 1), so (R - delta) / (r + delta) = theta.
double perturbation_radius(double R, double r, double theta);

/// Fraction of trials in which moving every point uniformly inside the open
/// delta-ball keeps rank H_k(Cech_{r+delta} -> Cech_{theta (r+delta)}) >= 1.
/// `delta_scale` != 1 is for negative controls.
double perturb_and_verify(const CycleWitness& w, RandomStream& rng, std::size_t trials, double delta_scale = 1.0);

struct SearchOptions {
  std::size_t threads = 0;
  std::size_t radius_grid = 64;
  /// Hill-climb steps on death/birth applied to each sampled configuration
  /// before it is tested; 0 keeps the plain uniform search.
  std::size_t refine_steps = 0;
};

/// Random search for a p-point witness in [0,1]^d (normalized to unit
/// diameter). Each configuration is reduced once; candidate radii are a
/// geometric grid on [min distance / 2, diameter / 2] plus the dimension-k
/// birth values. Returns the witness from the lowest successful trial.
std::optional<CycleWitness> search_m(std::size_t d, int k, double theta, std::size_t p, std::size_t trials,
                                     RandomStream& rng, SearchOptions options = {});

/// Runs search_m for p = k+2, k+3, ... up to p_max and brackets m.
MBracket bracket_m(std::size_t d, int k, double theta, std::size_t p_max, std::size_t trials,
                   RandomStream& rng, SearchOptions options = {});

/// sum_{i=0}^{p-m} C(p, m+i) C(m+i, k+1); 0 when p < m.
std::uint64_t upper_bound_constant(std::size_t p, int k, std::size_t m);

/// Header line `k theta r R rank`, then the point-cloud format.
void write_witness(std::ostream& out, const CycleWitness& w);
/// Reads and re-verifies; a witness that fails verification is an
/// argument error.
CycleWitness read_witness(std::istream& in);

}  // namespace cechlab

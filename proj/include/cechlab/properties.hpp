#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cechlab/density.hpp"
#include "cechlab/point_cloud.hpp"
#include "cechlab/rng.hpp"
#include "cechlab/small_graph.hpp"
#include "cechlab/spatial_grid.hpp"

namespace cechlab {

/// How candidate p-subsets are generated. Connected: Y is connected in
/// G(Y, connect_factor * r) whenever the indicator is 1, so only connected
/// induced subgraphs of G(P, connect_factor * r) are visited. Diameter:
/// only p-cliques of G(P, C * r * p).
enum class Enumeration { Connected, Diameter };

/// Finite geometric property g_{r,p}. The indicator sees the subset as its
/// own cloud plus the scale and is only consulted when |Y| == arity.
struct PropertyDescriptor {
  using Indicator = std::function<bool(const PointCloud& y, double r)>;

  std::string name;
  std::size_t arity = 0;
  double scale = 0.0;
  double diam_factor = 0.0;  // C: g(Y) = 1 implies diam Y <= C r p
  Enumeration enumeration = Enumeration::Diameter;
  double connect_factor = 0.0;
  Indicator indicator;

  bool operator()(const PointCloud& y) const { return y.size() == arity && indicator(y, scale); }
  PropertyDescriptor at_scale(double r) const;
  double locality_radius() const { return diam_factor * scale * static_cast<double>(arity); }
};

/// Context factor h~(Y, X) of a subset property. `reach` bounds how far from
/// Y the kernel looks (in units of `scale`); the view's grid has cell width
/// reach * scale.
struct ContextIndicator {
  struct View {
    const PointCloud& x;
    const SpatialGrid& grid;
  };
  using Kernel = std::function<bool(const View& view, std::span<const Index> y, double scale)>;

  std::string name;
  double scale = 0.0;
  double reach = 0.0;
  Kernel kernel;

  ContextIndicator at_scale(double s) const;
};

/// h(Y, X) = context(Y, X) * base(Y). Without a context, h(Y, X) = g(Y).
struct SubsetPropertyDescriptor {
  PropertyDescriptor base;
  std::optional<ContextIndicator> context;
  /// Ratio context.scale / base.scale, kept fixed under at_scale().
  double context_ratio = 1.0;

  std::string name() const;
  /// Evaluates h(X[y], X) for sorted indices y.
  bool operator()(const PointCloud& x, std::span<const Index> y) const;
  SubsetPropertyDescriptor at_scale(double r) const;
};

SubsetPropertyDescriptor with_context(PropertyDescriptor base, ContextIndicator context);
SubsetPropertyDescriptor without_context(PropertyDescriptor base);

/// Validates a user-defined property: arity >= 1, r > 0 and finite C, and
/// runs a seeded locality probe (random p-point configurations spread over
/// 4 C r p in the plane); a probe violation is an argument error.
PropertyDescriptor custom_property(std::string name, std::size_t arity, double r, double diam_factor,
                                   PropertyDescriptor::Indicator indicator);

/// 1_{|Y|=p} 1_{G(Y,r) ~ gamma}. Gamma must be connected; C = 1.
PropertyDescriptor iso_graph(const SmallGraph& gamma, double r, std::size_t p);
/// |Y| = p, beta_0(Y, r) = p (pairwise > 2r), all pairwise distances in (r, r p]. C = 1.
PropertyDescriptor spread(double r, std::size_t p);
/// |Y| = p and Cech_r(Y) connected (distance-2r graph). C = 2.
PropertyDescriptor conn(double r, std::size_t p);
/// |Y| = p, Cech_r(Y) connected and rank H_k(Cech_r(Y) -> Cech_{theta r}(Y)) >= 1. C = 2 theta.
PropertyDescriptor zeta(double r, std::size_t p, double theta, int k);

/// 1 iff d(x, y) > 2s for every x in X \ Y, y in Y.
ContextIndicator sep(double s);
SubsetPropertyDescriptor comp(double r, std::size_t p);
SubsetPropertyDescriptor upsilon(double r, std::size_t p, double theta, int k);

/// Sum over Y in P of g(Y), visiting only locality-admissible candidates.
std::uint64_t count_property(const PropertyDescriptor& g, const PointCloud& cloud);
/// Sum over Y in P of h(Y, P).
std::uint64_t subset_count(const SubsetPropertyDescriptor& h, const PointCloud& cloud);
/// Reference implementations that test every p-subset. Small clouds only.
std::uint64_t count_property_exhaustive(const PropertyDescriptor& g, const PointCloud& cloud);
std::uint64_t subset_count_exhaustive(const SubsetPropertyDescriptor& h, const PointCloud& cloud);

/// Number of isolated components of G(P, r) isomorphic to gamma:
/// subset_count(sep(r) * iso_graph(gamma, r, |gamma|)).
std::uint64_t component_count(const SmallGraph& gamma, const PointCloud& cloud, double r);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of (1/p!) int f^p * int g_{1,p}({0, x_1..x_{p-1}}) dx.
/// The inner integral is sampled uniformly on the ball of radius C p.
Estimate estimate_mu(const PropertyDescriptor& g, const Density& f, std::size_t samples, RandomStream& rng);

struct PalmOptions {
  double rhs_scale = 1.0;  // != 1 only to test the checker itself
  double z = 3.0;
  std::size_t threads = 0;
};

struct PalmResult {
  Estimate lhs;
  Estimate rhs;
  bool agree = false;
};

/// E sum_{Y in P_n} h(Y, P_n) against (n^p / p!) E h(X_p, X_p u P_n);
/// agreement iff the z-standard-error intervals overlap.
PalmResult palm_check(const SubsetPropertyDescriptor& h, double n, const Density& f, std::size_t trials,
                      RandomStream& rng, PalmOptions options = {});

struct RadiusLaw {
  double c = 1.0;
  double q = -1.0;
  double operator()(double n) const;
};

struct DiagnosticRow {
  double n = 0.0;
  double r = 0.0;
  double count_mean = 0.0;
  double count_se = 0.0;
  double ratio = 0.0;
  double ratio_se = 0.0;
};

/// E[SubsetCount(h_{r_n}, X_n)] / (n (r_n^d n)^{p-1}) over binomial clouds.
/// Requires q < -1/d (configuration error otherwise).
std::vector<DiagnosticRow> convergence_diagnostic(const SubsetPropertyDescriptor& h, const Density& f,
                                                  RadiusLaw law, const std::vector<double>& n_grid,
                                                  std::size_t trials, RandomStream& rng, std::size_t threads = 0);

/// CSV with header `n,r,count_mean,count_se,ratio,ratio_se`.
void write_diagnostic_csv(std::ostream& out, const std::vector<DiagnosticRow>& rows);

}  // namespace cechlab

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cechlab/density.hpp"
#include "cechlab/field.hpp"
#include "cechlab/point_cloud.hpp"
#include "cechlab/properties.hpp"

namespace cechlab {

/// Monte Carlo study of E beta_k^theta(P_n, r_n) with r_n = c n^q.
struct ExperimentSpec {
  std::size_t d = 2;
  int k = 1;
  double theta = 1.0;
  Density density = Density::unit_cube(2);
  RadiusLaw law{0.5, -0.6};
  std::vector<double> n_grid;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  FieldSpec field{2};
  /// Points in a minimal theta-persistent k-cycle; 0 means k + 2, which is
  /// only known to be exact for theta = 1.
  std::size_t m = 0;
  /// Adaptive trials: keep doubling until the relative standard error of the
  /// mean is below target_rse or max_trials is reached. 0 disables.
  std::size_t max_trials = 0;
  double target_rse = 0.1;
  std::size_t threads = 0;

  /// Throws ConfigurationError; enforces q < -1/d before anything is sampled.
  void validate() const;
  double radius(double n) const;
  std::size_t witness_size() const;
};

struct ExperimentRow {
  double n = 0.0;
  double r = 0.0;
  double mean = 0.0;
  double se = 0.0;
  std::size_t trials = 0;
};

struct ExponentFit {
  double slope = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::optional<ExponentFit> fit;
  double predicted = 0.0;
  std::uint64_t seed = 0;
};

/// 1 + (q d + 1)(m - 1).
double predicted_exponent(double q, std::size_t d, std::size_t m);

/// Trial t at grid index i uses stream split({i, t}) of the seed stream, so
/// results do not depend on the thread count. The fit is attached when the
/// rows admit one.
ExperimentResult run_experiment(const ExperimentSpec& spec);

struct FitOptions {
  double confidence = 0.95;
  std::size_t min_rows = 4;
  double min_decades = 1.5;
};

/// OLS of log(mean) on log(n) with a Student-t interval on the slope.
ExponentFit fit_exponent(const std::vector<ExperimentRow>& rows, FitOptions options = {});

void write_results_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
void write_fit_csv(std::ostream& out, const ExponentFit& fit, double predicted);

struct AuditResult {
  std::size_t clouds = 0;
  double mean_subset_count = 0.0;
  double mean_betti = 0.0;
  /// Fraction of clouds on which both counts agree (reported, not asserted).
  double equal_fraction = 0.0;
};

/// Checks subset_count(upsilon(r, m, theta, k)) <= persistent_betti on every
/// sampled cloud. A violation writes the cloud to `repro_dir` and throws
/// AuditFailure.
AuditResult lower_bound_audit(const ExperimentSpec& spec, const std::string& repro_dir = ".");

/// Light disks of radius theta r under dark disks of radius r; the viewBox is
/// the density box. Throws ArgumentError unless the cloud is planar.
void render_balls(std::ostream& out, const PointCloud& cloud, double r, double theta,
                  const std::vector<Interval>& box);
void render_balls(const std::string& path, const PointCloud& cloud, double r, double theta,
                  const std::vector<Interval>& box);

}  // namespace cechlab

#include "cechlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "cechlab/errors.hpp"
#include "cechlab/parallel.hpp"
#include "cechlab/persistence.hpp"
#include "cechlab/sampling.hpp"

namespace cechlab {

void ExperimentSpec::validate() const {
  if (d == 0) throw ConfigurationError("d must be >= 1");
  if (density.dim() != d) throw ConfigurationError("density dimension differs from d");
  if (k < 0) throw ConfigurationError("k must be >= 0");
  if (!(theta >= 1.0) || !std::isfinite(theta)) throw ConfigurationError("theta must be >= 1");
  if (!(law.c >= 0.0) || !std::isfinite(law.c)) throw ConfigurationError("radius constant c must be >= 0");
  if (!(law.q < -1.0 / static_cast<double>(d)))
    throw ConfigurationError("radius exponent q must satisfy q < -1/d (subcritical regime)");
  if (n_grid.empty()) throw ConfigurationError("n_grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (!(n_grid[i] > 0.0) || !std::isfinite(n_grid[i])) throw ConfigurationError("n_grid entries must be positive");
    if (i > 0 && !(n_grid[i] > n_grid[i - 1])) throw ConfigurationError("n_grid must be strictly increasing");
  }
  if (trials == 0) throw ConfigurationError("trials must be >= 1");
  if (max_trials != 0 && max_trials < trials) throw ConfigurationError("max_trials must be >= trials");
  if (!(target_rse > 0.0)) throw ConfigurationError("target_rse must be positive");
  if (m != 0 && m < static_cast<std::size_t>(k) + 2) throw ConfigurationError("m must be >= k + 2");
}

double ExperimentSpec::radius(double n) const { return law(n); }

std::size_t ExperimentSpec::witness_size() const { return m != 0 ? m : static_cast<std::size_t>(k) + 2; }

double predicted_exponent(double q, std::size_t d, std::size_t m) {
  return 1.0 + (q * static_cast<double>(d) + 1.0) * (static_cast<double>(m) - 1.0);
}

namespace {

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

Moments moments(const std::vector<double>& v) {
  const double count = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / count;
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (count - 1.0) / count)};
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const RandomStream root(spec.seed);
  ExperimentResult result;
  result.seed = spec.seed;
  result.predicted = predicted_exponent(spec.law.q, spec.d, spec.witness_size());

  for (std::size_t i = 0; i < spec.n_grid.size(); ++i) {
    const double n = spec.n_grid[i];
    const double r = spec.radius(n);
    std::vector<double> values;
    auto extend = [&](std::size_t target) {
      const std::size_t start = values.size();
      values.resize(target);
      parallel_for(target - start, spec.threads, [&](std::size_t j) {
        RandomStream s = root.split({i, start + j});
        const auto cloud = sample_poisson(n, spec.density, s);
        values[start + j] = static_cast<double>(persistent_betti(cloud, r, spec.theta, spec.k, spec.field));
      });
    };
    extend(spec.trials);
    Moments mo = moments(values);
    while (spec.max_trials > values.size() && !(mo.mean > 0.0 && mo.se / mo.mean < spec.target_rse)) {
      extend(std::min(spec.max_trials, 2 * values.size()));
      mo = moments(values);
    }
    result.rows.push_back({n, r, mo.mean, mo.se, values.size()});
  }

  try {
    result.fit = fit_exponent(result.rows);
  } catch (const ArgumentError&) {
  }
  return result;
}

ExponentFit fit_exponent(const std::vector<ExperimentRow>& rows, FitOptions options) {
  if (rows.size() < std::max<std::size_t>(options.min_rows, 3))
    throw ArgumentError("exponent fit needs at least " + std::to_string(std::max<std::size_t>(options.min_rows, 3)) +
                        " rows");
  for (const auto& row : rows) {
    if (!(row.n > 0.0)) throw ArgumentError("exponent fit needs n > 0");
    if (!(row.mean > 0.0))
      throw ArgumentError("mean is zero at n = " + std::to_string(row.n) + "; use more trials or larger n");
  }
  const auto [lo, hi] = std::minmax_element(rows.begin(), rows.end(),
                                            [](const ExperimentRow& a, const ExperimentRow& b) { return a.n < b.n; });
  if (std::log10(hi->n / lo->n) < options.min_decades)
    throw ArgumentError("n range spans fewer than " + std::to_string(options.min_decades) + " decades");
  if (!(options.confidence > 0.0 && options.confidence < 1.0)) throw ArgumentError("confidence must be in (0, 1)");

  const double count = static_cast<double>(rows.size());
  double mx = 0.0, my = 0.0;
  for (const auto& row : rows) {
    mx += std::log(row.n);
    my += std::log(row.mean);
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& row : rows) {
    const double dx = std::log(row.n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(row.mean) - my);
  }
  const double slope = sxy / sxx;
  double sse = 0.0;
  for (const auto& row : rows) {
    const double e = std::log(row.mean) - my - slope * (std::log(row.n) - mx);
    sse += e * e;
  }
  const double se = std::sqrt(sse / (count - 2.0) / sxx);
  const boost::math::students_t t(count - 2.0);
  const double half = boost::math::quantile(t, 0.5 + options.confidence / 2.0) * se;
  return {slope, slope - half, slope + half};
}

void write_results_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << "n,r,mean_betti,se,trials\n" << std::setprecision(12);
  for (const auto& row : rows) out << row.n << ',' << row.r << ',' << row.mean << ',' << row.se << ',' << row.trials << '\n';
}

void write_fit_csv(std::ostream& out, const ExponentFit& fit, double predicted) {
  out << "slope,ci_lo,ci_hi,predicted\n"
      << std::setprecision(12) << fit.slope << ',' << fit.ci_lo << ',' << fit.ci_hi << ',' << predicted << '\n';
}

AuditResult lower_bound_audit(const ExperimentSpec& spec, const std::string& repro_dir) {
  spec.validate();
  const RandomStream root(spec.seed);
  const std::size_t m = spec.witness_size();
  AuditResult out;
  double sum_h = 0.0, sum_b = 0.0, equal = 0.0;

  for (std::size_t i = 0; i < spec.n_grid.size(); ++i) {
    const double n = spec.n_grid[i];
    const double r = spec.radius(n);
    std::vector<std::uint64_t> h(spec.trials), b(spec.trials);
    std::vector<PointCloud> clouds(spec.trials, PointCloud(spec.d));
    parallel_for(spec.trials, spec.threads, [&](std::size_t t) {
      RandomStream s = root.split({i, t});
      auto cloud = sample_poisson(n, spec.density, s);
      b[t] = persistent_betti(cloud, r, spec.theta, spec.k, spec.field);
      h[t] = r > 0.0 ? subset_count(upsilon(r, m, spec.theta, spec.k), cloud) : 0;
      if (h[t] > b[t]) clouds[t] = std::move(cloud);
    });
    for (std::size_t t = 0; t < spec.trials; ++t) {
      if (h[t] > b[t]) {
        const auto path =
            (std::filesystem::path(repro_dir) / ("audit_violation_n" + std::to_string(i) + "_t" + std::to_string(t) + ".txt"))
                .string();
        save_point_cloud(path, clouds[t]);
        std::ostringstream msg;
        msg << "lower-bound audit failed at n = " << n << ", trial " << t << ": subset count " << h[t]
            << " > persistent betti " << b[t];
        throw AuditFailure(msg.str(), path);
      }
      sum_h += static_cast<double>(h[t]);
      sum_b += static_cast<double>(b[t]);
      equal += h[t] == b[t];
    }
    out.clouds += spec.trials;
  }
  const double total = static_cast<double>(out.clouds);
  out.mean_subset_count = sum_h / total;
  out.mean_betti = sum_b / total;
  out.equal_fraction = equal / total;
  return out;
}

void render_balls(std::ostream& out, const PointCloud& cloud, double r, double theta,
                  const std::vector<Interval>& box) {
  if (cloud.dim() != 2 || box.size() != 2) throw ArgumentError("rendering supports planar clouds only");
  if (!(r >= 0.0) || !(theta >= 1.0)) throw ArgumentError("need r >= 0 and theta >= 1");
  // y grows downward in SVG; flip so the picture matches the coordinates.
  out << std::setprecision(9) << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << box[0].lo << ' '
      << -box[1].hi << ' ' << box[0].length() << ' ' << box[1].length() << "\">\n"
      << "<rect x=\"" << box[0].lo << "\" y=\"" << -box[1].hi << "\" width=\"" << box[0].length() << "\" height=\""
      << box[1].length() << "\" fill=\"white\"/>\n";
  for (const auto& [radius, color] : {std::pair{theta * r, "#c6dbef"}, std::pair{r, "#08306b"}}) {
    out << "<g fill=\"" << color << "\">\n";
    for (Index i = 0; i < cloud.size(); ++i) {
      const auto p = cloud.point(i);
      out << "<circle cx=\"" << p[0] << "\" cy=\"" << -p[1] << "\" r=\"" << radius << "\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
}

void render_balls(const std::string& path, const PointCloud& cloud, double r, double theta,
                  const std::vector<Interval>& box) {
  std::ofstream file(path);
  if (!file) throw ArgumentError("cannot write " + path);
  render_balls(file, cloud, r, theta, box);
}

}  // namespace cechlab

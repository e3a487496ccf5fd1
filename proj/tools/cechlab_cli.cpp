// cechlab command-line front end. Every subcommand writes its primary output
// plus `<output>.manifest.json`. Exit codes: 0 ok, 1 configuration error,
// 2 audit failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cechlab/config.hpp"
#include "cechlab/errors.hpp"
#include "cechlab/experiment.hpp"
#include "cechlab/persistence.hpp"
#include "cechlab/properties.hpp"
#include "cechlab/sampling.hpp"
#include "cechlab/witness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cechlab;

namespace {

struct BoxOption {
  std::vector<double> bounds{0.0, 1.0};

  std::vector<Interval> box(std::size_t d) const {
    if (bounds.size() == 2) return std::vector<Interval>(d, Interval{bounds[0], bounds[1]});
    if (bounds.size() != 2 * d) throw ConfigurationError("--box needs 2 or 2d numbers");
    std::vector<Interval> out;
    for (std::size_t i = 0; i < d; ++i) out.push_back({bounds[2 * i], bounds[2 * i + 1]});
    return out;
  }
  Density density(std::size_t d) const {
    for (const auto& side : box(d))
      if (!(side.hi > side.lo)) throw ConfigurationError("--box needs lo < hi");
    return Density::uniform_box(box(d));
  }
  json to_json() const { return bounds; }
};

void add_box(CLI::App* app, BoxOption& box) {
  app->add_option("--box", box.bounds, "lo,hi for every axis, or lo1,hi1,...,lod,hid")->delimiter(',');
}

struct PropertyOption {
  std::string name = "edge";
  std::size_t p = 2;
  double r = 0.1;
  double theta = 1.0;
  int k = 1;

  void add(CLI::App* app) {
    app->add_option("--property", name, "edge, path, triangle, spread, conn, zeta, comp, upsilon")->capture_default_str();
    app->add_option("-p,--arity", p, "subset size")->capture_default_str();
    app->add_option("-r,--radius", r)->capture_default_str();
    app->add_option("--theta", theta)->capture_default_str();
    app->add_option("-k,--dim", k, "homology dimension (zeta, upsilon)")->capture_default_str();
  }

  bool is_subset() const { return name == "comp" || name == "upsilon"; }

  PropertyDescriptor base() const {
    if (name == "edge") return iso_graph(SmallGraph::complete(2), r, 2);
    if (name == "path") return iso_graph(SmallGraph::path(p), r, p);
    if (name == "triangle") return iso_graph(SmallGraph::complete(3), r, 3);
    if (name == "spread") return spread(r, p);
    if (name == "conn") return conn(r, p);
    if (name == "zeta") return zeta(r, p, theta, k);
    throw ConfigurationError("unknown property `" + name + "`");
  }

  SubsetPropertyDescriptor subset() const {
    if (name == "comp") return comp(r, p);
    if (name == "upsilon") return upsilon(r, p, theta, k);
    return without_context(base());
  }

  json to_json() const { return {{"property", name}, {"p", p}, {"r", r}, {"theta", theta}, {"k", k}}; }
};

std::string manifest_path(const std::string& output) { return output + ".manifest.json"; }

std::ofstream open_output(const std::string& path) {
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot write " + path);
  out << std::setprecision(17);
  return out;
}

void write_json(const std::string& path, const json& j) { open_output(path) << j.dump(2) << '\n'; }

PointCloud load_cloud(const std::string& path) {
  try {
    return load_point_cloud(path);
  } catch (const ArgumentError& e) {
    throw ConfigurationError(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistent homology of random Čech complexes"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  app.add_option("--seed", seed, "RNG seed")->capture_default_str();
  app.add_option("--threads", threads, "worker threads (0 = hardware)")->capture_default_str();
  std::function<void()> run;

  // sample
  auto* sample = app.add_subcommand("sample", "draw a Poisson or binomial point cloud");
  std::size_t d = 2;
  double n = 100;
  std::string process = "poisson", output;
  BoxOption box;
  sample->add_option("-d,--dim", d)->capture_default_str();
  sample->add_option("-n,--intensity", n, "intensity (poisson) or point count (binomial)")->capture_default_str();
  sample->add_option("--process", process)->check(CLI::IsMember({"poisson", "binomial"}))->capture_default_str();
  add_box(sample, box);
  sample->add_option("-o,--output", output, "default cloud.txt");
  sample->callback([&] {
    run = [&] {
      if (output.empty()) output = "cloud.txt";
      if (!(n >= 0.0)) throw ConfigurationError("n must be >= 0");
      RandomStream rng(seed);
      const auto f = box.density(d);
      const auto cloud = process == "poisson" ? sample_poisson(n, f, rng)
                                               : sample_binomial(static_cast<std::size_t>(std::llround(n)), f, rng);
      auto out = open_output(output);
      write_point_cloud(out, cloud);
      write_manifest(manifest_path(output), "sample",
                     {{"d", d}, {"n", n}, {"process", process}, {"box", box.to_json()}, {"seed", seed}},
                     {{"cloud", output}, {"points", cloud.size()}});
      std::cout << cloud.size() << " points -> " << output << '\n';
    };
  });

  // persistence
  auto* persistence = app.add_subcommand("persistence", "persistence diagram of the Čech filtration");
  std::string input;
  double r_max = 1.0;
  int max_dim = 2;
  std::uint32_t field = 2;
  persistence->add_option("-i,--input", input)->required();
  persistence->add_option("--rmax", r_max, "filtration cutoff")->capture_default_str();
  persistence->add_option("--max-dim", max_dim, "largest simplex dimension")->capture_default_str();
  persistence->add_option("--field", field, "prime characteristic")->capture_default_str();
  persistence->add_option("-o,--output", output, "default diagram.csv");
  persistence->callback([&] {
    run = [&] {
      if (output.empty()) output = "diagram.csv";
      const auto cloud = load_cloud(input);
      const auto diagram = compute_persistence(build_cech_filtration(cloud, r_max, max_dim), FieldSpec(field));
      auto out = open_output(output);
      write_diagram_csv(out, diagram);
      write_manifest(manifest_path(output), "persistence",
                     {{"input", input}, {"rmax", r_max}, {"max_dim", max_dim}, {"field", field}},
                     {{"diagram", output}, {"intervals", diagram.intervals.size()}});
      std::cout << diagram.intervals.size() << " intervals -> " << output << '\n';
    };
  });

  // betti
  auto* betti_cmd = app.add_subcommand("betti", "(persistent) Betti number at one radius");
  double r = 0.1, theta = 1.0;
  int k = 1;
  betti_cmd->add_option("-i,--input", input)->required();
  betti_cmd->add_option("-r,--radius", r)->required();
  betti_cmd->add_option("-k,--dim", k)->capture_default_str();
  betti_cmd->add_option("--theta", theta)->capture_default_str();
  betti_cmd->add_option("--field", field)->capture_default_str();
  betti_cmd->add_option("-o,--output", output, "default betti.json");
  betti_cmd->callback([&] {
    run = [&] {
      if (output.empty()) output = "betti.json";
      const auto value = persistent_betti(load_cloud(input), r, theta, k, FieldSpec(field));
      const json params{{"input", input}, {"r", r}, {"k", k}, {"theta", theta}, {"field", field}};
      write_json(output, {{"betti", value}});
      write_manifest(manifest_path(output), "betti", params, {{"result", output}});
      std::cout << value << '\n';
    };
  });

  // count
  auto* count_cmd = app.add_subcommand("count", "count subsets with a geometric property");
  PropertyOption prop;
  count_cmd->add_option("-i,--input", input)->required();
  prop.add(count_cmd);
  count_cmd->add_option("-o,--output", output, "default count.json");
  count_cmd->callback([&] {
    run = [&] {
      if (output.empty()) output = "count.json";
      const auto cloud = load_cloud(input);
      const std::uint64_t value = prop.is_subset() ? subset_count(prop.subset(), cloud) : count_property(prop.base(), cloud);
      auto params = prop.to_json();
      params["input"] = input;
      write_json(output, {{"count", value}});
      write_manifest(manifest_path(output), "count", params, {{"result", output}});
      std::cout << value << '\n';
    };
  });

  // mu
  auto* mu_cmd = app.add_subcommand("mu", "Monte Carlo estimate of the limiting constant mu");
  std::size_t samples = 100000;
  prop.add(mu_cmd);
  mu_cmd->add_option("-d,--dim-space", d)->capture_default_str();
  add_box(mu_cmd, box);
  mu_cmd->add_option("--samples", samples)->capture_default_str();
  mu_cmd->add_option("-o,--output", output, "default mu.json");
  mu_cmd->callback([&] {
    run = [&] {
      if (output.empty()) output = "mu.json";
      RandomStream rng(seed);
      const auto est = estimate_mu(prop.base(), box.density(d), samples, rng);
      auto params = prop.to_json();
      params.update({{"d", d}, {"box", box.to_json()}, {"samples", samples}, {"seed", seed}});
      write_json(output, {{"mu", est.value}, {"se", est.std_error}});
      write_manifest(manifest_path(output), "mu", params, {{"result", output}});
      std::cout << std::setprecision(10) << est.value << " +- " << est.std_error << '\n';
    };
  });

  // palm
  auto* palm_cmd = app.add_subcommand("palm", "compare both sides of the Palm identity");
  std::size_t trials = 1000;
  double z = 3.0;
  prop.add(palm_cmd);
  palm_cmd->add_option("-n,--intensity", n)->capture_default_str();
  palm_cmd->add_option("-d,--dim-space", d)->capture_default_str();
  add_box(palm_cmd, box);
  palm_cmd->add_option("--trials", trials)->capture_default_str();
  palm_cmd->add_option("--z", z, "agreement threshold in standard errors")->capture_default_str();
  palm_cmd->add_option("-o,--output", output, "default palm.json");
  palm_cmd->callback([&] {
    run = [&] {
      if (output.empty()) output = "palm.json";
      RandomStream rng(seed);
      PalmOptions opts;
      opts.z = z;
      opts.threads = threads;
      const auto res = palm_check(prop.subset(), n, box.density(d), trials, rng, opts);
      auto params = prop.to_json();
      params.update({{"n", n}, {"d", d}, {"box", box.to_json()}, {"trials", trials}, {"z", z}, {"seed", seed}});
      write_json(output, {{"lhs", res.lhs.value},
                          {"lhs_se", res.lhs.std_error},
                          {"rhs", res.rhs.value},
                          {"rhs_se", res.rhs.std_error},
                          {"agree", res.agree}});
      write_manifest(manifest_path(output), "palm", params, {{"result", output}});
      std::cout << std::setprecision(8) << "lhs " << res.lhs.value << " +- " << res.lhs.std_error << "  rhs "
                << res.rhs.value << " +- " << res.rhs.std_error << (res.agree ? "  agree\n" : "  DISAGREE\n");
    };
  });

  // witness
  auto* witness_cmd = app.add_subcommand("witness", "construct or verify a persistent-cycle witness");
  std::string verify;
  std::size_t perturb = 0;
  witness_cmd->add_option("-k,--dim", k)->capture_default_str();
  witness_cmd->add_option("--theta", theta)->capture_default_str();
  witness_cmd->add_option("--verify", verify, "read a witness file and re-verify it");
  witness_cmd->add_option("--perturb-trials", perturb, "random perturbations to check")->capture_default_str();
  witness_cmd->add_option("-o,--output", output, "default witness.txt");
  witness_cmd->callback([&] {
    run = [&] {
      if (output.empty()) output = "witness.txt";
      CycleWitness w;
      if (!verify.empty()) {
        std::ifstream in(verify);
        if (!in) throw ConfigurationError("cannot open " + verify);
        w = read_witness(in);
      } else {
        w = construct_witness(k, theta);
      }
      RandomStream rng(seed);
      const double fraction = perturb > 0 ? perturb_and_verify(w, rng, perturb) : 1.0;
      auto out = open_output(output);
      write_witness(out, w);
      write_manifest(manifest_path(output), "witness",
                     {{"k", w.k}, {"theta", w.theta}, {"verify", verify}, {"perturb_trials", perturb}, {"seed", seed}},
                     {{"witness", output}, {"points", w.points.size()}, {"rank", w.verified_rank},
                      {"perturbation_success", fraction}});
      std::cout << w.points.size() << " points, rank " << w.verified_rank << ", r " << w.r << ", R " << w.R;
      if (perturb > 0) std::cout << ", perturbation success " << fraction;
      std::cout << '\n';
    };
  });

  // search-m
  auto* search_cmd = app.add_subcommand("search-m", "bracket the minimal witness size by random search");
  std::size_t p_max = 5, refine = 0;
  search_cmd->add_option("-d,--dim-space", d)->capture_default_str();
  search_cmd->add_option("-k,--dim", k)->capture_default_str();
  search_cmd->add_option("--theta", theta)->capture_default_str();
  search_cmd->add_option("--p-max", p_max)->capture_default_str();
  search_cmd->add_option("--trials", trials)->capture_default_str();
  search_cmd->add_option("--refine", refine, "hill-climb steps per configuration")->capture_default_str();
  search_cmd->add_option("-o,--output", output, "default search.json");
  search_cmd->callback([&] {
    run = [&] {
      if (output.empty()) output = "search.json";
      RandomStream rng(seed);
      SearchOptions opts;
      opts.threads = threads;
      opts.refine_steps = refine;
      const auto b = bracket_m(d, k, theta, p_max, trials, rng, opts);
      json result{{"lower_searched", b.lower_searched}, {"upper", b.upper}, {"trials_per_p", b.trials_per_p}};
      json outputs{{"result", output}};
      if (b.witness) {
        const auto witness_path = output + ".witness.txt";
        auto out = open_output(witness_path);
        write_witness(out, *b.witness);
        outputs["witness"] = witness_path;
      }
      write_json(output, result);
      write_manifest(manifest_path(output), "search-m",
                     {{"d", d}, {"k", k}, {"theta", theta}, {"p_max", p_max}, {"trials", trials}, {"refine", refine},
                      {"seed", seed}},
                     outputs);
      if (b.upper > 0)
        std::cout << "witness with " << b.upper << " points; none with " << b.lower_searched << " in " << trials
                  << " trials\n";
      else
        std::cout << "no witness with at most " << p_max << " points in " << trials << " trials\n";
    };
  });

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "expected persistent Betti numbers along r_n = c n^q");
  std::string config, out_dir = ".";
  std::optional<std::size_t> o_d, o_trials, o_m, o_max_trials;
  std::optional<int> o_k;
  std::optional<double> o_theta, o_c, o_q, o_target;
  std::optional<std::uint64_t> o_seed;
  std::optional<std::uint32_t> o_field;
  std::vector<double> o_grid;
  bool audit = false;
  exp_cmd->add_option("--config", config, "JSON spec; flags override its keys");
  exp_cmd->add_option("-d,--dim-space", o_d);
  exp_cmd->add_option("-k,--dim", o_k);
  exp_cmd->add_option("--theta", o_theta);
  exp_cmd->add_option("--c", o_c);
  exp_cmd->add_option("--q", o_q);
  exp_cmd->add_option("--n-grid", o_grid)->delimiter(',');
  exp_cmd->add_option("--trials", o_trials);
  exp_cmd->add_option("--max-trials", o_max_trials);
  exp_cmd->add_option("--target-rse", o_target);
  exp_cmd->add_option("--m", o_m);
  exp_cmd->add_option("--field", o_field);
  exp_cmd->add_option("--spec-seed", o_seed, "overrides the config seed (defaults to --seed)");
  exp_cmd->add_flag("--audit", audit, "also check subset_count(upsilon) <= persistent betti on every cloud");
  exp_cmd->add_option("--out-dir", out_dir)->capture_default_str();
  exp_cmd->callback([&] {
    run = [&] {
      ExperimentSpec spec;
      spec.seed = seed;
      if (!config.empty()) spec = load_spec(config, spec);
      json overrides = json::object();
      if (o_d) overrides["d"] = *o_d;
      if (o_k) overrides["k"] = *o_k;
      if (o_theta) overrides["theta"] = *o_theta;
      if (o_c || o_q) {
        overrides["radius"] = json::object();
        if (o_c) overrides["radius"]["c"] = *o_c;
        if (o_q) overrides["radius"]["q"] = *o_q;
      }
      if (!o_grid.empty()) overrides["n_grid"] = o_grid;
      if (o_trials) overrides["trials"] = *o_trials;
      if (o_max_trials) overrides["max_trials"] = *o_max_trials;
      if (o_target) overrides["target_rse"] = *o_target;
      if (o_m) overrides["m"] = *o_m;
      if (o_field) overrides["field"] = *o_field;
      if (o_seed) overrides["seed"] = *o_seed;
      if (app.get_option("--threads")->count() > 0) overrides["threads"] = threads;
      spec = spec_from_json(overrides, spec);
      spec.validate();

      fs::create_directories(out_dir);
      const auto results_path = (fs::path(out_dir) / "results.csv").string();
      const auto fit_path = (fs::path(out_dir) / "fit.csv").string();
      json outputs{{"results", results_path}};
      const auto result = run_experiment(spec);
      {
        auto out = open_output(results_path);
        write_results_csv(out, result.rows);
      }
      if (result.fit) {
        auto out = open_output(fit_path);
        write_fit_csv(out, *result.fit, result.predicted);
        outputs["fit"] = fit_path;
      }
      for (const auto& row : result.rows)
        std::cout << "n " << row.n << "  r " << row.r << "  mean " << row.mean << " +- " << row.se << "  ("
                  << row.trials << " trials)\n";
      if (result.fit)
        std::cout << "slope " << result.fit->slope << " [" << result.fit->ci_lo << ", " << result.fit->ci_hi
                  << "], predicted " << result.predicted << '\n';
      else
        std::cout << "no exponent fit (needs >= 4 positive rows over >= 1.5 decades); predicted " << result.predicted
                  << '\n';
      const auto manifest = (fs::path(out_dir) / "manifest.json").string();
      if (audit) {
        try {
          const auto a = lower_bound_audit(spec, out_dir);
          outputs["audit"] = {{"clouds", a.clouds},
                              {"mean_subset_count", a.mean_subset_count},
                              {"mean_betti", a.mean_betti},
                              {"equal_fraction", a.equal_fraction}};
          std::cout << "audit ok on " << a.clouds << " clouds: mean subset count " << a.mean_subset_count
                    << " <= mean betti " << a.mean_betti << '\n';
        } catch (const AuditFailure& e) {
          outputs["audit"] = {{"failure", e.what()}, {"repro", e.repro_path()}};
          write_manifest(manifest, "experiment", spec_to_json(spec), outputs);
          throw;
        }
      }
      write_manifest(manifest, "experiment", spec_to_json(spec), outputs);
    };
  });

  // diagnostic
  auto* diag_cmd = app.add_subcommand("diagnostic", "count / (n (r^d n)^(p-1)) along r_n = c n^q");
  double c = 0.1, q = -0.6;
  std::vector<double> grid{1000, 4000};
  prop.add(diag_cmd);
  diag_cmd->add_option("-d,--dim-space", d)->capture_default_str();
  add_box(diag_cmd, box);
  diag_cmd->add_option("--c", c)->capture_default_str();
  diag_cmd->add_option("--q", q)->capture_default_str();
  diag_cmd->add_option("--n-grid", grid)->delimiter(',');
  diag_cmd->add_option("--trials", trials)->capture_default_str();
  diag_cmd->add_option("-o,--output", output, "default diagnostic.csv");
  diag_cmd->callback([&] {
    run = [&] {
      if (output.empty()) output = "diagnostic.csv";
      RandomStream rng(seed);
      const auto rows =
          convergence_diagnostic(prop.subset(), box.density(d), RadiusLaw{c, q}, grid, trials, rng, threads);
      auto out = open_output(output);
      write_diagnostic_csv(out, rows);
      auto params = prop.to_json();
      params.update({{"d", d}, {"box", box.to_json()}, {"c", c}, {"q", q}, {"n_grid", grid}, {"trials", trials},
                     {"seed", seed}});
      write_manifest(manifest_path(output), "diagnostic", params, {{"diagnostic", output}});
      for (const auto& row : rows) std::cout << "n " << row.n << "  ratio " << row.ratio << " +- " << row.ratio_se << '\n';
    };
  });

  // figure1
  auto* fig_cmd = app.add_subcommand("figure1", "three planar instances with balls of radius r_n and theta r_n");
  fig_cmd->add_option("--out-dir", out_dir)->capture_default_str();
  fig_cmd->callback([&] {
    run = [&] {
      const double fig_theta = 1.4, fig_c = 2.6, fig_q = -4.0 / 6.0;
      const std::vector<Interval> fig_box{{-1, 1}, {-1, 1}};
      const auto f = Density::uniform_box(fig_box);
      fs::create_directories(out_dir);
      const auto table_path = (fs::path(out_dir) / "figure1.csv").string();
      auto table = open_output(table_path);
      table << "n,r,betti\n";
      json outputs{{"table", table_path}};
      const RandomStream root(seed);
      for (std::size_t i = 0; i < 3; ++i) {
        const std::size_t count = std::size_t{100} * static_cast<std::size_t>(std::pow(10, i));
        RandomStream s = root.split(i);
        const auto cloud = sample_binomial(count, f, s);
        const double radius = fig_c * std::pow(static_cast<double>(count), fig_q);
        const auto b = persistent_betti(cloud, radius, fig_theta, 1);
        const auto svg = (fs::path(out_dir) / ("figure1_n" + std::to_string(count) + ".svg")).string();
        render_balls(svg, cloud, radius, fig_theta, fig_box);
        table << count << ',' << radius << ',' << b << '\n';
        outputs["svg"].push_back(svg);
        std::cout << "n " << count << "  r " << radius << "  betti " << b << "  -> " << svg << '\n';
      }
      write_manifest((fs::path(out_dir) / "manifest.json").string(), "figure1",
                     {{"theta", fig_theta}, {"c", fig_c}, {"q", fig_q}, {"k", 1}, {"box", {{-1, 1}, {-1, 1}}},
                      {"seed", seed}},
                     outputs);
    };
  });

  // render
  auto* render_cmd = app.add_subcommand("render", "SVG of balls of radius r (dark) and theta r (light)");
  render_cmd->add_option("-i,--input", input)->required();
  render_cmd->add_option("-r,--radius", r)->required();
  render_cmd->add_option("--theta", theta)->capture_default_str();
  add_box(render_cmd, box);
  render_cmd->add_option("-o,--output", output, "default balls.svg");
  render_cmd->callback([&] {
    run = [&] {
      if (output.empty()) output = "balls.svg";
      const auto cloud = load_cloud(input);
      render_balls(output, cloud, r, theta, box.box(2));
      write_manifest(manifest_path(output), "render",
                     {{"input", input}, {"r", r}, {"theta", theta}, {"box", box.to_json()}}, {{"svg", output}});
      std::cout << cloud.size() << " disk pairs -> " << output << '\n';
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    run();
    return 0;
  } catch (const AuditFailure& e) {
    std::cerr << "audit failure: " << e.what() << "\nrepro cloud: " << e.repro_path() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

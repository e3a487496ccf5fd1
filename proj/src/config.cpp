#include "cechlab/config.hpp"

#include <fstream>
#include <set>

#include <boost/version.hpp>

#include "cechlab/errors.hpp"
#include "cechlab/simd/distance_kernels.hpp"

namespace cechlab {

namespace {

template <typename T>
T get(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("bad value for `") + key + "`: " + e.what());
  }
}

Density density_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known{"box"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigurationError("unknown density key `" + key + "`");
  if (!j.contains("box")) throw ConfigurationError("density needs `box`");
  std::vector<Interval> box;
  for (const auto& side : j.at("box")) {
    if (!side.is_array() || side.size() != 2 || !side[0].is_number() || !side[1].is_number())
      throw ConfigurationError("density box entries must be [lo, hi]");
    const double lo = side[0].get<double>(), hi = side[1].get<double>();
    if (!(hi > lo)) throw ConfigurationError("density box needs lo < hi");
    box.push_back({lo, hi});
  }
  if (box.empty()) throw ConfigurationError("density box is empty");
  return Density::uniform_box(std::move(box));
}

}  // namespace

ExperimentSpec spec_from_json(const nlohmann::json& j, ExperimentSpec base) {
  if (!j.is_object()) throw ConfigurationError("config must be a JSON object");
  static const std::set<std::string> known{"d",     "k",     "theta", "density", "radius",     "n_grid",    "trials",
                                           "seed",  "field", "m",     "max_trials", "target_rse", "threads"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigurationError("unknown config key `" + key + "`");

  ExperimentSpec s = std::move(base);
  if (j.contains("d")) {
    s.d = get<std::size_t>(j, "d");
    if (!j.contains("density") && s.density.dim() != s.d) s.density = Density::unit_cube(s.d);
  }
  if (j.contains("k")) s.k = get<int>(j, "k");
  if (j.contains("theta")) s.theta = get<double>(j, "theta");
  if (j.contains("density")) s.density = density_from_json(j.at("density"));
  if (j.contains("radius")) {
    const auto& r = j.at("radius");
    for (const auto& [key, value] : r.items())
      if (key != "c" && key != "q") throw ConfigurationError("unknown radius key `" + key + "`");
    if (r.contains("c")) s.law.c = get<double>(r, "c");
    if (r.contains("q")) s.law.q = get<double>(r, "q");
  }
  if (j.contains("n_grid")) s.n_grid = get<std::vector<double>>(j, "n_grid");
  if (j.contains("trials")) s.trials = get<std::size_t>(j, "trials");
  if (j.contains("seed")) s.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("field")) {
    try {
      s.field = FieldSpec(get<std::uint32_t>(j, "field"));
    } catch (const ArgumentError& e) {
      throw ConfigurationError(e.what());
    }
  }
  if (j.contains("m")) s.m = get<std::size_t>(j, "m");
  if (j.contains("max_trials")) s.max_trials = get<std::size_t>(j, "max_trials");
  if (j.contains("target_rse")) s.target_rse = get<double>(j, "target_rse");
  if (j.contains("threads")) s.threads = get<std::size_t>(j, "threads");
  return s;
}

ExperimentSpec load_spec(const std::string& path, ExperimentSpec base) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigurationError("cannot parse " + path + ": " + e.what());
  }
  return spec_from_json(j, std::move(base));
}

nlohmann::json spec_to_json(const ExperimentSpec& spec) {
  nlohmann::json j;
  j["d"] = spec.d;
  j["k"] = spec.k;
  j["theta"] = spec.theta;
  if (spec.density.kind() == Density::Kind::UniformBox) {
    auto box = nlohmann::json::array();
    for (const auto& side : spec.density.box()) box.push_back({side.lo, side.hi});
    j["density"] = {{"box", box}};
  } else {
    j["density"] = spec.density.describe();
  }
  j["radius"] = {{"c", spec.law.c}, {"q", spec.law.q}};
  j["n_grid"] = spec.n_grid;
  j["trials"] = spec.trials;
  j["seed"] = spec.seed;
  j["field"] = spec.field.characteristic();
  j["m"] = spec.m;
  j["max_trials"] = spec.max_trials;
  j["target_rse"] = spec.target_rse;
  j["threads"] = spec.threads;
  return j;
}

nlohmann::json build_info() {
  return {{"cechlab", kVersion},
          {"compiler", __VERSION__},
          {"cxx_standard", __cplusplus},
          {"boost", BOOST_LIB_VERSION},
          {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                       "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"simd", std::string(simd::backend_name(simd::active_backend()))}};
}

void write_manifest(const std::string& path, const std::string& command, const nlohmann::json& parameters,
                    const nlohmann::json& outputs) {
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot write manifest " + path);
  const nlohmann::json j{{"command", command}, {"parameters", parameters}, {"outputs", outputs}, {"build", build_info()}};
  out << j.dump(2) << '\n';
}

}  // namespace cechlab

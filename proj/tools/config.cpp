#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "cli.hpp"
#include "oslab/lie.hpp"

namespace oslab::cli {

namespace {

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(fmt::format("config key '{}' has an invalid value", key));
  }
}

void expect_map(const YAML::Node& node, const std::string& key, const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError(fmt::format("config key '{}' must be a mapping", key));
  for (const auto& kv : node) {
    const auto name = kv.first.as<std::string>();
    if (!allowed.count(name)) throw ConfigError(fmt::format("unknown config key '{}.{}'", key, name));
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  RunConfig c;
  if (root.IsNull()) return c;
  if (!root.IsMap()) throw ConfigError("config must be a mapping");

  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    c.keys_set.push_back(key);
    if (key == "instance") {
      c.instance = scalar<std::string>(v, key);
    } else if (key == "lattice") {
      expect_map(v, key, {"n_points", "spacing"});
      if (v["n_points"]) c.n_points = scalar<std::size_t>(v["n_points"], "lattice.n_points");
      if (v["spacing"]) c.spacing = scalar<double>(v["spacing"], "lattice.spacing");
    } else if (key == "mass") {
      c.mass = scalar<double>(v, key);
    } else if (key == "omega") {
      c.omega = scalar<double>(v, key);
    } else if (key == "basis") {
      expect_map(v, key, {"max_degree", "times"});
      if (v["max_degree"]) c.max_degree = scalar<int>(v["max_degree"], "basis.max_degree");
      if (v["times"]) c.times = scalar<std::vector<std::size_t>>(v["times"], "basis.times");
    } else if (key == "step") {
      c.step = scalar<std::size_t>(v, key);
    } else if (key == "monte_carlo") {
      expect_map(v, key, {"samples", "seed"});
      if (v["samples"]) c.samples = scalar<std::size_t>(v["samples"], "monte_carlo.samples");
      if (v["seed"]) c.seed = scalar<std::uint64_t>(v["seed"], "monte_carlo.seed");
    } else if (key == "families") {
      expect_map(v, key, {"count", "max_size"});
      if (v["count"]) c.family_count = scalar<std::size_t>(v["count"], "families.count");
      if (v["max_size"]) c.family_max_size = scalar<std::size_t>(v["max_size"], "families.max_size");
    } else if (key == "tolerance") {
      c.tolerance = scalar<double>(v, key);
    } else if (key == "corrupt_offset") {
      c.corrupt_offset = scalar<double>(v, key);
    } else if (key == "example") {
      c.example = scalar<std::string>(v, key);
    } else if (key == "algebra_file") {
      c.algebra_file = scalar<std::string>(v, key);
    } else if (key == "semigroup_samples") {
      c.semigroup_samples = scalar<std::size_t>(v, key);
    } else if (key == "inject_failure") {
      c.inject_failure = scalar<std::string>(v, key);
    } else if (key == "output_dir") {
      c.output_dir = scalar<std::string>(v, key);
    } else {
      throw ConfigError(fmt::format("unknown config key '{}'", key));
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig c = parse_config(ss.str());
  // Relative algebra files resolve against the config's directory.
  if (!c.algebra_file.empty() && std::filesystem::path(c.algebra_file).is_relative()) {
    c.algebra_file = (path.parent_path() / c.algebra_file).string();
  }
  return c;
}

void validate(const RunConfig& c) {
  static const std::set<std::string> instances{"ou", "free-field", "damped-cosine"};
  if (!instances.count(c.instance)) throw ConfigError(fmt::format("unknown instance '{}'", c.instance));
  if (c.n_points < 4 || c.n_points > 4096 || c.n_points % 2 != 0)
    throw ConfigError(fmt::format("lattice.n_points must be even and in [4, 4096], got {}", c.n_points));
  if (!(c.spacing > 0.0) || !std::isfinite(c.spacing)) throw ConfigError("lattice.spacing must be positive");
  if (!(c.mass > 0.0) || !std::isfinite(c.mass)) throw ConfigError("mass must be positive");
  if (!std::isfinite(c.omega) || c.omega < 0.0) throw ConfigError("omega must be finite and nonnegative");
  if (c.max_degree < 0 || c.max_degree > 8) throw ConfigError("basis.max_degree must be in [0, 8]");
  if (c.times.empty()) throw ConfigError("basis.times must not be empty");
  for (auto t : c.times)
    if (t >= c.n_points / 2) throw ConfigError(fmt::format("basis time offset {} is beyond the lattice", t));
  if (c.step == 0) throw ConfigError("step must be at least 1");
  if (c.samples != 0 && c.samples < 1000) throw ConfigError("monte_carlo.samples must be 0 or at least 1000");
  if (c.family_count == 0 || c.family_max_size < 2)
    throw ConfigError("families.count must be positive and families.max_size at least 2");
  if (!(c.tolerance > 0.0) || c.tolerance >= 1.0) throw ConfigError("tolerance must lie in (0, 1)");
  if (!std::isfinite(c.corrupt_offset)) throw ConfigError("corrupt_offset must be finite");
  if (c.algebra_file.empty()) {
    try {
      (void)builtin_example(c.example);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  if (!c.inject_failure.empty()) {
    const auto names = suite_check_names();
    if (std::find(names.begin(), names.end(), c.inject_failure) == names.end())
      throw ConfigError(fmt::format("inject_failure names no suite check: '{}'", c.inject_failure));
  }
}

}  // namespace oslab::cli

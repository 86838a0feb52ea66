#pragma once

// Command-line front end: run configuration, subcommands and the suite.
// Every command writes its reports under `out_dir` and returns an exit code:
// 0 all checks pass, 1 a mathematical check failed, 2 usage or config error.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace oslab::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsageError = 2 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string instance = "ou";  // ou | free-field | damped-cosine
  std::size_t n_points = 32;
  double spacing = 0.05;
  double mass = 1.0;
  double omega = 3.0;  // damped-cosine only

  int max_degree = 3;
  std::vector<std::size_t> times{0, 1, 2};  // offsets from the first positive site
  std::size_t step = 1;

  std::size_t samples = 20000;  // 0 disables the Monte-Carlo arms
  std::uint64_t seed = 1;

  std::size_t family_count = 50;
  std::size_t family_max_size = 16;
  double tolerance = 1e-10;
  double corrupt_offset = 0.0;  // S'(f) = S(f) + offset for f != 0

  std::string example = "sl2R-cartan";
  std::string algebra_file;
  std::size_t semigroup_samples = 100;
  std::string inject_failure;

  std::string output_dir;
  // Keys read from the config file, in file order; empty means defaults.
  std::vector<std::string> keys_set;
};

// Parses the YAML config; unknown keys and out-of-range values throw ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
void validate(const RunConfig& config);

struct Context {
  std::filesystem::path out_dir;
  std::ostream* log = nullptr;  // progress; null when quiet
  std::ostream* err = nullptr;  // error messages, shown even when quiet
};

int run_rp_check(const RunConfig& config, const Context& ctx);
int run_reconstruct(const RunConfig& config, const Context& ctx);
int run_npoint(const RunConfig& config, const Context& ctx);
int run_cdual(const RunConfig& config, const Context& ctx);
int run_cone_check(const RunConfig& config, const Context& ctx);
int run_suite(const RunConfig& config, const Context& ctx);

std::vector<std::string> suite_check_names();

// Full command line: subcommand plus flags. Output and errors go to the streams.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace oslab::cli

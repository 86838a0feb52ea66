#include <cstdlib>
#include <ostream>

#include <CLI11.hpp>

#include "cli.hpp"

namespace oslab::cli {

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reflection positivity and Euclidean reconstruction laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, example;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> tolerance;
  bool quiet = false;

  const std::vector<std::string> names{"rp-check", "reconstruct", "npoint", "cdual", "cone-check", "suite"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "YAML run configuration");
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--samples", samples, "Monte-Carlo samples (0 disables)");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--tolerance", tolerance, "Relative eigenvalue tolerance");
    sub->add_flag("--quiet", quiet, "Suppress progress output");
    if (name == "cdual" || name == "cone-check") sub->add_option("--example,example", example, "Built-in example id");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) config = load_config(config_path);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  if (seed) config.seed = *seed;
  if (samples) config.samples = *samples;
  if (tolerance) config.tolerance = *tolerance;
  if (!example.empty()) {
    config.example = example;
    config.algebra_file.clear();
  }

  Context ctx;
  if (!out_dir.empty()) {
    ctx.out_dir = out_dir;
  } else if (!config.output_dir.empty()) {
    ctx.out_dir = config.output_dir;
  } else if (const char* env = std::getenv("OSLAB_OUT_DIR"); env && *env) {
    ctx.out_dir = env;
  } else {
    ctx.out_dir = "oslab-out";
  }
  ctx.log = quiet ? nullptr : &out;
  ctx.err = &err;

  const std::string cmd = app.get_subcommands().front()->get_name();
  int code = kUsageError;
  try {
    if (cmd == "rp-check") code = run_rp_check(config, ctx);
    else if (cmd == "reconstruct") code = run_reconstruct(config, ctx);
    else if (cmd == "npoint") code = run_npoint(config, ctx);
    else if (cmd == "cdual") code = run_cdual(config, ctx);
    else if (cmd == "cone-check") code = run_cone_check(config, ctx);
    else code = run_suite(config, ctx);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return code;
}

}  // namespace oslab::cli

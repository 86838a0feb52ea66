#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace oslab::cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "oslab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(OSLAB_FIXTURE_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("oslab_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = slurp(e.path());
  return files;
}

}  // namespace

TEST(Config, DefaultsAndStrictKeys) {
  const auto c = parse_config("");
  EXPECT_TRUE(c.keys_set.empty());
  EXPECT_EQ(c.instance, "ou");
  const auto d = parse_config("mass: 2\nlattice:\n  n_points: 64\n");
  EXPECT_EQ(d.mass, 2.0);
  EXPECT_EQ(d.n_points, 64u);
  EXPECT_EQ(d.keys_set.size(), 2u);
  EXPECT_THROW(parse_config("lattice_size: 4\n"), ConfigError);
  EXPECT_THROW(validate(parse_config("lattice:\n  n_points: 33\n")), ConfigError);
  EXPECT_THROW(validate(parse_config("monte_carlo:\n  samples: 10\n")), ConfigError);
  EXPECT_NO_THROW(validate(parse_config("monte_carlo:\n  samples: 0\n")));
  EXPECT_THROW(validate(parse_config("inject_failure: nope\n")), ConfigError);
}

TEST(Cli, RpCheckDefaultPasses) {
  const auto out = scratch("rp_default");
  const auto r = invoke({"rp-check", "--samples", "0", "--quiet", "--out", out.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(out / "rp_certificates.csv"));
  EXPECT_FALSE(fs::exists(out / "rp_witness.yaml"));
}

TEST(Cli, CorruptedFunctionalFailsWithWitness) {
  const auto out = scratch("rp_corrupt");
  const auto r = invoke({"rp-check", "--config", fixture("corrupted_rp.yaml"), "--quiet", "--out", out.string()});
  EXPECT_EQ(r.code, 1);
  ASSERT_TRUE(fs::exists(out / "rp_witness.yaml"));
  EXPECT_NE(slurp(out / "rp_witness.yaml").find("witness"), std::string::npos);
}

TEST(Cli, MissingConfigIsUsageError) {
  const auto r = invoke({"rp-check", "--config", fixture("does_not_exist.yaml"), "--out", scratch("missing").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, UnknownKeyAndBadFlagsAreUsageErrors) {
  EXPECT_EQ(invoke({"suite", "--config", fixture("unknown_key.yaml"), "--out", scratch("unknown").string()}).code, 2);
  EXPECT_EQ(invoke({"reconstruct", "--bogus"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"rp-check", "--help"}).code, 0);
}

TEST(Cli, ReconstructDefaultMatchesOscillatorGaps) {
  const auto out = scratch("reconstruct");
  const auto r = invoke({"reconstruct", "--samples", "0", "--quiet", "--out", out.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(out / "spectrum.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "level,raw,shifted,reference");
  for (int k = 0; k <= 3; ++k) {
    ASSERT_TRUE(std::getline(csv, line));
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
    ASSERT_EQ(cols.size(), 4u);
    if (k > 0) EXPECT_NEAR(std::stod(cols[2]), k, 0.01 * k);
  }
  EXPECT_TRUE(fs::exists(out / "contraction.csv"));
  EXPECT_TRUE(fs::exists(out / "reconstruction.yaml"));
}

TEST(Cli, StepTooLargeIsRangeError) {
  const auto r = invoke({"reconstruct", "--config", fixture("step_too_large.yaml"), "--out", scratch("step").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("max representable"), std::string::npos) << r.err;
}

TEST(Cli, MonteCarloDisabledDropsColumns) {
  const auto off = scratch("mc_off");
  ASSERT_EQ(invoke({"npoint", "--config", fixture("mc_disabled.yaml"), "--quiet", "--out", off.string()}).code, 0);
  const auto header_off = slurp(off / "npoint.csv").substr(0, slurp(off / "npoint.csv").find('\n'));
  EXPECT_EQ(header_off.find("monte_carlo"), std::string::npos) << header_off;
  EXPECT_NE(header_off.find("rhs_wick"), std::string::npos);

  const auto on = scratch("mc_on");
  ASSERT_EQ(invoke({"npoint", "--samples", "5000", "--quiet", "--out", on.string()}).code, 0);
  const auto text = slurp(on / "npoint.csv");
  EXPECT_NE(text.substr(0, text.find('\n')).find("monte_carlo"), std::string::npos);
}

TEST(Cli, CDualCommands) {
  const auto out = scratch("cdual");
  EXPECT_EQ(invoke({"cdual", "sl2R-cartan", "--quiet", "--out", out.string()}).code, 0);
  const auto yaml = slurp(out / "cdual.yaml");
  EXPECT_NE(yaml.find("su2"), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "cdual_structure.csv"));
  EXPECT_EQ(invoke({"cdual", "--example", "abelian-n", "--quiet", "--out", scratch("abelian").string()}).code, 0);
  EXPECT_EQ(invoke({"cdual", "--config", fixture("perturbed_cdual.yaml"), "--quiet", "--out",
                    scratch("perturbed").string()})
                .code,
            1);
  EXPECT_EQ(invoke({"cdual", "no-such-algebra", "--out", scratch("nosuch").string()}).code, 2);
}

TEST(Cli, ConeCheckNegativeControl) {
  EXPECT_EQ(invoke({"cone-check", "sl2R-adH", "--quiet", "--out", scratch("cone_adh").string()}).code, 0);
  const auto out = scratch("cone_heis");
  EXPECT_EQ(invoke({"cone-check", "heisenberg", "--quiet", "--out", out.string()}).code, 1);
  EXPECT_NE(slurp(out / "cone_check.yaml").find("not-semisimple"), std::string::npos);
}

TEST(Suite, InjectedFailureIsNamed) {
  const auto out = scratch("inject");
  const auto r = invoke({"suite", "--config", fixture("inject_failure.yaml"), "--quiet", "--out", out.string()});
  EXPECT_EQ(r.code, 1);
  const auto summary = slurp(out / "summary.txt");
  const auto pos = summary.find("cdual-abelian-n");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_NE(summary.substr(pos, summary.find('\n', pos) - pos).find("FAIL"), std::string::npos);
  EXPECT_NE(summary.find("11 of 12 checks passed"), std::string::npos);
}

TEST(Suite, EmptyConfigUsesDefaultsAndIsReproducible) {
  const auto a = scratch("suite_a");
  const auto b = scratch("suite_b");
  ASSERT_EQ(invoke({"suite", "--config", fixture("empty.yaml"), "--samples", "2000", "--quiet", "--out", a.string()}).code, 0);
  EXPECT_NE(slurp(a / "summary.txt").find("config: built-in defaults"), std::string::npos);
  ASSERT_EQ(invoke({"suite", "--config", fixture("empty.yaml"), "--samples", "2000", "--quiet", "--out", b.string()}).code, 0);
  const auto ta = tree(a), tb = tree(b);
  ASSERT_EQ(ta.size(), tb.size());
  for (const auto& [name, body] : ta) {
    ASSERT_TRUE(tb.count(name)) << name;
    EXPECT_EQ(body, tb.at(name)) << name;
  }
}

TEST(Suite, OutputDirectoryFromEnvironment) {
  const auto dir = scratch("env_out");
  ::setenv("OSLAB_OUT_DIR", dir.string().c_str(), 1);
  const auto r = invoke({"cdual", "abelian-n", "--quiet"});
  ::unsetenv("OSLAB_OUT_DIR");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(dir / "cdual.yaml"));
}

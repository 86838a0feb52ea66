#include <filesystem>
#include <functional>
#include <ostream>

#include <fmt/format.h>

#include "commands_internal.hpp"
#include "oslab/errors.hpp"
#include "oslab/report_io.hpp"

namespace oslab::cli {

namespace {

struct Check {
  std::string name;
  int expected;  // exit code that counts as a pass
  std::function<detail::Outcome(const Context&)> run;
};

// [H,E] = 2.001 E breaks the Jacobi identity.
AlgebraDocument perturbed_jacobi() {
  BuiltinExample ex = builtin_example("sl2R-cartan");
  auto data = LieAlgebraData::from_brackets({"H", "E", "F"}, {{0, 1, 1, 2.001}, {0, 2, 2, -2.0}, {1, 2, 0, 1.0}});
  return {data, ex.involution, std::nullopt};
}

std::vector<Check> build_checks(const RunConfig& base) {
  auto with = [&](auto edit) {
    RunConfig c = base;
    edit(c);
    return c;
  };
  const RunConfig ou = with([](RunConfig& c) { c.instance = "ou"; c.corrupt_offset = 0.0; });
  const RunConfig damped = with([](RunConfig& c) { c.instance = "damped-cosine"; c.corrupt_offset = 0.0; });
  auto example = [&](const std::string& id) { return with([&](RunConfig& c) { c.example = id; c.algebra_file.clear(); }); };

  std::vector<Check> checks;
  checks.push_back({"rp-ou", kPass, [ou](const Context& x) { return detail::rp_check(ou, x); }});
  checks.push_back({"rp-negative-control", kCheckFailed, [damped](const Context& x) { return detail::rp_check(damped, x); }});
  checks.push_back({"reconstruct-ou", kPass, [ou](const Context& x) { return detail::reconstruct(ou, x); }});
  checks.push_back({"npoint-ou", kPass, [ou](const Context& x) { return detail::npoint(ou, x); }});
  checks.push_back({"r1r2-ou", kPass, [ou](const Context& x) { return detail::r1r2(ou, x); }});
  for (std::string id : {"sl2R-cartan", "abelian-n"}) {
    checks.push_back({"cdual-" + id, kPass, [id](const Context& x) {
                        const BuiltinExample ex = builtin_example(id);
                        return detail::cdual({ex.algebra, ex.involution, ex.cone}, ex.su2_basis_change, x);
                      }});
  }
  checks.push_back({"cdual-perturbed-jacobi", kCheckFailed,
                    [](const Context& x) { return detail::cdual(perturbed_jacobi(), std::nullopt, x); }});
  for (std::string id : {"sl2R-cartan", "sl2R-adH"}) {
    const RunConfig c = example(id);
    checks.push_back({"cone-" + id, kPass, [c](const Context& x) { return detail::cone_check(c, x); }});
  }
  const RunConfig heis = example("heisenberg");
  checks.push_back({"cone-heisenberg-negative", kCheckFailed, [heis](const Context& x) { return detail::cone_check(heis, x); }});
  checks.push_back({"commutant", kPass, [](const Context&) {
                      const auto sl2 = builtin_example("sl2R-cartan").realization->basis;
                      const std::size_t irreducible = commutant_dimension(sl2);
                      const std::size_t everything = commutant_dimension({Eigen::MatrixXd::Identity(3, 3)});
                      const bool ok = irreducible == 1 && everything == 9;
                      return detail::Outcome{ok ? kPass : kCheckFailed, static_cast<double>(irreducible),
                                             fmt::format("sl2 defining rep {}, identity(3) {}", irreducible, everything)};
                    }});
  return checks;
}

}  // namespace

std::vector<std::string> suite_check_names() {
  return {"rp-ou",          "rp-negative-control", "reconstruct-ou",         "npoint-ou",
          "r1r2-ou",        "cdual-sl2R-cartan",   "cdual-abelian-n",        "cdual-perturbed-jacobi",
          "cone-sl2R-cartan", "cone-sl2R-adH",     "cone-heisenberg-negative", "commutant"};
}

int run_suite(const RunConfig& config, const Context& ctx) {
  try {
    validate(config);
  } catch (const ConfigError& e) {
    if (ctx.err) *ctx.err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  report::CsvTable table({"check", "status", "exit_code", "expected_exit", "metric", "note"});
  std::string text;
  if (config.keys_set.empty()) {
    text += "config: built-in defaults\n";
  } else {
    text += "config keys:";
    for (const auto& k : config.keys_set) text += " " + k;
    text += "\n";
  }
  text += fmt::format("seed: {}\nsamples: {}\n\n", config.seed, config.samples);

  std::size_t failed = 0;
  bool usage = false;
  for (const auto& check : build_checks(config)) {
    Context sub{ctx.out_dir / check.name, ctx.log, ctx.err};
    detail::Outcome o;
    try {
      o = check.run(sub);
    } catch (const ConfigError& e) {
      o = {kUsageError, 0.0, e.what()};
      usage = true;
    } catch (const std::exception& e) {
      o = {kCheckFailed, 0.0, std::string("error: ") + e.what()};
    }
    bool pass = o.code == check.expected;
    std::string why = o.note;
    if (config.inject_failure == check.name) {
      pass = false;
      why = "injected failure; " + why;
    }
    if (!pass) ++failed;
    const std::string status = pass ? "PASS" : "FAIL";
    table.add_row({check.name, status, std::to_string(o.code), std::to_string(check.expected),
                   report::fixed6(o.metric), why});
    text += fmt::format("{:<26} {}  metric={}  {}\n", check.name, status, report::fixed6(o.metric), why);
    if (ctx.log) *ctx.log << fmt::format("[{}] {}\n", status, check.name);
  }
  text += fmt::format("\n{} of {} checks passed\n", table.rows() - failed, table.rows());
  report::write_atomic(ctx.out_dir / "summary.csv", table.str());
  report::write_atomic(ctx.out_dir / "summary.txt", text);
  if (ctx.log) *ctx.log << fmt::format("suite: {} of {} checks passed\n", table.rows() - failed, table.rows());
  if (usage) return kUsageError;
  return failed == 0 ? kPass : kCheckFailed;
}

}  // namespace oslab::cli

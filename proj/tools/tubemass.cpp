#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "tubemass/runner/run.hpp"
#include "tubemass/verify/acceptance.hpp"

using namespace tubemass;

namespace {

int run_command(const std::string& config, const runner::RunOptions& options) {
  try {
    const runner::Report r = runner::run_scenario(std::filesystem::path(config), options);
    for (const auto& w : r.warnings) fmt::print(stderr, "warning: {}\n", w);
    fmt::print("{}: {} ({})\n", r.name, r.verdict, r.detail);
    for (const auto& t : r.tables) fmt::print("  {}\n", (options.out / t).string());
    for (const auto& f : r.figures) fmt::print("  {}\n", (options.out / f).string());
    return 0;
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "numerical failure: {}\n", e.what());
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tube-mass laboratory for positive closed (1,1)-currents"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one scenario config");
  std::string config;
  runner::RunOptions run_opts;
  std::string run_out = "out";
  run->add_option("config", config, "Scenario JSON")->required();
  run->add_option("--out", run_out, "Output directory");
  run->add_flag("--plot", run_opts.plot, "Also write SVG plots");

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify::SuiteOptions vopts;
  std::string vout = "verify_out", scen;
  std::uint64_t seed = 0;
  bool strict = false;
  verify->add_option("--filter", vopts.filter, "Criterion tag or number");
  verify->add_option("--out", vout, "Output directory");
  auto* seed_opt = verify->add_option("--seed", seed, "Override every scenario seed");
  verify->add_option("--scenarios", scen, "Bundled scenario directory");
  verify->add_flag("--strict", strict, "Exit 1 when a criterion fails");

  auto* schema = app.add_subcommand("schema", "Print the scenario JSON schema");

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    run_opts.out = run_out;
    return run_command(config, run_opts);
  }
  if (*verify) {
    vopts.out = vout;
    if (!scen.empty()) vopts.scenarios = scen;
    if (*seed_opt) vopts.seed = seed;
    if (verify::select(vopts.filter).empty()) {
      fmt::print(stderr, "no criterion matches '{}'\n", vopts.filter);
      return 2;
    }
    const auto report = verify::verify_suite(vopts);
    fmt::print("{}", verify::matrix(report));
    return strict && !report.all_passed() ? 1 : 0;
  }
  if (*schema) {
    fmt::print("{}\n", runner::schema().dump(2));
    return 0;
  }
  return 0;
}

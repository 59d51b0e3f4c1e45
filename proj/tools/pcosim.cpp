#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pcosync/runner.hpp"
#include "pcosync/scenario.hpp"

using namespace pcosync;

namespace {

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, bool quiet) {
  Scenario s = load_scenario(scenario_path);
  if (seed) s.seed = *seed;
  const RunResult run = run_scenario(s);
  const auto written = write_outputs(run, out_dir);
  if (!quiet) {
    for (const auto& [k, v] : summary_rows(run)) std::cout << fmt::format("{:<32} {}\n", k, v);
    for (const auto& p : written) std::cout << "wrote " << p.string() << '\n';
  }
  if (run.broadcast && run.broadcast->infeasible_rounds > 0) {
    std::cerr << fmt::format("warning: {} broadcast round(s) needed more than tx_power_max_dBm\n",
                             run.broadcast->infeasible_rounds);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse-coupled oscillator vs broadcast time synchronization simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Simulate a scenario and write metric CSVs");
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  run->add_option("--out-dir", out_dir, "Output directory");
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_flag("--quiet", quiet, "Suppress the summary on stdout");

  SweepSpec sweep;
  std::string mode = "per-transmission";
  std::string sweep_out;
  auto* sg = app.add_subcommand("sweep-gain", "Tabulate the power-reduction gain over n");
  sg->add_option("--n-min", sweep.n_min)->check(CLI::PositiveNumber);
  sg->add_option("--n-max", sweep.n_max)->check(CLI::PositiveNumber);
  sg->add_option("--n-step", sweep.n_step)->check(CLI::PositiveNumber);
  sg->add_option("--delta", sweep.deltas, "Pathloss exponent(s)")->expected(1, -1);
  sg->add_option("--area", sweep.area_m2, "Deployment area in m^2")->check(CLI::PositiveNumber);
  sg->add_option("--mode", mode)->check(CLI::IsMember({"per-transmission", "aggregate-sum"}));
  sg->add_option("--out", sweep_out, "CSV path (default stdout)");

  std::string validate_path;
  auto* val = app.add_subcommand("validate", "Check a scenario file and print its normalized form");
  val->add_option("--scenario", validate_path)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(scenario_path, out_dir, seed, quiet);
    if (*sg) {
      sweep.mode = gain_mode_from_string(mode);
      if (sweep_out.empty()) {
        sweep_gain(sweep, std::cout);
      } else {
        std::ofstream f(sweep_out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + sweep_out);
        sweep_gain(sweep, f);
      }
      return 0;
    }
    if (*val) {
      std::cout << scenario_to_json(load_scenario(validate_path)).dump(2) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

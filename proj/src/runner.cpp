#include "pcosync/runner.hpp"

#include <fstream>
#include <future>
#include <stdexcept>

#include <fmt/format.h>

namespace pcosync {

RunResult run_scenario(const Scenario& scenario) {
  scenario.validate();
  RunResult out;
  out.scenario = scenario;
  const NetworkSetup setup = make_setup(scenario);
  switch (scenario.protocol) {
    case Protocol::pco:
      out.pco = run_pco_leg(scenario, setup);
      break;
    case Protocol::broadcast:
      out.broadcast = run_broadcast_leg(scenario, setup);
      break;
    case Protocol::both: {
      auto bcast = std::async(std::launch::async, [&] { return run_broadcast_leg(scenario, setup); });
      out.pco = run_pco_leg(scenario, setup);
      out.broadcast = bcast.get();
      break;
    }
  }
  return out;
}

TtsStats tts_stats(const LegResult& leg) {
  TtsStats s;
  s.rounds = leg.rounds.size();
  if (leg.rounds.empty()) return s;
  s.first_ms = leg.rounds.front().tts.ms;
  const std::size_t rest = leg.rounds.size() - 1;
  if (rest == 0) return s;
  double sum = 0.0;
  for (std::size_t i = 1; i < leg.rounds.size(); ++i) sum += leg.rounds[i].tts.ms;
  s.rest_mean_ms = sum / static_cast<double>(rest);
  double sq = 0.0;
  for (std::size_t i = 1; i < leg.rounds.size(); ++i) {
    const double d = (leg.rounds[i].tts.ms - s.rest_mean_ms) * 1e-3;
    sq += d * d;
  }
  s.rest_var_s2 = sq / static_cast<double>(rest);
  return s;
}

double final_efficiency(const LegResult& leg) {
  return leg.samples.empty() ? 0.0 : leg.samples.back().sync_eff_per_W;
}

double duty_cycle(const LegResult& leg) {
  if (leg.n_nodes == 0 || leg.duration_s <= 0) return 0.0;
  return leg.window_on_s / (static_cast<double>(leg.n_nodes) * leg.duration_s);
}

namespace {

std::string num(double v) { return fmt::format("{:.9g}", v); }

void leg_rows(std::vector<std::pair<std::string, std::string>>& rows, const LegResult& leg) {
  const std::string p(to_string(leg.protocol));
  const TtsStats tts = tts_stats(leg);
  rows.emplace_back(p + ".energy_total_J", num(leg.energy.total()));
  rows.emplace_back(p + ".energy_tx_J", num(leg.energy.tx_J));
  rows.emplace_back(p + ".energy_rx_J", num(leg.energy.rx_J));
  rows.emplace_back(p + ".energy_startup_J", num(leg.energy.startup_J));
  rows.emplace_back(p + ".rounds", std::to_string(tts.rounds));
  rows.emplace_back(p + ".tts_first_ms", num(tts.first_ms));
  rows.emplace_back(p + ".tts_mean_ms", num(tts.rest_mean_ms));
  rows.emplace_back(p + ".tts_var_s2", num(tts.rest_var_s2));
  rows.emplace_back(p + ".final_pos", leg.samples.empty() ? "" : num(leg.samples.back().pos));
  rows.emplace_back(p + ".sync_eff_per_W", num(final_efficiency(leg)));
  if (leg.protocol == Protocol::pco) rows.emplace_back(p + ".duty_cycle", num(duty_cycle(leg)));
  if (leg.protocol == Protocol::broadcast) {
    rows.emplace_back(p + ".infeasible_rounds", std::to_string(leg.infeasible_rounds));
  }
  rows.emplace_back(p + ".trajectory_digest", fmt::format("{:016x}", leg.trajectory_digest));
}

}  // namespace

std::vector<std::pair<std::string, std::string>> summary_rows(const RunResult& run) {
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("name", run.scenario.name);
  rows.emplace_back("seed", std::to_string(run.scenario.seed));
  rows.emplace_back("n_nodes", std::to_string(run.scenario.n_nodes));
  rows.emplace_back("duration_s", num(run.scenario.duration_s));
  rows.emplace_back("mobility", run.scenario.mobility.enabled ? "on" : "off");
  if (run.pco) leg_rows(rows, *run.pco);
  if (run.broadcast) leg_rows(rows, *run.broadcast);
  if (run.pco && run.broadcast) {
    const double b = run.broadcast->energy.total();
    const double p = run.pco->energy.total();
    rows.emplace_back("energy_ratio", (b > 0 && p > 0) ? num(energy_ratio(b, p)) : "");
    const double eb = final_efficiency(*run.broadcast);
    rows.emplace_back("efficiency_ratio", eb > 0 ? num(final_efficiency(*run.pco) / eb) : "");
  }
  return rows;
}

std::vector<std::filesystem::path> write_outputs(const RunResult& run,
                                                 const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::string& file) {
    const auto path = out_dir / file;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    written.push_back(path);
    return f;
  };
  for (const auto* leg : {run.pco ? &*run.pco : nullptr, run.broadcast ? &*run.broadcast : nullptr}) {
    if (!leg) continue;
    auto f = open(fmt::format("{}.{}.metrics.csv", run.scenario.name, to_string(leg->protocol)));
    write_metrics_csv(f, leg->samples);
  }
  auto f = open(run.scenario.name + ".summary.csv");
  f << "key,value\n";
  for (const auto& [k, v] : summary_rows(run)) f << k << ',' << v << '\n';
  return written;
}

void sweep_gain(const SweepSpec& spec, std::ostream& out) {
  if (spec.n_min < 1 || spec.n_max < spec.n_min) throw std::invalid_argument("sweep_gain: empty n range");
  if (spec.n_step < 1) throw std::invalid_argument("sweep_gain: n_step must be >= 1");
  out << "n,delta,mode,gain_ratio\n";
  for (double delta : spec.deltas) {
    for (std::size_t n = spec.n_min; n <= spec.n_max; n += spec.n_step) {
      const double g = gain_ratio({static_cast<double>(n), spec.area_m2, delta, spec.mode});
      out << fmt::format("{},{:g},{},{:.12g}\n", n, delta, to_string(spec.mode), g);
    }
  }
}

}  // namespace pcosync

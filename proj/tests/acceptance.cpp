// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Values are printed so a failing line carries its own evidence.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "pco_harness.hpp"
#include "pcosync/broadcast.hpp"
#include "pcosync/power_control.hpp"
#include "pcosync/runner.hpp"

using namespace pcosync;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    o.pass = false;
    o.detail += fmt::format("; over time budget {:.0f} s", budget_s);
  }
  if (!o.pass) ++g_failures;
  std::printf("[%s] %d. %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

Scenario desk(const std::string& name) {
  Scenario s;
  s.name = name;
  s.seed = 1;
  s.n_nodes = 100;
  s.duration_s = 10 * 500.0;  // 10 sync rounds
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double quarter_mean(const std::vector<MetricSample>& s, bool last) {
  const std::size_t q = s.size() / 4;
  double sum = 0;
  for (std::size_t i = 0; i < q; ++i) sum += s[last ? s.size() - q + i : i].clock_var_s2;
  return sum / static_cast<double>(q);
}

}  // namespace

int main() {
  criterion(1, "gain curves", 1.0, [] {
    SweepSpec spec;
    spec.n_min = 10;
    spec.n_max = 10000;
    spec.n_step = 1;
    std::ostringstream csv;
    sweep_gain(spec, csv);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    std::map<std::string, double> last;
    bool increasing = true;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      const auto c1 = line.find(','), c2 = line.find(',', c1 + 1), c3 = line.find(',', c2 + 1);
      const std::string delta = line.substr(c1 + 1, c2 - c1 - 1);
      const double g = std::stod(line.substr(c3 + 1));
      if (last.count(delta) && !(g > last[delta])) increasing = false;
      last[delta] = g;
      ++rows;
    }
    const double g = gain_ratio({100, 1e6, 2, GainMode::per_transmission});
    const double hand = std::pow(std::sqrt(1 / std::numbers::pi) + std::sqrt(1.0 / 101.0), 2) * 100.0;
    const bool spot = std::abs(g - hand) <= 1e-6 && std::round(g * 100) / 100 == 44.05;
    return Outcome{increasing && spot && rows == 2 * 9991,
                   fmt::format("{} rows, increasing={}, gain(100,2)={:.6f} vs hand {:.6f}", rows,
                               increasing, g, hand)};
  });

  criterion(2, "energy arithmetic", 1.0, [] {
    RadioConfig radio;
    EnergyLedger ledger(1, radio);
    ledger.power_on(0);
    ledger.charge_rx(0, PcoParams{}.window);
    const bool window_ok = ledger.node(0).rx_J == 250e-6 && ledger.node(0).startup_J == 450e-6 * 0.05;

    std::vector<Position> pos{{0, 0}, {400, 0}};
    EnergyLedger bl(2, radio);
    broadcast_round(0, SimTime::zero(), pos, radio, BroadcastConfig{}, bl);
    const bool bcast_ok = bl.node(1).rx_J == 2.25e-6;

    // Through the engine: one extra static round adds exactly one window and
    // one startup per node.
    Scenario s;
    s.name = "energy";
    s.n_nodes = 25;
    s.protocol = Protocol::pco;
    s.duration_s = 500;
    const auto one = run_scenario(s).pco->energy;
    s.duration_s = 1000;
    const auto two = run_scenario(s).pco->energy;
    const double d_rx = (two.rx_J - one.rx_J) / 25;
    const double d_start = (two.startup_J - one.startup_J) / 25;
    const bool engine_ok = std::abs(d_rx - 250e-6) <= 1e-15 && std::abs(d_start - 22.5e-6) <= 1e-15;
    return Outcome{window_ok && bcast_ok && engine_ok,
                   fmt::format("window rx={:.9g} J startup={:.9g} J, broadcast rx={:.9g} J, engine per-round "
                               "rx={:.12g} J startup={:.12g} J",
                               ledger.node(0).rx_J, ledger.node(0).startup_J, bl.node(1).rx_J, d_rx, d_start)};
  });

  criterion(3, "duty cycle", 10.0, [] {
    Scenario s;
    s.name = "duty";
    s.n_nodes = 25;
    s.duration_s = 5000;
    s.protocol = Protocol::pco;
    const double dc = duty_cycle(*run_scenario(s).pco);
    return Outcome{std::abs(dc - 1e-5) <= 1e-7, fmt::format("duty cycle {:.6g}", dc)};
  });

  criterion(4, "two-oscillator entrainment", 1.0, [] {
    PcoParams p;
    const double airtime = p.pulse_bits / RadioConfig{}.bitrate_bps;
    RngStream rng(4, StreamId::protocol);
    std::size_t worst = 0;
    double worst_gap_err = 0;
    bool all = true;
    for (int trial = 0; trial < 200; ++trial) {
      const auto tr = harness::entrain(p, rng.uniform(0, p.x_th), VirtualClock{}, SimTime::zero(), p.window, airtime);
      if (!tr.converged_after || tr.fires_local.size() < 2) {
        all = false;
        continue;
      }
      worst = std::max(worst, *tr.converged_after);
      const auto& f = tr.fires_local;
      worst_gap_err = std::max(worst_gap_err, std::abs((f.back() - f[f.size() - 2]).seconds() - p.t_d));
    }
    const bool ok = all && worst <= 50 && worst_gap_err <= p.phase_tol * p.t_d;
    return Outcome{ok, fmt::format("200 trials, worst detection after {} pulses, worst gap error {:.3g} s",
                                   worst, worst_gap_err)};
  });

  RunResult full;
  bool have_full = false;
  criterion(5, "energy advantage", 0, [&] {
    const RunResult d = run_scenario(desk("desk"));
    const double desk_ratio = energy_ratio(d.broadcast->energy.total(), d.pco->energy.total());
    Scenario s;
    s.name = "full";
    full = run_scenario(s);
    have_full = true;
    const double full_ratio = energy_ratio(full.broadcast->energy.total(), full.pco->energy.total());
    const bool ok = desk_ratio > 5 && full_ratio >= 8 && full_ratio <= 25;
    return Outcome{ok, fmt::format("desk (100 nodes) ratio {:.4g} (need > 5), 612-node ratio {:.4g} (need 8..25)",
                                   desk_ratio, full_ratio)};
  });

  criterion(6, "TTS statistics", 0, [&] {
    if (!have_full) {
      Scenario s;
      s.name = "full";
      full = run_scenario(s);
    }
    const TtsStats t = tts_stats(*full.pco);
    const double mean_s = t.rest_mean_ms * 1e-3;
    const bool mean_ok = mean_s >= 0.005 && mean_s <= 0.02;
    const bool var_ok = t.rest_var_s2 >= 2e-5 && t.rest_var_s2 <= 2e-3;
    const bool spike = t.first_ms > t.rest_mean_ms;
    return Outcome{mean_ok && var_ok && spike,
                   fmt::format("mean {:.6g} s (need 0.005..0.02), variance {:.3g} s^2 (need 2e-5..2e-3), first round "
                               "{:.6g} ms vs mean {:.6g} ms",
                               mean_s, t.rest_var_s2, t.first_ms, t.rest_mean_ms)};
  });

  criterion(7, "mobility divergence", 0, [] {
    Scenario s;
    s.name = "mobile";
    s.duration_s = 10000;
    s.mobility.enabled = true;
    const RunResult r = run_scenario(s);
    const double b = quarter_mean(r.broadcast->samples, true) / quarter_mean(r.broadcast->samples, false);
    const double p = quarter_mean(r.pco->samples, true) / quarter_mean(r.pco->samples, false);
    const double eb = final_efficiency(*r.broadcast);
    const std::string eff = eb > 0 ? fmt::format("{:.4g}", final_efficiency(*r.pco) / eb) : "n/a";
    const bool ok = b >= 2 && p <= 2 && p >= 0.5;
    return Outcome{ok, fmt::format("broadcast variance x{:.3g} (need >= 2), PCO x{:.3g} (need within 2), "
                                   "efficiency ratio {} (reference 12), {} infeasible broadcast rounds",
                                   b, p, eff, r.broadcast->infeasible_rounds)};
  });

  criterion(8, "oracle equivalence", 5.0, [] {
    RngStream rng(8, StreamId::placement);
    const auto pos = place_uniform(200, 1000, rng);
    bool nn_ok = true;
    for (NodeId i = 0; i < pos.size(); ++i) {
      NodeId best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (NodeId j = 0; j < pos.size(); ++j) {
        const double d = std::hypot(pos[i].x - pos[j].x, pos[i].y - pos[j].y);
        if (j != i && d < bd) {
          bd = d;
          best = j;
        }
      }
      const Neighbor n = nearest_neighbor(i, pos);
      nn_ok = nn_ok && n.id == best && n.distance_m == bd;
    }
    NodeId center = 0;
    double best_r = std::numeric_limits<double>::infinity();
    for (NodeId i = 0; i < pos.size(); ++i) {
      double r = 0;
      for (const auto& q : pos) r = std::max(r, std::hypot(pos[i].x - q.x, pos[i].y - q.y));
      if (r < best_r) {
        best_r = r;
        center = i;
      }
    }
    const bool center_ok = select_center_node(pos) == center;
    const double lf = 3.0;
    const double a_hm = (1.1 * lf - 0.7) * 1 - (1.56 * lf - 0.8);
    const double hata_hand = 69.55 + 26.16 * lf - a_hm - 4.78 * lf * lf + 18.33 * lf - 40.94;
    const double hata = hata_rural_pathloss_dB(1000, 1e9, 1, 1);
    const double fspl = freespace_pathloss_dB(300, 1e9, 2);
    const double fspl_hand = 20 * std::log10(300.0) + 20 * std::log10(1e9) + 20 * std::log10(4 * std::numbers::pi / 3e8);
    const bool ok = nn_ok && center_ok && std::abs(hata - 120.34) <= 0.01 && std::abs(hata - hata_hand) <= 1e-9 &&
                    std::abs(fspl - 81.98) <= 0.01 && std::abs(fspl - fspl_hand) <= 1e-9;
    return Outcome{ok, fmt::format("nearest-neighbour match={}, center match={}, Hata {:.4f} dB (hand {:.4f}), "
                                   "free-space {:.4f} dB (hand {:.4f})",
                                   nn_ok, center_ok, hata, hata_hand, fspl, fspl_hand)};
  });

  criterion(9, "determinism", 0, [] {
    const auto root = std::filesystem::temp_directory_path() / "pcosync_acceptance";
    std::filesystem::remove_all(root);
    Scenario s = desk("repeat");
    s.mobility.enabled = true;
    write_outputs(run_scenario(s), root / "a");
    write_outputs(run_scenario(s), root / "b");
    bool same = true;
    for (const char* f : {"repeat.pco.metrics.csv", "repeat.broadcast.metrics.csv", "repeat.summary.csv"}) {
      const std::string a = slurp(root / "a" / f);
      same = same && !a.empty() && a == slurp(root / "b" / f);
    }
    return Outcome{same, same ? "3 files byte-identical" : "outputs differ"};
  });

  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}

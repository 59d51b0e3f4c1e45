#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pcosync/broadcast.hpp"
#include "pcosync/oscillator.hpp"
#include "pcosync/radio.hpp"
#include "pcosync/topology.hpp"

namespace pcosync {

enum class Protocol { pco, broadcast, both };

std::string_view to_string(Protocol p);
Protocol protocol_from_string(std::string_view s);

/// Full experiment description. Defaults reproduce the 612-node, 1 km^2
/// static setup with one GPS master.
struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  std::size_t n_nodes = 612;
  double area_side_m = 1000.0;
  Protocol protocol = Protocol::both;
  std::size_t n_masters = 1;
  double duration_s = 5000.0;
  double sample_interval_s = 10.0;
  double sync_tolerance_s = 4e-8;
  double drift_magnitude = 1e-8;
  /// Initial clock offsets are uniform in [-initial_offset_max_s, 0]. Pulse
  /// trains only resolve time modulo T_d, so PCO recovers absolute time only
  /// while offsets stay under T_d / 2.
  double initial_offset_max_s = 5e-6;
  PcoParams pco;
  RadioConfig radio;
  MobilityParams mobility;
  BroadcastConfig broadcast;

  void validate() const;
};

/// Validation or parse failure; the message starts with the offending field
/// path (e.g. "pco.x_th: must be > 0").
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace pcosync

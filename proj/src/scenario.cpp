#include "pcosync/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <type_traits>

namespace pcosync {

using nlohmann::json;

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::pco:
      return "pco";
    case Protocol::broadcast:
      return "broadcast";
    case Protocol::both:
      return "both";
  }
  return "unknown";
}

Protocol protocol_from_string(std::string_view s) {
  if (s == "pco") return Protocol::pco;
  if (s == "broadcast") return Protocol::broadcast;
  if (s == "both") return Protocol::both;
  throw std::invalid_argument("unknown protocol '" + std::string(s) + "'");
}

namespace {

/// Reads known keys from one JSON object and rejects anything left over.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail("", "expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    const json* v = take(key);
    if (!v) return;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v->is_boolean()) throw std::invalid_argument("expected a boolean");
        out = v->get<bool>();
      } else if constexpr (std::is_integral_v<T>) {
        if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<long long>() < 0)) {
          throw std::invalid_argument("expected a non-negative integer");
        }
        out = v->get<T>();
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v->is_number()) throw std::invalid_argument("expected a number");
        out = v->get<T>();
      } else {
        if (!v->is_string()) throw std::invalid_argument("expected a string");
        out = v->get<T>();
      }
    } catch (const std::exception& e) {
      fail(key, e.what());
    }
  }

  void get_opt(const char* key, std::optional<double>& out) {
    const json* v = take(key);
    if (!v || v->is_null()) return;
    if (!v->is_number()) fail(key, "expected a number");
    out = v->get<double>();
  }

  template <typename Fn>
  void get_enum(const char* key, Fn&& parse) {
    const json* v = take(key);
    if (!v) return;
    if (!v->is_string()) fail(key, "expected a string");
    try {
      parse(v->get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(key, e.what());
    }
  }

  const json* child(const char* key) { return take(key); }
  std::string child_path(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) fail(it.key(), "unknown key");
    }
  }

  [[noreturn]] void fail(std::string_view key, std::string_view what) const {
    std::string field = path_;
    if (!key.empty()) field = field.empty() ? std::string(key) : field + "." + std::string(key);
    throw ScenarioError((field.empty() ? std::string("<root>") : field) + ": " + std::string(what));
  }

 private:
  const json* take(const char* key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Fn>
void with_prefix(const char* prefix, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string(prefix) + "." + e.what());
  }
}

void read_pco(ObjectReader& r, PcoParams& p) {
  r.get_opt("s0", p.s0);
  r.get("gamma", p.gamma);
  r.get("x_th", p.x_th);
  r.get("epsilon", p.epsilon);
  r.get("t_d", p.t_d);
  r.get("refractory", p.refractory);
  r.get("window", p.window);
  r.get("resync_period", p.resync_period);
  r.get("phase_tol", p.phase_tol);
  r.get("k_confirm", p.k_confirm);
  r.get("pulse_bits", p.pulse_bits);
}

void read_radio(ObjectReader& r, RadioConfig& c) {
  r.get("bitrate_bps", c.bitrate_bps);
  r.get("tx_power_max_dBm", c.tx_power_max_dBm);
  r.get("rx_power_W", c.rx_power_W);
  r.get("tx_circuit_power_W", c.tx_circuit_power_W);
  r.get("lo_warmup_s", c.lo_warmup_s);
  r.get_opt("lo_startup_energy_J", c.lo_startup_energy_J);
  r.get("sensitivity_dBm", c.sensitivity_dBm);
  r.get("capture_threshold_dB", c.capture_threshold_dB);
  r.get("strict_collisions", c.strict_collisions);
  r.get("frequency_Hz", c.frequency_Hz);
  r.get("tx_antenna_height_m", c.tx_antenna_height_m);
  r.get("rx_antenna_height_m", c.rx_antenna_height_m);
  r.get_enum("pathloss_model", [&](const std::string& s) { c.pathloss_model = pathloss_model_from_string(s); });
  r.get("pathloss_exponent", c.pathloss_exponent);
  r.get("hata_clamp", c.hata_clamp);
  r.get("power_floor_dBm", c.power_floor_dBm);
  r.get("power_step_dB", c.power_step_dB);
  r.get("probe_slot_s", c.probe_slot_s);
}

void read_mobility(ObjectReader& r, MobilityParams& m) {
  r.get("enabled", m.enabled);
  r.get("sigma", m.sigma);
  r.get("k_attract", m.k_attract);
  r.get("k_repel", m.k_repel);
  r.get("r0", m.r0);
  r.get("step_dt", m.step_dt);
}

void read_broadcast(ObjectReader& r, BroadcastConfig& b) {
  r.get("timestamp_bits", b.timestamp_bits);
  r.get("period", b.period);
}

template <typename Fn>
void read_section(ObjectReader& parent, const char* key, Fn&& fn) {
  const json* v = parent.child(key);
  if (!v) return;
  ObjectReader r(*v, parent.child_path(key));
  fn(r);
  r.finish();
}

}  // namespace

void Scenario::validate() const {
  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw ScenarioError(std::string(field) + ": " + what);
  };
  require(!name.empty(), "name", "must not be empty");
  require(name.find_first_of("/\\") == std::string::npos, "name", "must not contain path separators");
  require(n_nodes >= 1, "n_nodes", "must be >= 1");
  require(n_masters < n_nodes, "n_masters", "must be less than n_nodes");
  require(std::isfinite(area_side_m) && area_side_m > 0, "area_side_m", "must be > 0");
  require(std::isfinite(duration_s) && duration_s > 0, "duration_s", "must be > 0");
  require(std::isfinite(sample_interval_s) && sample_interval_s > 0, "sample_interval_s", "must be > 0");
  require(std::isfinite(sync_tolerance_s) && sync_tolerance_s > 0, "sync_tolerance_s", "must be > 0");
  require(std::isfinite(drift_magnitude) && drift_magnitude >= 0 && drift_magnitude < 1,
          "drift_magnitude", "must be in [0, 1)");
  require(std::isfinite(initial_offset_max_s) && initial_offset_max_s >= 0, "initial_offset_max_s",
          "must be >= 0");
  with_prefix("pco", [&] { pco.validate(); });
  with_prefix("radio", [&] { radio.validate(); });
  with_prefix("mobility", [&] { mobility.validate(); });
  with_prefix("broadcast", [&] { broadcast.validate(); });
}

Scenario scenario_from_json(const json& doc) {
  Scenario s;
  ObjectReader root(doc, "");
  root.get("name", s.name);
  root.get("seed", s.seed);
  root.get("n_nodes", s.n_nodes);
  root.get("area_side_m", s.area_side_m);
  root.get_enum("protocol", [&](const std::string& v) { s.protocol = protocol_from_string(v); });
  root.get("n_masters", s.n_masters);
  root.get("duration_s", s.duration_s);
  root.get("sample_interval_s", s.sample_interval_s);
  root.get("sync_tolerance_s", s.sync_tolerance_s);
  root.get("drift_magnitude", s.drift_magnitude);
  root.get("initial_offset_max_s", s.initial_offset_max_s);
  read_section(root, "pco", [&](ObjectReader& r) { read_pco(r, s.pco); });
  read_section(root, "radio", [&](ObjectReader& r) { read_radio(r, s.radio); });
  read_section(root, "mobility", [&](ObjectReader& r) { read_mobility(r, s.mobility); });
  read_section(root, "broadcast", [&](ObjectReader& r) { read_broadcast(r, s.broadcast); });
  root.finish();
  s.validate();
  return s;
}

json scenario_to_json(const Scenario& s) {
  json pco = {
      {"gamma", s.pco.gamma},           {"x_th", s.pco.x_th},
      {"epsilon", s.pco.epsilon},       {"t_d", s.pco.t_d},
      {"refractory", s.pco.refractory}, {"window", s.pco.window},
      {"resync_period", s.pco.resync_period}, {"phase_tol", s.pco.phase_tol},
      {"k_confirm", s.pco.k_confirm},   {"pulse_bits", s.pco.pulse_bits},
  };
  if (s.pco.s0) pco["s0"] = *s.pco.s0;
  json radio = {
      {"bitrate_bps", s.radio.bitrate_bps},
      {"tx_power_max_dBm", s.radio.tx_power_max_dBm},
      {"rx_power_W", s.radio.rx_power_W},
      {"tx_circuit_power_W", s.radio.tx_circuit_power_W},
      {"lo_warmup_s", s.radio.lo_warmup_s},
      {"sensitivity_dBm", s.radio.sensitivity_dBm},
      {"capture_threshold_dB", s.radio.capture_threshold_dB},
      {"strict_collisions", s.radio.strict_collisions},
      {"frequency_Hz", s.radio.frequency_Hz},
      {"tx_antenna_height_m", s.radio.tx_antenna_height_m},
      {"rx_antenna_height_m", s.radio.rx_antenna_height_m},
      {"pathloss_model", std::string(to_string(s.radio.pathloss_model))},
      {"pathloss_exponent", s.radio.pathloss_exponent},
      {"hata_clamp", s.radio.hata_clamp},
      {"power_floor_dBm", s.radio.power_floor_dBm},
      {"power_step_dB", s.radio.power_step_dB},
      {"probe_slot_s", s.radio.probe_slot_s},
  };
  if (s.radio.lo_startup_energy_J) radio["lo_startup_energy_J"] = *s.radio.lo_startup_energy_J;
  return json{
      {"name", s.name},
      {"seed", s.seed},
      {"n_nodes", s.n_nodes},
      {"area_side_m", s.area_side_m},
      {"protocol", std::string(to_string(s.protocol))},
      {"n_masters", s.n_masters},
      {"duration_s", s.duration_s},
      {"sample_interval_s", s.sample_interval_s},
      {"sync_tolerance_s", s.sync_tolerance_s},
      {"drift_magnitude", s.drift_magnitude},
      {"initial_offset_max_s", s.initial_offset_max_s},
      {"pco", pco},
      {"radio", radio},
      {"mobility",
       {{"enabled", s.mobility.enabled},
        {"sigma", s.mobility.sigma},
        {"k_attract", s.mobility.k_attract},
        {"k_repel", s.mobility.k_repel},
        {"r0", s.mobility.r0},
        {"step_dt", s.mobility.step_dt}}},
      {"broadcast", {{"timestamp_bits", s.broadcast.timestamp_bits}, {"period", s.broadcast.period}}},
  };
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path.string() + ": cannot open scenario file");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ScenarioError(path.string() + ": parse error: " + e.what());
  }
  return scenario_from_json(doc);
}

}  // namespace pcosync

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "siglab/types.hpp"

namespace siglab {

// Piecewise-constant arrival rate in vehicles/hour. Segments are keyed by start
// time; the first segment must start at 0.
struct RateSchedule {
  struct Point {
    int start = 0;
    double rate = 0.0;  // veh/h
  };
  std::vector<Point> points;

  static RateSchedule constant(double rate) { return {{{0, rate}}}; }

  double at(int t) const {
    double r = 0.0;
    for (const Point& p : points) {
      if (p.start > t) break;
      r = p.rate;
    }
    return r;
  }

  void validate() const {
    if (points.empty() || points.front().start != 0)
      throw Error(ErrorKind::Config, "rate schedule must start at t=0");
    int prev = -1;
    for (const Point& p : points) {
      if (p.start <= prev) throw Error(ErrorKind::Config, "rate schedule points out of order");
      if (p.rate < 0) throw Error(ErrorKind::Config, "arrival rates must be >= 0");
      prev = p.start;
    }
  }
};

struct PedestrianWindow {
  int start = 0;
  int end = 0;
  PhaseId phase = PhaseId::NS_Green;  // phase that serves the crossing
};

// Emergency vehicles are scripted as (time, approach) and stay active for a
// fixed 30 s window from the event time.
inline constexpr int kEmergencyActiveSeconds = 30;

struct EmergencyEvent {
  int time = 0;
  ApproachId approach = ApproachId::North;
};

struct ScenarioConfig {
  std::string name = "balanced";
  int duration = 3600;
  std::array<RateSchedule, kApproachCount> arrival_rates;
  double left_turn_fraction = 0.25;
  std::vector<PedestrianWindow> pedestrian_windows;
  std::vector<EmergencyEvent> emergency_events;
  std::uint64_t seed = 1;

  void validate() const {
    if (duration <= 0) throw Error(ErrorKind::Config, "scenario duration must be > 0");
    if (left_turn_fraction < 0.0 || left_turn_fraction > 1.0)
      throw Error(ErrorKind::Config, "left_turn_fraction must be in [0,1]");
    for (const RateSchedule& rs : arrival_rates) rs.validate();
    for (const PedestrianWindow& w : pedestrian_windows)
      if (w.start < 0 || w.end > duration || w.start >= w.end)
        throw Error(ErrorKind::Config, "pedestrian window outside [0,duration]");
    for (const EmergencyEvent& e : emergency_events)
      if (e.time < 0 || e.time >= duration)
        throw Error(ErrorKind::Config, "emergency event outside [0,duration]");
  }
};

// Demand scenarios of the experiment matrix plus the `fluctuating` pattern used
// only for predictor training data (sinusoid 300-600 veh/h, period 900 s).
inline ScenarioConfig build_scenario(const std::string& name, std::uint64_t seed = 1) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.seed = seed;
  if (name == "balanced") {
    for (auto& rs : cfg.arrival_rates) rs = RateSchedule::constant(450.0);
  } else if (name == "directional_peak") {
    cfg.arrival_rates[static_cast<int>(ApproachId::North)] = RateSchedule::constant(700.0);
    cfg.arrival_rates[static_cast<int>(ApproachId::South)] = RateSchedule::constant(700.0);
    cfg.arrival_rates[static_cast<int>(ApproachId::East)] = RateSchedule::constant(350.0);
    cfg.arrival_rates[static_cast<int>(ApproachId::West)] = RateSchedule::constant(350.0);
  } else if (name == "sudden_surge") {
    // Balanced at 450 veh/h; N/S double to 900 veh/h on [1200, 2100).
    for (auto& rs : cfg.arrival_rates) rs = RateSchedule::constant(450.0);
    for (ApproachId a : {ApproachId::North, ApproachId::South}) {
      auto& pts = cfg.arrival_rates[static_cast<int>(a)].points;
      pts.push_back({1200, 900.0});
      pts.push_back({2100, 450.0});
    }
  } else if (name == "fluctuating") {
    // 10 s piecewise steps tracking 450 + 150 sin(2*pi*t/900).
    RateSchedule rs;
    for (int t = 0; t < cfg.duration; t += 10)
      rs.points.push_back({t, 450.0 + 150.0 * std::sin(2.0 * M_PI * t / 900.0)});
    for (auto& r : cfg.arrival_rates) r = rs;
  } else {
    throw Error(ErrorKind::Config, "unknown scenario name: " + name);
  }
  cfg.validate();
  return cfg;
}

inline std::vector<std::string> experiment_scenario_names() {
  return {"balanced", "directional_peak", "sudden_surge"};
}

// ---------------- JSON ----------------

inline void to_json(nlohmann::json& j, const RateSchedule& rs) {
  j = nlohmann::json::array();
  for (const auto& p : rs.points) j.push_back({{"start", p.start}, {"rate", p.rate}});
}

inline void from_json(const nlohmann::json& j, RateSchedule& rs) {
  rs.points.clear();
  for (const auto& p : j)
    rs.points.push_back({p.at("start").get<int>(), p.at("rate").get<double>()});
}

inline void to_json(nlohmann::json& j, const ScenarioConfig& c) {
  j = nlohmann::json{{"name", c.name},
                     {"duration", c.duration},
                     {"left_turn_fraction", c.left_turn_fraction},
                     {"seed", c.seed}};
  for (ApproachId a : kApproaches)
    j["arrival_rates"][approach_name(a)] = c.arrival_rates[static_cast<int>(a)];
  j["pedestrian_windows"] = nlohmann::json::array();
  for (const auto& w : c.pedestrian_windows)
    j["pedestrian_windows"].push_back(
        {{"start", w.start}, {"end", w.end}, {"phase", phase_name(w.phase)}});
  j["emergency_events"] = nlohmann::json::array();
  for (const auto& e : c.emergency_events)
    j["emergency_events"].push_back({{"time", e.time}, {"approach", approach_name(e.approach)}});
}

inline void from_json(const nlohmann::json& j, ScenarioConfig& c) {
  c.name = j.at("name").get<std::string>();
  c.duration = j.at("duration").get<int>();
  c.left_turn_fraction = j.at("left_turn_fraction").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  for (ApproachId a : kApproaches)
    c.arrival_rates[static_cast<int>(a)] =
        j.at("arrival_rates").at(approach_name(a)).get<RateSchedule>();
  c.pedestrian_windows.clear();
  for (const auto& w : j.at("pedestrian_windows")) {
    auto phase = parse_phase(w.at("phase").get<std::string>());
    if (!phase) throw Error(ErrorKind::Config, "unknown phase in pedestrian window");
    c.pedestrian_windows.push_back({w.at("start").get<int>(), w.at("end").get<int>(), *phase});
  }
  c.emergency_events.clear();
  for (const auto& e : j.at("emergency_events")) {
    auto app = parse_approach(e.at("approach").get<std::string>());
    if (!app) throw Error(ErrorKind::Config, "unknown approach in emergency event");
    c.emergency_events.push_back({e.at("time").get<int>(), *app});
  }
  c.validate();
}

}  // namespace siglab

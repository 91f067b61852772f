#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "siglab/errors.hpp"

namespace siglab {

// ---------------- intersection geometry ----------------

enum class ApproachId : int { North = 0, South = 1, East = 2, West = 3 };

inline constexpr int kApproachCount = 4;
inline constexpr std::array<ApproachId, 4> kApproaches = {
    ApproachId::North, ApproachId::South, ApproachId::East, ApproachId::West};

inline const char* approach_name(ApproachId a) {
  switch (a) {
    case ApproachId::North: return "north";
    case ApproachId::South: return "south";
    case ApproachId::East: return "east";
    case ApproachId::West: return "west";
  }
  return "?";
}

inline std::optional<ApproachId> parse_approach(const std::string& s) {
  for (ApproachId a : kApproaches)
    if (s == approach_name(a)) return a;
  return std::nullopt;
}

enum class LaneKind : int { Through = 0, Left = 1 };

struct LaneId {
  ApproachId approach = ApproachId::North;
  LaneKind kind = LaneKind::Through;

  int index() const { return static_cast<int>(approach) * 2 + static_cast<int>(kind); }
  bool operator==(const LaneId&) const = default;
};

inline constexpr int kLaneCount = 8;

inline LaneId lane_from_index(int i) {
  return LaneId{static_cast<ApproachId>(i / 2), static_cast<LaneKind>(i % 2)};
}

inline std::string lane_name(LaneId l) {
  return std::string(approach_name(l.approach)) +
         (l.kind == LaneKind::Through ? ".through" : ".left");
}

// ---------------- signal phases ----------------

enum class PhaseId : int { NS_Green = 0, EW_Green = 1, NS_Left = 2, EW_Left = 3 };

inline constexpr int kPhaseCount = 4;
inline constexpr std::array<PhaseId, 4> kPhases = {PhaseId::NS_Green, PhaseId::EW_Green,
                                                   PhaseId::NS_Left, PhaseId::EW_Left};

inline const char* phase_name(PhaseId p) {
  switch (p) {
    case PhaseId::NS_Green: return "NS_Green";
    case PhaseId::EW_Green: return "EW_Green";
    case PhaseId::NS_Left: return "NS_Left";
    case PhaseId::EW_Left: return "EW_Left";
  }
  return "?";
}

inline std::optional<PhaseId> parse_phase(const std::string& s) {
  for (PhaseId p : kPhases)
    if (s == phase_name(p)) return p;
  return std::nullopt;
}

inline bool phase_is_left(PhaseId p) { return p == PhaseId::NS_Left || p == PhaseId::EW_Left; }

// Approaches on the axis a phase serves (NS_* -> N,S; EW_* -> E,W).
inline std::array<ApproachId, 2> phase_approaches(PhaseId p) {
  if (p == PhaseId::NS_Green || p == PhaseId::NS_Left)
    return {ApproachId::North, ApproachId::South};
  return {ApproachId::East, ApproachId::West};
}

inline std::array<LaneId, 2> served_lanes(PhaseId p) {
  LaneKind k = phase_is_left(p) ? LaneKind::Left : LaneKind::Through;
  auto [a0, a1] = phase_approaches(p);
  return {LaneId{a0, k}, LaneId{a1, k}};
}

inline bool phase_serves(PhaseId p, LaneId l) {
  for (LaneId s : served_lanes(p))
    if (s == l) return true;
  return false;
}

// Through phase of the axis an approach belongs to; used for emergency priority.
inline PhaseId through_phase_for(ApproachId a) {
  return (a == ApproachId::North || a == ApproachId::South) ? PhaseId::NS_Green
                                                            : PhaseId::EW_Green;
}

// Round-robin service order used for "next phase" and phase-skip checks.
inline PhaseId next_phase_round_robin(PhaseId p) {
  return static_cast<PhaseId>((static_cast<int>(p) + 1) % kPhaseCount);
}

// ---------------- timing constants ----------------

inline constexpr int kMinGreenSeconds = 10;
inline constexpr int kMaxGreenSeconds = 45;
inline constexpr int kYellowSeconds = 3;
inline constexpr int kDecisionIntervalSeconds = 10;
inline constexpr int kSampleIntervalSeconds = 10;
inline constexpr int kHistoryLength = 12;   // K
inline constexpr int kForecastHorizon = 6;  // H, in 10 s steps

// Point-queue link model.
inline constexpr double kFreeFlowSpeed = 13.9;    // m/s
inline constexpr double kLinkLengthMeters = 150.0;
inline constexpr int kLinkTravelSeconds = 11;     // 150 m at 13.9 m/s, rounded up
inline constexpr int kLaneCapacity = 20;          // vehicles stored per lane
inline constexpr int kSaturationHeadway = 2;      // s between discharges under green

// ---------------- commands & constraints ----------------

struct SignalCommand {
  enum class Kind { Hold, Extend, Switch };

  Kind kind = Kind::Hold;
  // Extend: additional green seconds (> 0). Switch: initial green budget before the
  // next decision (defaults to min green).
  int duration = 0;
  PhaseId target = PhaseId::NS_Green;  // Switch only
  int issued_at = 0;

  static SignalCommand hold(int t) { return {Kind::Hold, 0, PhaseId::NS_Green, t}; }
  static SignalCommand extend(int d, int t) { return {Kind::Extend, d, PhaseId::NS_Green, t}; }
  static SignalCommand switch_to(PhaseId p, int t, int green_budget = kMinGreenSeconds) {
    return {Kind::Switch, green_budget, p, t};
  }

  bool operator==(const SignalCommand&) const = default;
};

// Same executable action, ignoring when it was issued.
inline bool same_action(const SignalCommand& a, const SignalCommand& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case SignalCommand::Kind::Hold: return true;
    case SignalCommand::Kind::Extend: return a.duration == b.duration;
    case SignalCommand::Kind::Switch: return a.target == b.target && a.duration == b.duration;
  }
  return false;
}

inline const char* command_kind_name(SignalCommand::Kind k) {
  switch (k) {
    case SignalCommand::Kind::Hold: return "hold";
    case SignalCommand::Kind::Extend: return "extend";
    case SignalCommand::Kind::Switch: return "switch";
  }
  return "?";
}

// The constraint set C of the safety layer. pedestrian/emergency flags are
// scenario-driven and refreshed by the runner at every decision.
struct ConstraintSet {
  int min_green = kMinGreenSeconds;
  int max_green = kMaxGreenSeconds;
  int yellow = kYellowSeconds;
  bool pedestrian_request = false;
  PhaseId pedestrian_phase = PhaseId::NS_Green;  // phase bound to the active request
  std::optional<ApproachId> emergency_vehicle;

  void validate() const {
    if (min_green <= 0 || min_green > max_green)
      throw Error(ErrorKind::Config, "constraints: require 0 < min_green <= max_green");
    if (yellow <= 0) throw Error(ErrorKind::Config, "constraints: yellow must be > 0");
  }
};

}  // namespace siglab

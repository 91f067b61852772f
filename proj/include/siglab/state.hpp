#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <span>
#include <vector>

#include <json.hpp>

#include "siglab/sim.hpp"
#include "siglab/types.hpp"

namespace siglab {

inline constexpr int kFeaturesPerApproach = 5;  // q, w, n, v, o
inline constexpr int kTrafficFeatures = kApproachCount * kFeaturesPerApproach;  // 20
inline constexpr int kStateVectorSize = kTrafficFeatures + kPhaseCount;         // 24

struct ApproachFeatures {
  double queue = 0.0;
  double wait = 0.0;
  double count = 0.0;
  double speed = 0.0;
  double occupancy = 0.0;
};

// Intersection-level state s_t: per-approach aggregates plus the one-hot phase.
struct TrafficState {
  int time = 0;
  std::array<ApproachFeatures, kApproachCount> per_approach{};
  std::array<double, kPhaseCount> phase_onehot{};
  bool in_yellow = false;  // one-hot then encodes the outgoing phase
};

// Sum queue/wait/count over each approach's two lanes; count-weighted means for
// speed and occupancy (unweighted mean when the approach is empty).
inline TrafficState aggregate(const std::array<LaneFeatures, kLaneCount>& lanes,
                              const SignalState& signal, int time) {
  TrafficState s;
  s.time = time;
  for (ApproachId a : kApproaches) {
    const LaneFeatures& through = lanes[LaneId{a, LaneKind::Through}.index()];
    const LaneFeatures& left = lanes[LaneId{a, LaneKind::Left}.index()];
    ApproachFeatures& f = s.per_approach[static_cast<int>(a)];
    f.queue = through.queue + left.queue;
    f.wait = through.wait + left.wait;
    f.count = through.count + left.count;
    double n = through.count + left.count;
    if (n > 0.0) {
      f.speed = (through.count * through.speed + left.count * left.speed) / n;
      f.occupancy = (through.count * through.occupancy + left.count * left.occupancy) / n;
    } else {
      f.speed = 0.5 * (through.speed + left.speed);
      f.occupancy = 0.5 * (through.occupancy + left.occupancy);
    }
  }
  s.phase_onehot[static_cast<int>(signal.phase)] = 1.0;
  s.in_yellow = signal.yellow;
  return s;
}

// Raw 20-vector in approach-major order [N.q, N.w, N.n, N.v, N.o, S.q, ...].
inline std::array<double, kTrafficFeatures> traffic_features(const TrafficState& s) {
  std::array<double, kTrafficFeatures> out{};
  for (int a = 0; a < kApproachCount; ++a) {
    const ApproachFeatures& f = s.per_approach[a];
    out[a * 5 + 0] = f.queue;
    out[a * 5 + 1] = f.wait;
    out[a * 5 + 2] = f.count;
    out[a * 5 + 3] = f.speed;
    out[a * 5 + 4] = f.occupancy;
  }
  return out;
}

// Ring of the last K states, spaced exactly sample_interval seconds apart.
class StateHistory {
 public:
  explicit StateHistory(int capacity = kHistoryLength, int sample_interval = kSampleIntervalSeconds)
      : capacity_(capacity), interval_(sample_interval) {}

  void push(const TrafficState& s) {
    if (!window_.empty() && s.time != window_.back().time + interval_)
      throw Error(ErrorKind::Representation,
                  "history push at t=" + std::to_string(s.time) + " expected t=" +
                      std::to_string(window_.back().time + interval_));
    window_.push_back(s);
    if (static_cast<int>(window_.size()) > capacity_) window_.pop_front();
  }

  bool full() const { return static_cast<int>(window_.size()) == capacity_; }
  int size() const { return static_cast<int>(window_.size()); }
  int capacity() const { return capacity_; }
  int sample_interval() const { return interval_; }
  const std::deque<TrafficState>& states() const { return window_; }
  const TrafficState& latest() const { return window_.back(); }
  void clear() { window_.clear(); }

 private:
  int capacity_;
  int interval_;
  std::deque<TrafficState> window_;
};

// Per-feature z-score statistics for the 20 traffic features; one-hot entries
// pass through unnormalized.
struct NormStats {
  std::array<double, kTrafficFeatures> mean{};
  std::array<double, kTrafficFeatures> stddev{};
  bool fitted = false;

  static NormStats identity() {
    NormStats s;
    s.mean.fill(0.0);
    s.stddev.fill(1.0);
    s.fitted = true;
    return s;
  }

  double normalize(int feature, double v) const { return (v - mean[feature]) / stddev[feature]; }
  double denormalize(int feature, double z) const { return z * stddev[feature] + mean[feature]; }
};

inline NormStats fit_norm_stats(std::span<const std::array<double, kStateVectorSize>> rows) {
  if (rows.empty()) throw Error(ErrorKind::Representation, "cannot fit stats on empty data");
  NormStats s;
  for (int f = 0; f < kTrafficFeatures; ++f) {
    double sum = 0.0;
    for (const auto& r : rows) sum += r[f];
    double mean = sum / static_cast<double>(rows.size());
    double var = 0.0;
    for (const auto& r : rows) var += (r[f] - mean) * (r[f] - mean);
    var /= static_cast<double>(rows.size());
    s.mean[f] = mean;
    s.stddev[f] = std::max(std::sqrt(var), 1e-6);
  }
  s.fitted = true;
  return s;
}

// 24-vector fed to the predictor: 20 z-scored features + the raw one-hot tail.
inline std::array<double, kStateVectorSize> to_feature_vector(const TrafficState& s,
                                                              const NormStats& stats) {
  if (!stats.fitted) throw Error(ErrorKind::Representation, "normalization stats not fitted");
  std::array<double, kStateVectorSize> out{};
  auto raw = traffic_features(s);
  for (int f = 0; f < kTrafficFeatures; ++f) out[f] = stats.normalize(f, raw[f]);
  for (int p = 0; p < kPhaseCount; ++p) out[kTrafficFeatures + p] = s.phase_onehot[p];
  return out;
}

// Raw (physical-unit) state vector; same layout, no normalization.
inline std::array<double, kStateVectorSize> to_raw_vector(const TrafficState& s) {
  std::array<double, kStateVectorSize> out{};
  auto raw = traffic_features(s);
  for (int f = 0; f < kTrafficFeatures; ++f) out[f] = raw[f];
  for (int p = 0; p < kPhaseCount; ++p) out[kTrafficFeatures + p] = s.phase_onehot[p];
  return out;
}

inline std::array<double, kTrafficFeatures> inverse_features(
    const std::array<double, kTrafficFeatures>& z, const NormStats& stats) {
  std::array<double, kTrafficFeatures> out{};
  for (int f = 0; f < kTrafficFeatures; ++f) out[f] = stats.denormalize(f, z[f]);
  return out;
}

// ---------------- JSON ----------------

inline void to_json(nlohmann::json& j, const TrafficState& s) {
  j = nlohmann::json{{"time", s.time}, {"in_yellow", s.in_yellow}};
  for (ApproachId a : kApproaches) {
    const ApproachFeatures& f = s.per_approach[static_cast<int>(a)];
    j["approaches"][approach_name(a)] = {{"queue", f.queue},
                                         {"wait", f.wait},
                                         {"count", f.count},
                                         {"speed", f.speed},
                                         {"occupancy", f.occupancy}};
  }
  j["phase_onehot"] = s.phase_onehot;
}

inline void from_json(const nlohmann::json& j, TrafficState& s) {
  s.time = j.at("time").get<int>();
  s.in_yellow = j.at("in_yellow").get<bool>();
  for (ApproachId a : kApproaches) {
    const auto& f = j.at("approaches").at(approach_name(a));
    ApproachFeatures& out = s.per_approach[static_cast<int>(a)];
    out.queue = f.at("queue").get<double>();
    out.wait = f.at("wait").get<double>();
    out.count = f.at("count").get<double>();
    out.speed = f.at("speed").get<double>();
    out.occupancy = f.at("occupancy").get<double>();
  }
  auto oh = j.at("phase_onehot").get<std::vector<double>>();
  if (oh.size() != kPhaseCount) throw Error(ErrorKind::Representation, "bad one-hot length");
  std::copy(oh.begin(), oh.end(), s.phase_onehot.begin());
}

inline void to_json(nlohmann::json& j, const NormStats& s) {
  j = nlohmann::json{{"mean", s.mean}, {"stddev", s.stddev}};
}

inline void from_json(const nlohmann::json& j, NormStats& s) {
  auto mean = j.at("mean").get<std::vector<double>>();
  auto stddev = j.at("stddev").get<std::vector<double>>();
  if (mean.size() != kTrafficFeatures || stddev.size() != kTrafficFeatures)
    throw Error(ErrorKind::Representation, "norm stats have wrong length");
  std::copy(mean.begin(), mean.end(), s.mean.begin());
  std::copy(stddev.begin(), stddev.end(), s.stddev.begin());
  for (double sd : s.stddev)
    if (sd <= 0.0) throw Error(ErrorKind::Representation, "norm stddev must be > 0");
  s.fitted = true;
}

}  // namespace siglab

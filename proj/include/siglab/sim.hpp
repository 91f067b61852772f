#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <vector>

#include "siglab/scenario.hpp"
#include "siglab/types.hpp"

namespace siglab {

// Deterministic helpers built on raw mt19937_64 output so event streams do not
// depend on the standard library's distribution implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Knuth multiplication method; per-tick means here are << 1.
inline int poisson_draw(std::mt19937_64& rng, double mean) {
  if (mean <= 0.0) {
    rng();  // keep the draw count independent of the rate schedule
    return 0;
  }
  const double limit = std::exp(-mean);
  int k = -1;
  double p = 1.0;
  do {
    p *= uniform01(rng);
    ++k;
  } while (p > limit);
  return k;
}

// Raw per-lane observation x_t^l = [q, w, n, v, o].
struct LaneFeatures {
  double queue = 0.0;      // halted vehicles
  double wait = 0.0;       // summed accumulated waiting seconds of halted vehicles
  double count = 0.0;      // vehicles on the lane (link + queue)
  double speed = 0.0;      // free_flow * moving/total, free_flow if empty
  double occupancy = 0.0;  // count / capacity (may exceed 1 via the upstream buffer)
};

struct SignalState {
  PhaseId phase = PhaseId::NS_Green;
  bool yellow = false;
  int elapsed_in_interval = 0;  // seconds in the current display interval
  int elapsed_green = 0;        // continuous green seconds of the current phase
  std::optional<PhaseId> pending;
};

struct ArrivalEvent {
  long id = 0;
  LaneId lane;
};

// One record per simulated second; the raw material for audit and metrics.
struct StepRecord {
  int t = 0;
  std::vector<ArrivalEvent> arrivals;
  std::vector<long> departures;
  PhaseId phase = PhaseId::NS_Green;
  bool yellow = false;
  int elapsed_green = 0;  // after this second
};

struct VehicleRecord {
  long id = 0;
  LaneId lane;
  int entry_time = 0;
  std::optional<int> exit_time;
  int stop_count = 0;
  int waited = 0;  // accumulated halted seconds
};

// Seeded 1 s resolution point-queue simulator of the four-arm intersection.
// Vehicles travel the 150 m link at free-flow speed, then stack at the stop
// line; a green lane discharges one vehicle per saturation headway. Arrivals
// beyond lane capacity stay in the (unbounded) queue as a virtual upstream
// buffer and keep counting toward q and w.
class Simulator {
 public:
  explicit Simulator(ScenarioConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
    cfg_.validate();
  }

  int now() const { return t_; }
  const ScenarioConfig& scenario() const { return cfg_; }
  SignalState signal() const { return signal_; }

  long entered() const { return entered_; }
  long exited() const { return exited_; }
  long present() const { return entered_ - exited_; }

  const std::vector<StepRecord>& steps() const { return steps_; }

  // Advance one second under `cmd`. Switch commands are validated against min
  // green here as defense in depth; the safety layer prevents them upstream.
  void step(const SignalCommand& cmd) {
    if (t_ >= cfg_.duration)
      throw Error(ErrorKind::Config, "simulation stepped past scenario duration");
    apply(cmd);

    StepRecord rec;
    rec.t = t_;
    rec.phase = signal_.phase;
    rec.yellow = signal_.yellow;

    spawn_arrivals(rec);
    advance_link();
    if (!signal_.yellow) discharge(rec);
    accrue_waits();
    for (int& cd : cooldown_)
      if (cd > 0) --cd;
    advance_signal();

    rec.elapsed_green = signal_.yellow ? 0 : signal_.elapsed_green;
    steps_.push_back(std::move(rec));
    ++t_;
  }

  std::array<LaneFeatures, kLaneCount> observe() const {
    std::array<LaneFeatures, kLaneCount> out{};
    for (int i = 0; i < kLaneCount; ++i) {
      const Lane& lane = lanes_[i];
      LaneFeatures& f = out[i];
      f.queue = static_cast<double>(lane.queue.size());
      for (const Veh& v : lane.queue) f.wait += v.waited;
      double n = static_cast<double>(lane.queue.size() + lane.link.size());
      f.count = n;
      double moving = static_cast<double>(lane.link.size());
      f.speed = n == 0.0 ? kFreeFlowSpeed : kFreeFlowSpeed * moving / n;
      f.occupancy = n / kLaneCapacity;
    }
    return out;
  }

  bool pedestrian_request(PhaseId* bound_phase = nullptr) const {
    for (const PedestrianWindow& w : cfg_.pedestrian_windows) {
      if (t_ >= w.start && t_ < w.end) {
        if (bound_phase) *bound_phase = w.phase;
        return true;
      }
    }
    return false;
  }

  std::optional<ApproachId> emergency_vehicle() const {
    for (const EmergencyEvent& e : cfg_.emergency_events)
      if (t_ >= e.time && t_ < e.time + kEmergencyActiveSeconds) return e.approach;
    return std::nullopt;
  }

  // Full vehicle table: exited vehicles first (in exit order), then everyone
  // still in the system.
  std::vector<VehicleRecord> vehicle_table() const {
    std::vector<VehicleRecord> out = done_;
    for (const Lane& lane : lanes_) {
      for (const Veh& v : lane.link) out.push_back(to_record(v, std::nullopt));
      for (const Veh& v : lane.queue) out.push_back(to_record(v, std::nullopt));
    }
    return out;
  }

  // Test/fixture hook: place vehicles directly on a lane, either already
  // queued at the stop line or still traveling the link.
  void inject(LaneId lane, int count, bool queued = true) {
    for (int i = 0; i < count; ++i) {
      Veh v;
      v.id = next_id_++;
      v.lane = lane;
      v.entry = t_;
      v.at_stopline = queued ? t_ : t_ + kLinkTravelSeconds;
      ++entered_;
      if (queued)
        lanes_[lane.index()].queue.push_back(v);
      else
        lanes_[lane.index()].link.push_back(v);
    }
  }

 private:
  struct Veh {
    long id = 0;
    LaneId lane;
    int entry = 0;
    int at_stopline = 0;
    int stops = 0;
    int waited = 0;
    bool halted = false;
    int halted_since = -1;
  };

  struct Lane {
    std::deque<Veh> link;   // traveling toward the stop line, FIFO by entry
    std::deque<Veh> queue;  // stacked at the stop line, FIFO
  };

  VehicleRecord to_record(const Veh& v, std::optional<int> exit) const {
    return {v.id, v.lane, v.entry, exit, v.stops, v.waited};
  }

  void apply(const SignalCommand& cmd) {
    if (cmd.kind != SignalCommand::Kind::Switch) return;
    if (signal_.yellow) {
      if (signal_.pending != cmd.target)
        throw Error(ErrorKind::Constraint, "switch issued during yellow clearance");
      return;
    }
    if (cmd.target == signal_.phase)
      throw Error(ErrorKind::Constraint, "switch target equals current phase");
    if (signal_.elapsed_green < kMinGreenSeconds)
      throw Error(ErrorKind::Constraint, "switch before minimum green rejected");
    signal_.yellow = true;
    signal_.pending = cmd.target;
    signal_.elapsed_in_interval = 0;
  }

  void spawn_arrivals(StepRecord& rec) {
    for (ApproachId a : kApproaches) {
      double mean = cfg_.arrival_rates[static_cast<int>(a)].at(t_) / 3600.0;
      int k = poisson_draw(rng_, mean);
      for (int i = 0; i < k; ++i) {
        LaneId lane{a, uniform01(rng_) < cfg_.left_turn_fraction ? LaneKind::Left
                                                                 : LaneKind::Through};
        Veh v;
        v.id = next_id_++;
        v.lane = lane;
        v.entry = t_;
        v.at_stopline = t_ + kLinkTravelSeconds;
        lanes_[lane.index()].link.push_back(v);
        ++entered_;
        rec.arrivals.push_back({v.id, lane});
      }
    }
  }

  void advance_link() {
    for (Lane& lane : lanes_) {
      while (!lane.link.empty() && lane.link.front().at_stopline <= t_) {
        lane.queue.push_back(lane.link.front());
        lane.link.pop_front();
      }
    }
  }

  void discharge(StepRecord& rec) {
    for (LaneId l : served_lanes(signal_.phase)) {
      Lane& lane = lanes_[l.index()];
      if (cooldown_[l.index()] == 0 && !lane.queue.empty()) {
        Veh v = lane.queue.front();
        lane.queue.pop_front();
        done_.push_back(to_record(v, t_));
        ++exited_;
        rec.departures.push_back(v.id);
        cooldown_[l.index()] = kSaturationHeadway;
      }
    }
  }

  void accrue_waits() {
    for (Lane& lane : lanes_) {
      for (Veh& v : lane.queue) {
        if (!v.halted) {
          v.halted = true;
          v.halted_since = t_;
          ++v.stops;  // one stop per moving->halted transition
        }
        ++v.waited;
      }
    }
  }

  void advance_signal() {
    if (signal_.yellow) {
      if (++signal_.elapsed_in_interval >= kYellowSeconds) {
        signal_.phase = *signal_.pending;
        signal_.pending.reset();
        signal_.yellow = false;
        signal_.elapsed_in_interval = 0;
        signal_.elapsed_green = 0;
      }
    } else {
      ++signal_.elapsed_in_interval;
      ++signal_.elapsed_green;
    }
  }

  ScenarioConfig cfg_;
  std::mt19937_64 rng_;
  std::array<Lane, kLaneCount> lanes_;
  std::array<int, kLaneCount> cooldown_{};
  SignalState signal_;
  int t_ = 0;
  long next_id_ = 1;
  long entered_ = 0;
  long exited_ = 0;
  std::vector<VehicleRecord> done_;
  std::vector<StepRecord> steps_;
};

}  // namespace siglab

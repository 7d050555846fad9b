#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmimo/channel.hpp"
#include "dmimo/dual_tracker.hpp"
#include "dmimo/qos.hpp"
#include "dmimo/select_single.hpp"

namespace dmimo {

// Per-user traffic description in configuration units; converted to
// nats/frame and frames internally.
struct UserTraffic {
  double load_kbps = 600;
  double delay_bound_ms = 50;
  double violation_prob = 1e-4;
};

struct InterferenceConfig {
  double threshold = 1.0;         // sigma_th^2, linear
  double grid_resolution_m = 0.5;
};

struct ScenarioConfig {
  std::string deployment_name = "single-user-5bs";
  Deployment deployment;
  PathLossModel pathloss = PathLossModel::calibrated(1.0, 3.0, 50.0);
  double bandwidth_hz = 1e5;
  double frame_duration_s = 0.01;
  PowerPolicy power;
  std::vector<UserTraffic> traffic;
  InterferenceConfig interference;
  std::uint64_t seed = 1;
  long train_frames = 5000;
  long eval_frames = 5000;
  std::string scheme = "ibs-ts";
  TrackerConfig tracker;

  double bt() const { return bandwidth_hz * frame_duration_s; }
  // load [kbit/s] -> nats/frame
  double arrival_rate(int user) const;
  double delay_bound_frames(int user) const;
  QoSSpec qos(int user) const;
  void validate() const;
};

// Flat key = value format; '#' starts a comment. Unknown keys are rejected.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);

// Sweep axes: load (kbit/s, all users), kappa, delay-bound (ms, all users),
// xi (all users).
void apply_axis(ScenarioConfig& config, const std::string& axis, double value);
bool is_valid_axis(const std::string& axis);

// Human-readable description of the built-in geometries.
std::string scenario_listing();

}  // namespace dmimo

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmimo/schemes.hpp"

namespace dmimo {

// P_L = P_ref + kappa (L - 1), with the silent mode drawing nothing.
double transmit_power(const PowerPolicy& policy, int mode);

// Per-BS radiated power of one frame's transmission: transmit-covariance
// diagonal mass per BS, summed over users, time-share-weighted for TDMA and
// alpha-weighted across time-shared modes. Totals match the per-mode budgets.
std::vector<double> per_bs_radiated_power(const ScenarioConfig& config, const FadingState& state,
                                          const FrameDecision& decision);

// Grid integration of {x : sum_m p_m g_m(x) > threshold} over a bounding box
// sized so the boundary received power is below threshold/100.
double interfering_area(std::span<const Vec2> bs_positions, std::span<const double> bs_powers,
                        const PathLossModel& model, double threshold, double grid_resolution);

// Same integral with the per-BS gain field cached once for a whole run; the
// box is sized for `max_total_power` so any per-frame profile is covered.
class InterferenceField {
 public:
  InterferenceField(std::span<const Vec2> bs_positions, const PathLossModel& model,
                    double threshold, double grid_resolution, double max_total_power);
  double area(std::span<const double> bs_powers) const;

 private:
  int num_bs_ = 0;
  double cell_area_ = 0;
  double threshold_ = 0;
  std::vector<double> gains_;  // candidate-cell-major, num_bs entries each
};

struct RunResult {
  std::string scheme;
  bool infeasible = false;
  bool converged = false;
  double avg_usage = 0;
  double avg_area = 0;
  std::vector<double> residual;  // per user, held-out frames
  std::vector<double> effcap;    // per user, nats/frame, held-out frames
  std::vector<double> max_effective_capacity;  // per user (diagnostic)
  TrackReport tracking;
  int fixed_cardinality = -1;
  long frames_total = 0;
  std::uint64_t seed = 0;
};

// End-to-end run: per-frame tables, multiplier tracking on the training
// frames, metrics on the held-out evaluation frames.
RunResult run_experiment(const ScenarioConfig& config);
RunResult run_experiment(const ScenarioConfig& config,
                         const std::vector<double>* lambda_warm_start);

struct SweepRow {
  double axis_value = 0;
  RunResult result;
};
struct SweepResult {
  std::string axis;
  std::vector<SweepRow> rows;
};
SweepResult sweep(const ScenarioConfig& config, const std::string& axis,
                  std::span<const double> values);

// CSV schema: scheme,axis,axis_value,avg_bs_usage,avg_interfering_area_m2,
// residual_user_1..K,effcap_user_1..K,converged,frames,seed
std::string csv_header(int users);
std::string csv_row(const RunResult& result, const std::string& axis, double axis_value, int users);
std::string run_csv(const ScenarioConfig& config, const RunResult& result);
std::string sweep_csv(const ScenarioConfig& config, const SweepResult& result);

// Service-rate traces of the solved policy on fresh frames (indices past the
// training + evaluation ranges), for queue validation.
struct PolicyTraces {
  RunResult run;
  std::vector<std::vector<double>> service;  // [user][frame]
};
PolicyTraces policy_service_traces(const ScenarioConfig& config, long trace_frames);

}  // namespace dmimo

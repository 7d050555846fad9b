#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dmimo/scenario.hpp"
#include "dmimo/select_multi.hpp"

namespace dmimo {

enum class Scheme {
  ibs_ts,
  optimal_ts,
  ogbs_pt,
  fixed_l,
  pbs_bd_pt,
  pbs_tdma_pt,
  semirandom_bd_pt,
  semirandom_tdma_pt,
};

Scheme scheme_from_name(const std::string& name);
const char* scheme_name(Scheme s);
std::vector<std::string> scheme_names();
bool scheme_is_single_user(Scheme s);

// One transmitting mode of a frame. Time sharing emits up to two of these,
// the probabilistic-transmission schemes exactly one (or none when silent).
struct ModeUse {
  enum class Kind { single_user, bd, tdma };
  Kind kind = Kind::single_user;
  int mode = 0;                    // L
  double weight = 1.0;             // time-sharing fraction of the frame
  std::vector<int> subset;         // selected BS indices
  std::vector<double> user_power;  // bd: per-user split of P_L; single_user: {P_L}
  std::vector<double> time_share;  // tdma: per-user normalized slots
};

struct FrameDecision {
  double usage = 0;                  // BS usage this frame (fractional under TS)
  std::vector<double> service_rate;  // per user, nats/frame
  std::vector<double> exp_term;      // per user, exp(-theta_n * service_rate_n)
  std::vector<ModeUse> modes;
};

// Precomputed per-frame tables for one scheme over one frame range. The
// residual oracle and per-frame decisions are pure in (frame, lambda);
// internal multiplier caches only warm-start the inner bisections.
class SchemeEngine {
 public:
  virtual ~SchemeEngine() = default;

  virtual int constraints() const = 0;
  virtual long frames() const = 0;
  // Sample-average constraint residuals over this engine's frames.
  virtual std::vector<double> residual(const std::vector<double>& lambda) = 0;
  // One frame's instantaneous residuals (streaming tracker).
  virtual std::vector<double> frame_residual(long frame, const std::vector<double>& lambda) const = 0;
  virtual FrameDecision decide(long frame, const std::vector<double>& lambda) const = 0;

  // Pre-tracking infeasibility: the maximum achievable effective capacity
  // cannot carry the load. Fills per-user max effective capacities.
  virtual bool infeasible(std::vector<double>* /*max_effective_capacity*/) const { return false; }

  // Multi-user priority order solved from this engine's frames (null for
  // single-user and semi-random schemes).
  virtual const PriorityOrder* priority() const { return nullptr; }

  // fixed-l only: smallest feasible cardinality on this engine's frames
  // (-1 when none), and the setter used on evaluation engines.
  virtual int fixed_cardinality() const { return -1; }
  virtual void set_fixed_cardinality(int) {}
};

std::unique_ptr<SchemeEngine> build_engine(const ScenarioConfig& config, Scheme scheme,
                                           long frame_begin, long frame_count,
                                           const PriorityOrder* inherited_priority = nullptr);

}  // namespace dmimo

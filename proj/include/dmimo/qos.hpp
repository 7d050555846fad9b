#pragma once

#include <span>
#include <vector>

namespace dmimo {

// Statistical delay constraint: the queueing delay may exceed `delay_bound`
// frames with probability at most `violation_prob`. All rates in nats/frame.
struct QoSSpec {
  double arrival_rate = 0;    // constant arrivals, nats/frame
  double delay_bound = 1;     // frames
  double violation_prob = 0;  // in (0, 1)
  double exponent = 0;        // QoS exponent theta, per nat

  static QoSSpec make(double arrival_rate, double delay_bound_frames, double violation_prob);
};

// theta = -log(xi) / (arrival * delay_bound).
double qos_exponent(double arrival_rate, double delay_bound, double violation_prob);

// Sample-average effective capacity -(1/theta) log(mean exp(-theta R)).
double effective_capacity(std::span<const double> rates, double theta);

// mean exp(-theta R) - exp(-theta arrival); <= 0 iff the effective capacity
// of the samples supports the arrival rate.
double constraint_residual(std::span<const double> rates, double theta, double arrival_rate);

// Lindley queue with constant arrivals plus virtual delays. delay[k] is the
// smallest d >= 0 with cumulative service over (k, k+d] covering queue[k];
// +inf when the trace ends first.
struct QueueTrace {
  std::vector<double> queue;
  std::vector<double> delay;
};
QueueTrace queue_trace(double arrival_rate, std::span<const double> service);

struct QueueStats {
  double violation_prob = 0;  // empirical Pr{D > delay_bound}
  double tail_slope = 0;      // -d log Pr{Q > q} / dq over the upper tail
  bool stable = true;         // mean service >= arrival
  double mean_service = 0;
  double mean_queue = 0;
  long frames = 0;
  long evaluated = 0;         // frames with a determinable violation indicator
};

// FIFO fluid queue fed by constant `arrival_rate`, drained by `service`.
// Traces shorter than ~1e5 frames give unreliable tail estimates.
QueueStats simulate_queue(double arrival_rate, std::span<const double> service,
                          double delay_bound_frames);

}  // namespace dmimo

#include "dmimo/qos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dmimo {

namespace {

// Fixed-order pairwise sum; parallelism-invariant and accurate.
double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * double(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - double(lo);
  return sorted[lo] * (1 - frac) + sorted[hi] * frac;
}

}  // namespace

double qos_exponent(double arrival_rate, double delay_bound, double violation_prob) {
  if (!(violation_prob > 0) || !(violation_prob < 1))
    throw std::invalid_argument("qos_exponent: violation probability must be in (0, 1)");
  if (!(arrival_rate * delay_bound > 0))
    throw std::invalid_argument("qos_exponent: arrival * delay bound must be positive");
  return -std::log(violation_prob) / (arrival_rate * delay_bound);
}

QoSSpec QoSSpec::make(double arrival_rate, double delay_bound_frames, double violation_prob) {
  QoSSpec q;
  q.arrival_rate = arrival_rate;
  q.delay_bound = delay_bound_frames;
  q.violation_prob = violation_prob;
  q.exponent = qos_exponent(arrival_rate, delay_bound_frames, violation_prob);
  return q;
}

double effective_capacity(std::span<const double> rates, double theta) {
  if (rates.empty()) throw std::invalid_argument("effective_capacity: no samples");
  if (!(theta > 0)) throw std::invalid_argument("effective_capacity: theta must be positive");
  // log-mean-exp with a shift so huge theta*R products cannot underflow to
  // a -inf result.
  double shift = std::numeric_limits<double>::infinity();
  for (double r : rates) shift = std::min(shift, theta * r);
  std::vector<double> terms(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) terms[i] = std::exp(shift - theta * rates[i]);
  const double mean = pairwise_sum(terms) / double(terms.size());
  return (shift - std::log(mean)) / theta;
}

double constraint_residual(std::span<const double> rates, double theta, double arrival_rate) {
  if (!(theta > 0)) throw std::invalid_argument("constraint_residual: theta must be positive");
  std::vector<double> terms(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) terms[i] = std::exp(-theta * rates[i]);
  const double mean = rates.empty() ? 1.0 : pairwise_sum(terms) / double(terms.size());
  return mean - std::exp(-theta * arrival_rate);
}

QueueTrace queue_trace(double arrival_rate, std::span<const double> service) {
  const std::size_t n = service.size();
  QueueTrace t;
  t.queue.resize(n);
  t.delay.resize(n);
  std::vector<double> cum(n + 1, 0.0);
  double q = 0;
  for (std::size_t k = 0; k < n; ++k) {
    q = std::max(q + arrival_rate - service[k], 0.0);
    t.queue[k] = q;
    cum[k + 1] = cum[k] + service[k];
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (t.queue[k] <= 0) {
      t.delay[k] = 0;
      continue;
    }
    // Smallest d >= 1 with cum[k+1+d] - cum[k+1] >= queue[k].
    const double target = cum[k + 1] + t.queue[k];
    const auto it = std::lower_bound(cum.begin() + long(k) + 2, cum.end(), target - 1e-12);
    if (it == cum.end())
      t.delay[k] = std::numeric_limits<double>::infinity();
    else
      t.delay[k] = double(it - (cum.begin() + long(k) + 1));
  }
  return t;
}

QueueStats simulate_queue(double arrival_rate, std::span<const double> service,
                          double delay_bound_frames) {
  if (!(arrival_rate >= 0)) throw std::invalid_argument("simulate_queue: bad arrival rate");
  if (!(delay_bound_frames >= 1)) throw std::invalid_argument("simulate_queue: delay bound < 1 frame");
  const std::size_t n = service.size();
  QueueStats st;
  st.frames = long(n);
  if (n == 0) return st;

  st.mean_service = pairwise_sum(service) / double(n);
  st.stable = st.mean_service >= arrival_rate;

  const long dth = std::lround(delay_bound_frames);
  std::vector<double> queue(n);
  std::vector<double> cum(n + 1, 0.0);
  double q = 0;
  for (std::size_t k = 0; k < n; ++k) {
    q = std::max(q + arrival_rate - service[k], 0.0);
    queue[k] = q;
    cum[k + 1] = cum[k] + service[k];
  }
  st.mean_queue = pairwise_sum(queue) / double(n);

  // Violation indicator needs only a delay-bound lookahead: D[k] > dth iff the
  // next dth frames of service cannot drain queue[k].
  long violations = 0, evaluated = 0;
  if (long(n) > dth) {
    for (std::size_t k = 0; k + std::size_t(dth) < n; ++k) {
      ++evaluated;
      if (cum[k + std::size_t(dth) + 1] - cum[k + 1] < queue[k] - 1e-12) ++violations;
    }
  }
  st.evaluated = evaluated;
  st.violation_prob = evaluated > 0 ? double(violations) / double(evaluated) : 0.0;

  // Tail slope: least-squares fit of log Pr{Q > q} over the upper quantile
  // band of the observed queue lengths.
  std::vector<double> sorted = queue;
  std::sort(sorted.begin(), sorted.end());
  double q_lo = quantile_sorted(sorted, 0.90);
  const double q_hi = quantile_sorted(sorted, 0.999);
  const auto first_pos = std::upper_bound(sorted.begin(), sorted.end(), 0.0);
  if (first_pos != sorted.end()) q_lo = std::max(q_lo, *first_pos);
  if (q_hi > q_lo) {
    constexpr int kPoints = 25;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (int i = 0; i < kPoints; ++i) {
      const double thr = q_lo + (q_hi - q_lo) * double(i) / double(kPoints - 1);
      const auto it = std::upper_bound(sorted.begin(), sorted.end(), thr);
      const double ccdf = double(sorted.end() - it) / double(n);
      if (ccdf <= 0) break;
      const double y = std::log(ccdf);
      sx += thr;
      sy += y;
      sxx += thr * thr;
      sxy += thr * y;
      ++used;
    }
    if (used >= 2) {
      const double denom = double(used) * sxx - sx * sx;
      if (denom > 0) st.tail_slope = -(double(used) * sxy - sx * sy) / denom;
    }
  }
  return st;
}

}  // namespace dmimo

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dmimo/channel.hpp"

namespace dmimo {

// Zero-forcing block diagonalization: each user's precoder spans the null
// space of every other user's channel, turning the broadcast link into
// parallel MIMO channels. Users whose null space is empty are skipped.
struct BdUser {
  bool skipped = true;
  ComplexMatrix precoder;      // columns orthonormal; empty when skipped
  ComplexMatrix effective;     // H * precoder
  std::vector<double> gains;   // squared singular values of `effective`, descending
};

std::vector<BdUser> bd_precoders(std::span<const ComplexMatrix> user_channels);

// Users sorted by decreasing effective-capacity fraction (arrival rate over
// the all-BS single-user effective capacity); ties keep the lower index.
struct PriorityOrder {
  std::vector<double> max_effective_capacity;  // per user
  std::vector<double> fraction;                // arrival / max effective capacity
  std::vector<int> order;                      // user indices, highest priority first
};

PriorityOrder priority_order(std::span<const double> max_effective_capacity,
                             std::span<const double> arrival_rates);

// Round-robin greedy pick over the priority order; each turn takes the
// unselected BS with the largest aggregate gain for the current user. The
// full-length result is a prefix chain: the first L entries form Omega_L.
std::vector<int> priority_selection_order(const std::vector<std::vector<double>>& gains,
                                          std::span<const int> priority);
std::vector<int> priority_select(const std::vector<std::vector<double>>& gains,
                                 std::span<const int> priority, int cardinality);

// Cached per-user subchannel tables for the power-allocation solves.
struct BdUserGains {
  bool skipped = true;
  std::vector<double> gains;       // eps, descending
  std::vector<double> inv_prefix;  // sum_{j<=i} 1/eps_j
  std::vector<double> log_prefix;  // sum_{j<=i} log eps_j

  static BdUserGains from(std::span<const double> eps);
};

struct BdUserAlloc {
  double power = 0;
  double water_level = 0;
  double rate = 0;  // nats/frame
  int active = 0;   // i*
};

// Per-user allocation at inner multiplier zeta: water level from the
// closed-form stationarity of zeta*P + lambda*exp(-theta R), powered
// subchannel count from the unique consistent bracket.
BdUserAlloc bd_power_alloc_user(const BdUserGains& user, double theta, double lambda,
                                double zeta, double bt);
std::vector<BdUserAlloc> bd_power_alloc(std::span<const BdUserGains> users,
                                        std::span<const double> theta,
                                        std::span<const double> lambda, double zeta, double bt);

// Bisection on zeta until the per-user powers sum to total_power (relative
// 1e-9, 200-iteration cap). Returns 0 when no user can transmit. `hint`
// warm-starts the bracket.
double solve_zeta(std::span<const BdUserGains> users, std::span<const double> theta,
                  std::span<const double> lambda, double total_power, double bt,
                  double hint = 0);

// TDMA slot shares: t_n = [log(lambda_n theta_n R_n / delta) / (theta_n R_n)]^+.
std::vector<double> tdma_time_alloc(std::span<const double> rates, std::span<const double> theta,
                                    std::span<const double> lambda, double delta);

// Bisection on delta until the shares sum to one (|sum - 1| <= 1e-9).
// Returns 0 when no user has lambda*theta*rate > 0.
double solve_delta(std::span<const double> rates, std::span<const double> theta,
                   std::span<const double> lambda);

// Uniform random L-subset of {0..num_bs-1}, deterministic in (seed, frame, L).
// Indices returned sorted.
std::vector<int> semi_random_select(int num_bs, int cardinality, std::uint64_t seed, long frame);

}  // namespace dmimo

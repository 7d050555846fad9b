#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dmimo/linalg.hpp"

namespace dmimo {

struct Vec2 {
  double x = 0, y = 0;
};

double distance(const Vec2& a, const Vec2& b);

// Base-station / user geometry and antenna counts.
struct Deployment {
  std::vector<Vec2> bs_positions;
  std::vector<int> bs_antennas;
  std::vector<Vec2> user_positions;
  std::vector<int> user_antennas;

  int num_bs() const { return static_cast<int>(bs_positions.size()); }
  int num_users() const { return static_cast<int>(user_positions.size()); }
  int total_bs_antennas() const;
  void validate() const;
};

// Two-branch average power-degradation model: free space up to the reference
// distance, (d_ref/d)^eta beyond it.
struct PathLossModel {
  double ref_distance = 1.0;  // meters
  double exponent = 3.0;      // eta, in [2, 6]
  double gain = 125000.0;     // aggregate gain G

  // Solves G so the mean gain is 1 (0 dB) at unity_gain_distance.
  static PathLossModel calibrated(double ref_distance, double exponent,
                                  double unity_gain_distance);
};

// Mean channel power gain at distance d (> 0), linear scale.
double mean_gain(const PathLossModel& model, double d);

// One frame's channel realization: per-(user, BS) blocks of i.i.d. circularly
// symmetric complex Gaussians with variance mean_gain(distance).
struct FadingState {
  long frame = 0;
  int num_users = 0, num_bs = 0;
  std::vector<ComplexMatrix> blocks;  // user-major

  const ComplexMatrix& block(int user, int bs) const { return blocks[user * num_bs + bs]; }
};

FadingState draw_fading_state(const Deployment& dep, const PathLossModel& model,
                              std::uint64_t seed, long frame);

// Per-BS aggregate power gain: antenna-count-normalized squared Frobenius mass.
double aggregate_gain(const ComplexMatrix& block);

// H for one user over a BS subset: horizontally concatenated blocks in subset order.
ComplexMatrix stacked_channel(const FadingState& state, int user, std::span<const int> subset);

// [user][bs] aggregate gains for one fading state.
std::vector<std::vector<double>> gain_table(const FadingState& state);

// Built-in geometries: "single-user-5bs" and "multi-user-6bs".
Deployment builtin_deployment(const std::string& name, int bs_antennas, int user_antennas);
std::vector<std::string> builtin_deployment_names();

}  // namespace dmimo

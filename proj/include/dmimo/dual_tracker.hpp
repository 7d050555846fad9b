#pragma once

#include <functional>
#include <vector>

namespace dmimo {

// Outer-loop solver for the Lagrange multipliers: a small-step gradient
// update on the (concave) dual, either per-frame with an autoregressive
// residual filter (streaming) or against a sample-average residual over a
// frozen frame set (batch).
struct TrackerConfig {
  double step = 0.01;            // epsilon, much smaller than 1
  double filter = 0.99;          // vartheta, close to 1 (streaming)
  long budget = 100000;          // iteration / frame-step budget
  long warmup = 1000;            // streaming: filter settles before updates
  double tolerance = 1e-4;       // residual convergence tolerance
  double lambda_init = 1.0;
  double lambda_ceiling = 1e9;   // above this with positive residual: infeasible
  enum class Mode { batch, streaming } mode = Mode::batch;
  bool sweep_warm_start = true;  // sweeps reuse the previous point's multipliers
};

struct TrackReport {
  std::vector<double> lambda;          // batch: final; streaming: time average
  std::vector<double> lambda_final;    // streaming only
  std::vector<double> residual;        // at the reported multipliers
  long iterations = 0;
  bool converged = false;
  bool infeasible = false;
  double oscillation = 0;              // max |lambda - mean| over the tail window
};

// residual_fn(lambda) -> per-constraint sample-average residuals, each
// non-increasing in its own multiplier. `initial` overrides lambda_init.
TrackReport track_batch(
    const std::function<std::vector<double>(const std::vector<double>&)>& residual_fn,
    int constraints, const TrackerConfig& config,
    const std::vector<double>* initial = nullptr);

// frame_fn(lambda, k) -> per-constraint instantaneous residuals at frame k;
// k cycles over [0, frames).
TrackReport track_streaming(
    const std::function<std::vector<double>(const std::vector<double>&, long)>& frame_fn,
    long frames, int constraints, const TrackerConfig& config,
    const std::vector<double>* initial = nullptr);

}  // namespace dmimo

#include "dmimo/dual_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace dmimo {

namespace {

void validate(const TrackerConfig& c) {
  if (!(c.step > 0) || !(c.step < 1)) throw std::invalid_argument("tracker: step must be in (0, 1)");
  if (!(c.filter > 0) || !(c.filter < 1))
    throw std::invalid_argument("tracker: filter factor must be in (0, 1)");
  if (c.budget < 1) throw std::invalid_argument("tracker: empty iteration budget");
  if (!(c.lambda_init >= 0)) throw std::invalid_argument("tracker: negative lambda init");
}

// Converged when every constraint is either met with equality or inactive at
// the boundary (lambda == 0 with negative residual).
bool settled(const std::vector<double>& lambda, const std::vector<double>& g, double tol) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::abs(g[i]) <= tol) continue;
    if (lambda[i] == 0.0 && g[i] < 0) continue;
    return false;
  }
  return true;
}

}  // namespace

TrackReport track_batch(
    const std::function<std::vector<double>(const std::vector<double>&)>& residual_fn,
    int constraints, const TrackerConfig& config, const std::vector<double>* initial) {
  validate(config);
  TrackReport rep;
  std::vector<double> lambda(constraints, config.lambda_init);
  if (initial != nullptr && static_cast<int>(initial->size()) == constraints) {
    lambda = *initial;
    for (double& v : lambda) v = std::clamp(v, 0.0, config.lambda_ceiling);
  }
  std::vector<double> g;
  std::deque<std::vector<double>> tail;
  const long tail_window = std::max<long>(16, config.budget / 20);
  for (long iter = 0; iter < config.budget; ++iter) {
    g = residual_fn(lambda);
    if (static_cast<int>(g.size()) != constraints)
      throw std::invalid_argument("tracker: residual size mismatch");
    rep.iterations = iter + 1;
    if (settled(lambda, g, config.tolerance)) {
      rep.converged = true;
      break;
    }
    bool at_ceiling_positive = false;
    for (int i = 0; i < constraints; ++i) {
      lambda[i] = std::max(lambda[i] + config.step * g[i], 0.0);
      if (lambda[i] >= config.lambda_ceiling && g[i] > config.tolerance)
        at_ceiling_positive = true;
      lambda[i] = std::min(lambda[i], config.lambda_ceiling);
    }
    if (at_ceiling_positive) {
      rep.infeasible = true;
      break;
    }
    tail.push_back(lambda);
    if (static_cast<long>(tail.size()) > tail_window) tail.pop_front();
  }
  rep.lambda = lambda;
  rep.lambda_final = lambda;
  rep.residual = residual_fn(lambda);
  if (!tail.empty()) {
    for (int i = 0; i < constraints; ++i) {
      double mean = 0;
      for (const auto& l : tail) mean += l[i];
      mean /= double(tail.size());
      for (const auto& l : tail) rep.oscillation = std::max(rep.oscillation, std::abs(l[i] - mean));
    }
  }
  return rep;
}

TrackReport track_streaming(
    const std::function<std::vector<double>(const std::vector<double>&, long)>& frame_fn,
    long frames, int constraints, const TrackerConfig& config, const std::vector<double>* initial) {
  validate(config);
  if (frames < 1) throw std::invalid_argument("tracker: empty frame set");
  TrackReport rep;
  std::vector<double> lambda(constraints, config.lambda_init);
  if (initial != nullptr && static_cast<int>(initial->size()) == constraints) {
    lambda = *initial;
    for (double& v : lambda) v = std::clamp(v, 0.0, config.lambda_ceiling);
  }
  std::vector<double> filtered(constraints, 0.0);
  std::vector<double> avg(constraints, 0.0);
  long avg_count = 0;
  const long avg_start = config.budget / 2;
  bool infeasible = false;
  long step_index = 0;
  for (; step_index < config.budget; ++step_index) {
    const long frame = step_index % frames;
    const std::vector<double> g = frame_fn(lambda, frame);
    for (int i = 0; i < constraints; ++i)
      filtered[i] = config.filter * filtered[i] + (1.0 - config.filter) * g[i];
    if (step_index >= config.warmup) {
      for (int i = 0; i < constraints; ++i) {
        lambda[i] = std::max(lambda[i] + config.step * filtered[i], 0.0);
        if (lambda[i] >= config.lambda_ceiling && filtered[i] > config.tolerance) infeasible = true;
        lambda[i] = std::min(lambda[i], config.lambda_ceiling);
      }
      if (infeasible) break;
    }
    if (step_index >= avg_start) {
      for (int i = 0; i < constraints; ++i) avg[i] += lambda[i];
      ++avg_count;
    }
  }
  rep.iterations = step_index;
  rep.infeasible = infeasible;
  rep.lambda_final = lambda;
  if (avg_count > 0) {
    for (int i = 0; i < constraints; ++i) avg[i] /= double(avg_count);
    rep.lambda = avg;
  } else {
    rep.lambda = lambda;
  }
  for (int i = 0; i < constraints; ++i)
    rep.oscillation = std::max(rep.oscillation, std::abs(lambda[i] - rep.lambda[i]));
  rep.residual = filtered;
  rep.converged = !infeasible && settled(rep.lambda, filtered, 5.0 * config.tolerance);
  return rep;
}

}  // namespace dmimo

#include "dmimo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "dmimo/parallel.hpp"
#include "dmimo/qos.hpp"

namespace dmimo {

double transmit_power(const PowerPolicy& policy, int mode) {
  if (mode < 0) throw std::invalid_argument("transmit_power: negative mode");
  return policy.at(mode);
}

namespace {

double mean_fixed_order(const std::vector<double>& xs) {
  struct Rec {
    static double sum(const double* p, std::size_t n) {
      if (n <= 8) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += p[i];
        return s;
      }
      return sum(p, n / 2) + sum(p + n / 2, n - n / 2);
    }
  };
  if (xs.empty()) return 0;
  return Rec::sum(xs.data(), xs.size()) / double(xs.size());
}

// Diagonal of gamma * cov * gamma^H accumulated into per-BS buckets.
void accumulate_per_bs(const ComplexMatrix& cov, const std::optional<ComplexMatrix>& precoder,
                       std::span<const int> subset, const Deployment& dep, double weight,
                       std::vector<double>* out) {
  const std::size_t dim = precoder ? precoder->rows() : cov.rows();
  std::vector<double> diag(dim, 0.0);
  if (precoder) {
    // row i of (G cov G^H): sum_{a,b} G(i,a) cov(a,b) conj(G(i,b))
    const ComplexMatrix& g = *precoder;
    ComplexMatrix gc = g.multiply(cov);  // dim x d
    for (std::size_t i = 0; i < dim; ++i) {
      cxd s(0, 0);
      for (std::size_t b = 0; b < g.cols(); ++b) s += gc(i, b) * std::conj(g(i, b));
      diag[i] = s.real();
    }
  } else {
    for (std::size_t i = 0; i < dim; ++i) diag[i] = cov(i, i).real();
  }
  std::size_t col = 0;
  for (int m : subset) {
    for (int a = 0; a < dep.bs_antennas[m]; ++a) (*out)[m] += weight * diag[col + a];
    col += dep.bs_antennas[m];
  }
}

}  // namespace

std::vector<double> per_bs_radiated_power(const ScenarioConfig& config, const FadingState& state,
                                          const FrameDecision& decision) {
  std::vector<double> out(config.deployment.num_bs(), 0.0);
  for (const ModeUse& mu : decision.modes) {
    if (mu.mode == 0 || mu.weight <= 0) continue;
    const double pl = config.power.at(mu.mode);
    switch (mu.kind) {
      case ModeUse::Kind::single_user: {
        const ComplexMatrix h = stacked_channel(state, 0, mu.subset);
        const ComplexMatrix cov = capacity_covariance(h, pl);
        accumulate_per_bs(cov, std::nullopt, mu.subset, config.deployment, mu.weight, &out);
        break;
      }
      case ModeUse::Kind::bd: {
        std::vector<ComplexMatrix> channels(config.deployment.num_users());
        for (int u = 0; u < config.deployment.num_users(); ++u)
          channels[u] = stacked_channel(state, u, mu.subset);
        const auto bd = bd_precoders(channels);
        for (int u = 0; u < config.deployment.num_users(); ++u) {
          if (bd[u].skipped || mu.user_power[u] <= 0) continue;
          const ComplexMatrix cov = capacity_covariance(bd[u].effective, mu.user_power[u]);
          accumulate_per_bs(cov, bd[u].precoder, mu.subset, config.deployment, mu.weight, &out);
        }
        break;
      }
      case ModeUse::Kind::tdma: {
        for (int u = 0; u < config.deployment.num_users(); ++u) {
          if (mu.time_share[u] <= 0) continue;
          const ComplexMatrix h = stacked_channel(state, u, mu.subset);
          const ComplexMatrix cov = capacity_covariance(h, pl);
          accumulate_per_bs(cov, std::nullopt, mu.subset, config.deployment,
                            mu.weight * mu.time_share[u], &out);
        }
        break;
      }
    }
  }
  return out;
}

namespace {

struct GridBox {
  double x0 = 0, y0 = 0;
  long nx = 0, ny = 0;
  double h = 0;
};

GridBox bounding_box(std::span<const Vec2> bs, const PathLossModel& model, double threshold,
                     double resolution, double total_power) {
  double xmin = bs[0].x, xmax = bs[0].x, ymin = bs[0].y, ymax = bs[0].y;
  for (const Vec2& p : bs) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  // Margin where even the whole budget at one BS is 100x below threshold.
  double margin = model.ref_distance;
  if (total_power > 0) {
    const double ratio = 100.0 * total_power * model.gain / threshold;
    margin = std::max(model.ref_distance * std::pow(ratio, 1.0 / model.exponent),
                      std::sqrt(std::max(ratio, 1.0)) * 1e-9);
    margin = std::max(margin, model.ref_distance);
  }
  GridBox box;
  box.h = resolution;
  box.x0 = xmin - margin;
  box.y0 = ymin - margin;
  box.nx = static_cast<long>(std::ceil((xmax - xmin + 2 * margin) / resolution));
  box.ny = static_cast<long>(std::ceil((ymax - ymin + 2 * margin) / resolution));
  return box;
}

}  // namespace

double interfering_area(std::span<const Vec2> bs_positions, std::span<const double> bs_powers,
                        const PathLossModel& model, double threshold, double grid_resolution) {
  if (!(grid_resolution > 0)) throw std::invalid_argument("interfering_area: bad grid resolution");
  if (bs_positions.size() != bs_powers.size())
    throw std::invalid_argument("interfering_area: size mismatch");
  double total = 0;
  for (double p : bs_powers) total += std::max(p, 0.0);
  if (bs_positions.empty() || total <= 0) return 0.0;

  const GridBox box = bounding_box(bs_positions, model, threshold, grid_resolution, total);
  long count = 0;
  for (long iy = 0; iy < box.ny; ++iy) {
    const double y = box.y0 + (double(iy) + 0.5) * box.h;
    for (long ix = 0; ix < box.nx; ++ix) {
      const double x = box.x0 + (double(ix) + 0.5) * box.h;
      double received = 0;
      for (std::size_t m = 0; m < bs_positions.size(); ++m) {
        if (bs_powers[m] <= 0) continue;
        const double d = std::max(std::hypot(x - bs_positions[m].x, y - bs_positions[m].y), 1e-6);
        received += bs_powers[m] * mean_gain(model, d);
        if (received > threshold) break;
      }
      if (received > threshold) ++count;
    }
  }
  return double(count) * box.h * box.h;
}

InterferenceField::InterferenceField(std::span<const Vec2> bs_positions,
                                     const PathLossModel& model, double threshold,
                                     double grid_resolution, double max_total_power)
    : num_bs_(static_cast<int>(bs_positions.size())),
      cell_area_(grid_resolution * grid_resolution),
      threshold_(threshold) {
  if (!(grid_resolution > 0) || !(threshold > 0) || bs_positions.empty())
    throw std::invalid_argument("InterferenceField: bad parameters");
  const GridBox box =
      bounding_box(bs_positions, model, threshold, grid_resolution, max_total_power);
  // Keep only cells that any admissible power profile could possibly light:
  // sum_m p_m g_m <= max_total_power * max_m g_m.
  for (long iy = 0; iy < box.ny; ++iy) {
    const double y = box.y0 + (double(iy) + 0.5) * box.h;
    for (long ix = 0; ix < box.nx; ++ix) {
      const double x = box.x0 + (double(ix) + 0.5) * box.h;
      double gmax = 0;
      std::vector<double> g(num_bs_);
      for (int m = 0; m < num_bs_; ++m) {
        const double d = std::max(std::hypot(x - bs_positions[m].x, y - bs_positions[m].y), 1e-6);
        g[m] = mean_gain(model, d);
        gmax = std::max(gmax, g[m]);
      }
      if (max_total_power * gmax > threshold)
        gains_.insert(gains_.end(), g.begin(), g.end());
    }
  }
}

double InterferenceField::area(std::span<const double> bs_powers) const {
  if (static_cast<int>(bs_powers.size()) != num_bs_)
    throw std::invalid_argument("InterferenceField::area: size mismatch");
  long count = 0;
  const double* g = gains_.data();
  const std::size_t cells = gains_.size() / std::size_t(num_bs_);
  for (std::size_t c = 0; c < cells; ++c, g += num_bs_) {
    double received = 0;
    for (int m = 0; m < num_bs_; ++m) received += bs_powers[m] * g[m];
    if (received > threshold_) ++count;
  }
  return double(count) * cell_area_;
}

RunResult run_experiment(const ScenarioConfig& config) { return run_experiment(config, nullptr); }

RunResult run_experiment(const ScenarioConfig& config,
                         const std::vector<double>* lambda_warm_start) {
  config.validate();
  const Scheme scheme = scheme_from_name(config.scheme);
  const int users = config.deployment.num_users();

  RunResult result;
  result.scheme = config.scheme;
  result.frames_total = config.train_frames + config.eval_frames;
  result.seed = config.seed;

  auto train = build_engine(config, scheme, 0, config.train_frames);
  result.infeasible = train->infeasible(&result.max_effective_capacity);

  std::vector<double> lambda;
  if (scheme == Scheme::fixed_l) {
    result.fixed_cardinality = train->fixed_cardinality();
    if (result.fixed_cardinality < 0) result.infeasible = true;
    result.converged = !result.infeasible;
  } else if (!result.infeasible) {
    if (config.tracker.mode == TrackerConfig::Mode::batch) {
      result.tracking = track_batch(
          [&](const std::vector<double>& l) { return train->residual(l); },
          train->constraints(), config.tracker, lambda_warm_start);
    } else {
      result.tracking = track_streaming(
          [&](const std::vector<double>& l, long k) { return train->frame_residual(k, l); },
          train->frames(), train->constraints(), config.tracker, lambda_warm_start);
    }
    lambda = result.tracking.lambda;
    result.infeasible = result.tracking.infeasible;
    result.converged = result.tracking.converged;
  }

  if (result.infeasible) return result;

  auto eval = build_engine(config, scheme, config.train_frames, config.eval_frames,
                           train->priority());
  if (scheme == Scheme::fixed_l) eval->set_fixed_cardinality(result.fixed_cardinality);

  const long n = config.eval_frames;
  std::vector<double> usage(n), area(n);
  std::vector<std::vector<double>> exp_terms(users, std::vector<double>(n));
  const double max_total_power = config.power.at(config.deployment.num_bs());
  const InterferenceField field(config.deployment.bs_positions, config.pathloss,
                                config.interference.threshold,
                                config.interference.grid_resolution_m, max_total_power);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    const FrameDecision d = eval->decide(long(i), lambda);
    usage[i] = d.usage;
    for (int u = 0; u < users; ++u) exp_terms[u][i] = d.exp_term[u];
    const FadingState state = draw_fading_state(config.deployment, config.pathloss, config.seed,
                                                config.train_frames + long(i));
    const std::vector<double> powers = per_bs_radiated_power(config, state, d);
    area[i] = field.area(powers);
  });

  result.avg_usage = mean_fixed_order(usage);
  result.avg_area = mean_fixed_order(area);
  result.residual.resize(users);
  result.effcap.resize(users);
  for (int u = 0; u < users; ++u) {
    const QoSSpec q = config.qos(u);
    const double mean_term = mean_fixed_order(exp_terms[u]);
    result.residual[u] = mean_term - std::exp(-q.exponent * q.arrival_rate);
    result.effcap[u] = -std::log(mean_term) / q.exponent;
  }
  return result;
}

SweepResult sweep(const ScenarioConfig& config, const std::string& axis,
                  std::span<const double> values) {
  if (!is_valid_axis(axis)) throw std::invalid_argument("unknown sweep axis: " + axis);
  SweepResult out;
  out.axis = axis;
  std::vector<double> warm;
  for (double v : values) {
    ScenarioConfig point = config;
    apply_axis(point, axis, v);
    const bool use_warm = config.tracker.sweep_warm_start && !warm.empty();
    RunResult r = run_experiment(point, use_warm ? &warm : nullptr);
    if (!r.infeasible && !r.tracking.lambda.empty()) warm = r.tracking.lambda;
    out.rows.push_back({v, std::move(r)});
  }
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string csv_header(int users) {
  std::ostringstream out;
  out << "scheme,axis,axis_value,avg_bs_usage,avg_interfering_area_m2";
  for (int u = 1; u <= users; ++u) out << ",residual_user_" << u;
  for (int u = 1; u <= users; ++u) out << ",effcap_user_" << u;
  out << ",converged,frames,seed";
  return out.str();
}

std::string csv_row(const RunResult& r, const std::string& axis, double axis_value, int users) {
  std::ostringstream out;
  out << r.scheme << ',' << axis << ',' << format_double(axis_value) << ',';
  if (r.infeasible) {
    // avg_bs_usage, avg_interfering_area_m2, residuals, effcaps all empty
    for (int u = 0; u < 2 * users + 2; ++u) out << ',';
  } else {
    out << format_double(r.avg_usage) << ',' << format_double(r.avg_area);
    for (double v : r.residual) out << ',' << format_double(v);
    for (double v : r.effcap) out << ',' << format_double(v);
    out << ',';
  }
  out << (r.converged ? 1 : 0) << ',' << r.frames_total << ',' << r.seed;
  return out.str();
}

std::string run_csv(const ScenarioConfig& config, const RunResult& result) {
  const int users = config.deployment.num_users();
  std::ostringstream out;
  out << csv_header(users) << '\n' << csv_row(result, "none", 0.0, users) << '\n';
  return out.str();
}

std::string sweep_csv(const ScenarioConfig& config, const SweepResult& result) {
  const int users = config.deployment.num_users();
  std::ostringstream out;
  out << csv_header(users) << '\n';
  for (const SweepRow& row : result.rows)
    out << csv_row(row.result, result.axis, row.axis_value, users) << '\n';
  return out.str();
}

PolicyTraces policy_service_traces(const ScenarioConfig& config, long trace_frames) {
  PolicyTraces out;
  out.run = run_experiment(config);
  if (out.run.infeasible) return out;
  const Scheme scheme = scheme_from_name(config.scheme);
  const int users = config.deployment.num_users();
  out.service.assign(users, std::vector<double>(trace_frames));

  auto train = build_engine(config, scheme, 0, config.train_frames);
  const std::vector<double>& lambda = out.run.tracking.lambda;

  const long chunk = 100000;
  long start = config.train_frames + config.eval_frames;
  long done = 0;
  while (done < trace_frames) {
    const long len = std::min(chunk, trace_frames - done);
    auto engine = build_engine(config, scheme, start + done, len, train->priority());
    if (scheme == Scheme::fixed_l) engine->set_fixed_cardinality(out.run.fixed_cardinality);
    parallel_for(static_cast<std::size_t>(len), [&](std::size_t i) {
      const FrameDecision d = engine->decide(long(i), lambda);
      for (int u = 0; u < users; ++u) out.service[u][done + long(i)] = d.service_rate[u];
    });
    done += len;
  }
  return out;
}

}  // namespace dmimo

#include "dmimo/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "dmimo/rng.hpp"

namespace dmimo {

double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

int Deployment::total_bs_antennas() const {
  int s = 0;
  for (int m : bs_antennas) s += m;
  return s;
}

void Deployment::validate() const {
  if (bs_positions.empty() || user_positions.empty())
    throw std::invalid_argument("deployment: need at least one BS and one user");
  if (bs_positions.size() != bs_antennas.size() || user_positions.size() != user_antennas.size())
    throw std::invalid_argument("deployment: antenna list length mismatch");
  for (int m : bs_antennas)
    if (m < 1) throw std::invalid_argument("deployment: BS antenna count must be >= 1");
  for (int n : user_antennas)
    if (n < 1) throw std::invalid_argument("deployment: user antenna count must be >= 1");
  for (const Vec2& p : bs_positions)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("deployment: non-finite BS coordinate");
  for (const Vec2& p : user_positions)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("deployment: non-finite user coordinate");
}

PathLossModel PathLossModel::calibrated(double ref_distance, double exponent,
                                        double unity_gain_distance) {
  if (!(ref_distance > 0) || !(unity_gain_distance > 0))
    throw std::invalid_argument("path loss: distances must be positive");
  if (exponent < 2.0 || exponent > 6.0)
    throw std::invalid_argument("path loss: exponent outside [2, 6]");
  PathLossModel m;
  m.ref_distance = ref_distance;
  m.exponent = exponent;
  if (unity_gain_distance > ref_distance)
    m.gain = std::pow(unity_gain_distance / ref_distance, exponent);
  else
    m.gain = unity_gain_distance * unity_gain_distance;
  return m;
}

double mean_gain(const PathLossModel& model, double d) {
  if (!(d > 0)) throw std::invalid_argument("mean_gain: distance must be positive");
  if (d <= model.ref_distance) return model.gain / (d * d);
  return model.gain * std::pow(model.ref_distance / d, model.exponent);
}

FadingState draw_fading_state(const Deployment& dep, const PathLossModel& model,
                              std::uint64_t seed, long frame) {
  if (frame < 0) throw std::invalid_argument("draw_fading_state: negative frame index");
  dep.validate();
  FadingState state;
  state.frame = frame;
  state.num_users = dep.num_users();
  state.num_bs = dep.num_bs();
  state.blocks.resize(static_cast<std::size_t>(state.num_users) * state.num_bs);
  const auto frame32 = static_cast<std::uint32_t>(frame);
  for (int u = 0; u < state.num_users; ++u) {
    for (int m = 0; m < state.num_bs; ++m) {
      const double hbar = mean_gain(model, distance(dep.user_positions[u], dep.bs_positions[m]));
      const double scale = std::sqrt(hbar / 2.0);
      ComplexMatrix block(dep.user_antennas[u], dep.bs_antennas[m]);
      for (int i = 0; i < dep.user_antennas[u]; ++i) {
        for (int j = 0; j < dep.bs_antennas[m]; ++j) {
          const auto [re, im] = rng_gaussian_pair(
              seed, {frame32,
                     (std::uint32_t(u) << 16) | std::uint32_t(m),
                     (std::uint32_t(i) << 16) | std::uint32_t(j),
                     kStreamChannel});
          block(i, j) = cxd(scale * re, scale * im);
        }
      }
      state.blocks[u * state.num_bs + m] = std::move(block);
    }
  }
  return state;
}

double aggregate_gain(const ComplexMatrix& block) {
  if (block.empty()) return 0.0;
  double s = 0;
  for (const cxd& v : block.data()) s += std::norm(v);
  return s / double(block.cols());
}

ComplexMatrix stacked_channel(const FadingState& state, int user, std::span<const int> subset) {
  std::vector<ComplexMatrix> parts;
  parts.reserve(subset.size());
  for (int m : subset) parts.push_back(state.block(user, m));
  if (parts.empty()) return {};
  return ComplexMatrix::hcat(parts);
}

std::vector<std::vector<double>> gain_table(const FadingState& state) {
  std::vector<std::vector<double>> g(state.num_users, std::vector<double>(state.num_bs));
  for (int u = 0; u < state.num_users; ++u)
    for (int m = 0; m < state.num_bs; ++m) g[u][m] = aggregate_gain(state.block(u, m));
  return g;
}

Deployment builtin_deployment(const std::string& name, int bs_antennas, int user_antennas) {
  Deployment d;
  if (name == "single-user-5bs") {
    d.bs_positions = {{37.96, -21.56}, {-7.83, 13.33}, {25.50, -22.49}, {17.98, 25.00}, {-26.34, 11.62}};
    d.user_positions = {{4, -11}};
  } else if (name == "multi-user-6bs") {
    d.bs_positions = {{35.77, 22.69}, {13.06, -37.45}, {27.15, -26.33},
                      {-40.28, -0.14}, {-32.86, -28.65}, {-5.10, 29.98}};
    d.user_positions = {{-11, 0}, {3, 5}, {2, -12}};
  } else {
    throw std::invalid_argument("unknown deployment: " + name);
  }
  d.bs_antennas.assign(d.bs_positions.size(), bs_antennas);
  d.user_antennas.assign(d.user_positions.size(), user_antennas);
  d.validate();
  return d;
}

std::vector<std::string> builtin_deployment_names() {
  return {"single-user-5bs", "multi-user-6bs"};
}

}  // namespace dmimo

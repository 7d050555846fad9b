#include "dmimo/select_single.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dmimo {

namespace {

double subset_rate(const FadingState& state, int user, std::span<const int> subset,
                   const PowerPolicy& power, double bt) {
  if (subset.empty()) return 0.0;
  const ComplexMatrix h = stacked_channel(state, user, subset);
  return mimo_capacity(h, power.at(static_cast<int>(subset.size())), bt);
}

unsigned long long combinations(int n, int k) {
  if (k < 0 || k > n) return 0;
  unsigned long long c = 1;
  k = std::min(k, n - k);
  for (int i = 1; i <= k; ++i) c = c * (unsigned long long)(n - k + i) / i;
  return c;
}

}  // namespace

std::vector<SubsetSelection> incremental_chain(const FadingState& state, int user,
                                               const PowerPolicy& power, double bt) {
  const int kbs = state.num_bs;
  std::vector<SubsetSelection> chain(kbs + 1);
  std::vector<int> picked;
  std::vector<bool> used(kbs, false);
  for (int step = 1; step <= kbs; ++step) {
    int best = -1;
    double best_rate = -1;
    for (int m = 0; m < kbs; ++m) {
      if (used[m]) continue;
      picked.push_back(m);
      const double r = subset_rate(state, user, picked, power, bt);
      picked.pop_back();
      if (r > best_rate) {
        best_rate = r;
        best = m;
      }
    }
    picked.push_back(best);
    used[best] = true;
    chain[step].indices = picked;
    chain[step].rate = best_rate;
  }
  return chain;
}

SubsetSelection incremental_select(const FadingState& state, int user, int cardinality,
                                   const PowerPolicy& power, double bt) {
  if (cardinality < 0 || cardinality > state.num_bs)
    throw std::invalid_argument("incremental_select: cardinality out of range");
  if (cardinality == 0) return {};
  return incremental_chain(state, user, power, bt)[cardinality];
}

std::vector<int> ordered_gain_indices(std::span<const double> gains, int cardinality) {
  const int kbs = static_cast<int>(gains.size());
  if (cardinality < 0 || cardinality > kbs)
    throw std::invalid_argument("ordered_gain_indices: cardinality out of range");
  std::vector<int> order(kbs);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return gains[a] > gains[b]; });
  order.resize(cardinality);
  return order;
}

SubsetSelection ordered_gain_select(const FadingState& state, int user,
                                    std::span<const double> gains, int cardinality,
                                    const PowerPolicy& power, double bt) {
  SubsetSelection out;
  out.indices = ordered_gain_indices(gains, cardinality);
  out.rate = subset_rate(state, user, out.indices, power, bt);
  return out;
}

SubsetSelection exhaustive_select(const FadingState& state, int user, int cardinality,
                                  const PowerPolicy& power, double bt) {
  const int kbs = state.num_bs;
  if (cardinality < 0 || cardinality > kbs)
    throw std::invalid_argument("exhaustive_select: cardinality out of range");
  if (combinations(kbs, cardinality) > 1000000ull)
    throw std::invalid_argument("exhaustive_select: enumeration guard exceeded");
  if (cardinality == 0) return {};
  std::vector<int> comb(cardinality);
  std::iota(comb.begin(), comb.end(), 0);
  SubsetSelection best;
  best.rate = -1;
  for (;;) {
    const double r = subset_rate(state, user, comb, power, bt);
    if (r > best.rate) {
      best.rate = r;
      best.indices = comb;
    }
    // next combination in lexicographic order
    int i = cardinality - 1;
    while (i >= 0 && comb[i] == kbs - cardinality + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < cardinality; ++j) comb[j] = comb[j - 1] + 1;
  }
  return best;
}

double RateEnvelope::rate_at(double u) const {
  if (u <= 0) return 0.0;
  for (std::size_t j = 1; j < usage.size(); ++j) {
    if (u <= double(usage[j]) + 1e-12)
      return rate[j - 1] + slope[j - 1] * (u - double(usage[j - 1]));
  }
  return rate.back();
}

RateEnvelope rate_envelope(std::span<const double> rates) {
  if (rates.size() < 2) throw std::invalid_argument("rate_envelope: need rates for L = 0..K");
  if (std::abs(rates[0]) > 1e-12) throw std::invalid_argument("rate_envelope: R(0) must be 0");
  for (double r : rates)
    if (!(r >= 0) || !std::isfinite(r))
      throw std::invalid_argument("rate_envelope: rates must be finite and non-negative");

  // Monotone-chain upper hull over (L, R_L); collinear middle points merge.
  std::vector<int> hull;
  for (int l = 0; l < static_cast<int>(rates.size()); ++l) {
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2], b = hull.back();
      // pop b when slope(a->l) >= slope(a->b), i.e. b is on or below chord a->l
      const double lhs = (rates[l] - rates[b]) * double(b - a);
      const double rhs = (rates[b] - rates[a]) * double(l - b);
      if (lhs >= rhs) hull.pop_back();
      else break;
    }
    hull.push_back(l);
  }
  RateEnvelope env;
  env.usage = hull;
  env.rate.reserve(hull.size());
  for (int m : hull) env.rate.push_back(rates[m]);
  env.slope.reserve(hull.size() - 1);
  for (std::size_t j = 1; j < hull.size(); ++j)
    env.slope.push_back((env.rate[j] - env.rate[j - 1]) / double(env.usage[j] - env.usage[j - 1]));
  return env;
}

std::vector<double> usage_to_alpha(const RateEnvelope& env, double usage, int num_bs) {
  if (usage < -1e-12 || usage > double(env.max_usage()) + 1e-12)
    throw std::invalid_argument("usage_to_alpha: usage out of range");
  std::vector<double> alpha(num_bs + 1, 0.0);
  usage = std::clamp(usage, 0.0, double(env.max_usage()));
  for (std::size_t j = 0; j < env.usage.size(); ++j) {
    if (std::abs(usage - double(env.usage[j])) <= 1e-12) {
      alpha[env.usage[j]] = 1.0;
      return alpha;
    }
  }
  for (std::size_t j = 1; j < env.usage.size(); ++j) {
    const double lo = env.usage[j - 1], hi = env.usage[j];
    if (usage > lo && usage < hi) {
      alpha[env.usage[j - 1]] = (hi - usage) / (hi - lo);
      alpha[env.usage[j]] = (usage - lo) / (hi - lo);
      return alpha;
    }
  }
  throw std::logic_error("usage_to_alpha: no segment found");
}

double theorem1_usage(const RateEnvelope& env, double theta, double lambda) {
  if (!(theta > 0)) throw std::invalid_argument("theorem1_usage: theta must be positive");
  if (lambda < 0) throw std::invalid_argument("theorem1_usage: lambda must be >= 0");
  if (lambda == 0) return 0.0;
  const int segs = env.segments();
  // x_j = exp(theta R~(m_j)) / (theta lambda) increases with j while the
  // slopes decrease; the first j with x_j >= nu_{j+1} hosts the optimum.
  for (int j = 0; j <= segs; ++j) {
    const double x = std::exp(theta * env.rate[j]) / (theta * lambda);
    const double nu_next = (j < segs) ? env.slope[j] : -std::numeric_limits<double>::infinity();
    if (x >= nu_next) {
      const double nu_here = (j > 0) ? env.slope[j - 1] : std::numeric_limits<double>::infinity();
      if (x <= nu_here) return double(env.usage[j]);  // vertex branch
      // Interior of segment j (j >= 1 because nu_0 = +inf): the stationary
      // point has exp(theta R~) = theta lambda nu_j.
      const double nu = env.slope[j - 1];
      const double r_star = std::log(theta * lambda * nu) / theta;
      return double(env.usage[j - 1]) + (r_star - env.rate[j - 1]) / nu;
    }
  }
  return double(env.max_usage());
}

}  // namespace dmimo

#include "dmimo/select_multi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dmimo/rng.hpp"

namespace dmimo {

std::vector<BdUser> bd_precoders(std::span<const ComplexMatrix> user_channels) {
  const std::size_t users = user_channels.size();
  if (users == 0) throw std::invalid_argument("bd_precoders: no users");
  for (const auto& h : user_channels)
    if (h.empty()) throw std::invalid_argument("bd_precoders: empty subset channel");
  const std::size_t cols = user_channels[0].cols();
  for (const auto& h : user_channels)
    if (h.cols() != cols) throw std::invalid_argument("bd_precoders: column mismatch");

  std::vector<BdUser> out(users);
  for (std::size_t n = 0; n < users; ++n) {
    ComplexMatrix basis;
    if (users == 1) {
      basis = ComplexMatrix::identity(cols);
    } else {
      std::vector<ComplexMatrix> others;
      others.reserve(users - 1);
      for (std::size_t i = 0; i < users; ++i)
        if (i != n) others.push_back(user_channels[i]);
      basis = null_space_basis(ComplexMatrix::vcat(others));
    }
    if (basis.empty()) continue;  // not enough spatial freedom: user skipped
    BdUser& u = out[n];
    u.precoder = std::move(basis);
    u.effective = user_channels[n].multiply(u.precoder);
    u.gains = squared_singular_values(u.effective);
    u.skipped = u.gains.empty();
  }
  return out;
}

PriorityOrder priority_order(std::span<const double> max_effective_capacity,
                             std::span<const double> arrival_rates) {
  if (max_effective_capacity.size() != arrival_rates.size())
    throw std::invalid_argument("priority_order: size mismatch");
  PriorityOrder po;
  po.max_effective_capacity.assign(max_effective_capacity.begin(), max_effective_capacity.end());
  po.fraction.resize(arrival_rates.size());
  for (std::size_t n = 0; n < arrival_rates.size(); ++n) {
    if (!(max_effective_capacity[n] > 0))
      throw std::invalid_argument("priority_order: max effective capacity must be positive");
    po.fraction[n] = arrival_rates[n] / max_effective_capacity[n];
  }
  po.order.resize(arrival_rates.size());
  std::iota(po.order.begin(), po.order.end(), 0);
  std::stable_sort(po.order.begin(), po.order.end(),
                   [&](int a, int b) { return po.fraction[a] > po.fraction[b]; });
  return po;
}

std::vector<int> priority_selection_order(const std::vector<std::vector<double>>& gains,
                                          std::span<const int> priority) {
  const int users = static_cast<int>(gains.size());
  if (users == 0) throw std::invalid_argument("priority_selection_order: no users");
  const int kbs = static_cast<int>(gains[0].size());
  std::vector<bool> used(kbs, false);
  std::vector<int> picked;
  picked.reserve(kbs);
  int turn = 0;
  while (static_cast<int>(picked.size()) < kbs) {
    const int user = priority[turn % users];
    int best = -1;
    double best_gain = -1;
    for (int m = 0; m < kbs; ++m) {
      if (used[m]) continue;
      if (gains[user][m] > best_gain) {
        best_gain = gains[user][m];
        best = m;
      }
    }
    used[best] = true;
    picked.push_back(best);
    ++turn;
  }
  return picked;
}

std::vector<int> priority_select(const std::vector<std::vector<double>>& gains,
                                 std::span<const int> priority, int cardinality) {
  const int kbs = gains.empty() ? 0 : static_cast<int>(gains[0].size());
  if (cardinality < 0 || cardinality > kbs)
    throw std::invalid_argument("priority_select: cardinality out of range");
  std::vector<int> full = priority_selection_order(gains, priority);
  full.resize(cardinality);
  return full;
}

BdUserGains BdUserGains::from(std::span<const double> eps) {
  BdUserGains g;
  if (eps.empty()) return g;
  g.skipped = false;
  g.gains.assign(eps.begin(), eps.end());
  g.inv_prefix.resize(eps.size());
  g.log_prefix.resize(eps.size());
  double inv = 0, lg = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0)) throw std::invalid_argument("BdUserGains: gains must be positive");
    if (i > 0 && eps[i] > eps[i - 1])
      throw std::invalid_argument("BdUserGains: gains must be sorted descending");
    inv += 1.0 / eps[i];
    lg += std::log(eps[i]);
    g.inv_prefix[i] = inv;
    g.log_prefix[i] = lg;
  }
  return g;
}

BdUserAlloc bd_power_alloc_user(const BdUserGains& user, double theta, double lambda,
                                double zeta, double bt) {
  BdUserAlloc a;
  if (user.skipped || lambda <= 0) return a;
  if (!(zeta > 0)) throw std::invalid_argument("bd_power_alloc_user: zeta must be positive");
  const int depth = static_cast<int>(user.gains.size());
  // log of zeta / (BT theta lambda); the water level for powered count i is
  // max(1/eps_1, (prod eps)^(-a_i) * (zeta/(BT theta lambda))^(-b_i)).
  const double log_arg = std::log(zeta) - std::log(bt * theta * lambda);
  const double log_floor = -std::log(user.gains[0]);
  for (int i = 1; i <= depth; ++i) {
    const double b = 1.0 / (1.0 + double(i) * bt * theta);
    double log_mu = -(bt * theta * b) * user.log_prefix[i - 1] - b * log_arg;
    if (log_mu < log_floor) log_mu = log_floor;
    const double lo = -std::log(user.gains[i - 1]);
    const double hi = (i < depth) ? -std::log(user.gains[i]) : std::numeric_limits<double>::infinity();
    if (log_mu >= lo - 1e-12 && log_mu < hi) {
      a.water_level = std::exp(log_mu);
      a.active = i;
      a.power = std::max(double(i) * a.water_level - user.inv_prefix[i - 1], 0.0);
      a.rate = bt * (user.log_prefix[i - 1] + double(i) * log_mu);
      return a;
    }
  }
  throw std::logic_error("bd_power_alloc_user: no consistent powered count");
}

std::vector<BdUserAlloc> bd_power_alloc(std::span<const BdUserGains> users,
                                        std::span<const double> theta,
                                        std::span<const double> lambda, double zeta, double bt) {
  std::vector<BdUserAlloc> out(users.size());
  for (std::size_t n = 0; n < users.size(); ++n)
    out[n] = bd_power_alloc_user(users[n], theta[n], lambda[n], zeta, bt);
  return out;
}

double solve_zeta(std::span<const BdUserGains> users, std::span<const double> theta,
                  std::span<const double> lambda, double total_power, double bt, double hint) {
  if (!(total_power > 0)) throw std::invalid_argument("solve_zeta: total power must be positive");
  // Hoist the per-user constants and bisect on log(zeta); the water level for
  // powered count i is linear in log(zeta) there, so each probe is a handful
  // of flops plus one exp per user.
  struct Active {
    const BdUserGains* gains;
    double bt_theta;
    double log_scale;                 // log(bt theta lambda)
    std::vector<double> neg_log_eps;  // -log(eps_i)
  };
  std::vector<Active> active;
  for (std::size_t n = 0; n < users.size(); ++n) {
    if (users[n].skipped || !(lambda[n] > 0)) continue;
    Active a;
    a.gains = &users[n];
    a.bt_theta = bt * theta[n];
    a.log_scale = std::log(bt * theta[n] * lambda[n]);
    a.neg_log_eps.reserve(users[n].gains.size());
    for (double e : users[n].gains) a.neg_log_eps.push_back(-std::log(e));
    active.push_back(std::move(a));
  }
  if (active.empty()) return 0.0;

  auto total = [&](double x) {
    double s = 0;
    for (const Active& a : active) {
      const BdUserGains& g = *a.gains;
      const int depth = static_cast<int>(g.gains.size());
      const double log_arg = x - a.log_scale;
      for (int i = 1; i <= depth; ++i) {
        const double b = 1.0 / (1.0 + double(i) * a.bt_theta);
        double log_mu = -(a.bt_theta * b) * g.log_prefix[i - 1] - b * log_arg;
        if (log_mu < a.neg_log_eps[0]) log_mu = a.neg_log_eps[0];
        const double lo_i = a.neg_log_eps[i - 1];
        const double hi_i =
            (i < depth) ? a.neg_log_eps[i] : std::numeric_limits<double>::infinity();
        if (log_mu >= lo_i - 1e-12 && log_mu < hi_i) {
          s += std::max(double(i) * std::exp(log_mu) - g.inv_prefix[i - 1], 0.0);
          break;
        }
      }
    }
    return s;
  };

  const double kStep = std::log(4.0);
  double xlo = hint > 0 ? std::log(hint) - kStep : 0.0;
  double xhi = hint > 0 ? std::log(hint) + kStep : 0.0;
  for (int i = 0; i < 400 && total(xlo) < total_power; ++i) xlo -= kStep;
  for (int i = 0; i < 400 && total(xhi) > total_power; ++i) xhi += kStep;

  double x = 0.5 * (xlo + xhi);
  for (int iter = 0; iter < 200; ++iter) {
    x = 0.5 * (xlo + xhi);
    const double s = total(x);
    if (std::abs(s - total_power) <= 1e-7 * total_power) break;
    if (s > total_power)
      xlo = x;
    else
      xhi = x;
    if (xhi - xlo < 1e-15) break;
  }
  return std::exp(x);
}

std::vector<double> tdma_time_alloc(std::span<const double> rates, std::span<const double> theta,
                                    std::span<const double> lambda, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("tdma_time_alloc: delta must be positive");
  std::vector<double> t(rates.size(), 0.0);
  for (std::size_t n = 0; n < rates.size(); ++n) {
    const double a = theta[n] * rates[n];
    if (!(a > 0) || !(lambda[n] > 0)) continue;
    const double v = std::log(lambda[n] * a / delta) / a;
    t[n] = std::max(v, 0.0);
  }
  return t;
}

double solve_delta(std::span<const double> rates, std::span<const double> theta,
                   std::span<const double> lambda) {
  // c_n = log(lambda_n theta_n R_n); share sum is piecewise linear and
  // decreasing in log delta.
  std::vector<double> c, a;
  for (std::size_t n = 0; n < rates.size(); ++n) {
    const double an = theta[n] * rates[n];
    if (an > 0 && lambda[n] > 0) {
      a.push_back(an);
      c.push_back(std::log(lambda[n]) + std::log(an));
    }
  }
  if (c.empty()) return 0.0;

  auto share_sum = [&](double x) {
    double s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += std::max(c[i] - x, 0.0) / a[i];
    return s;
  };

  double hi = *std::max_element(c.begin(), c.end());  // share sum 0 here
  double step = 1.0;
  double lo = hi - step;
  for (int i = 0; i < 200 && share_sum(lo) < 1.0; ++i) {
    step *= 2;
    lo = hi - step;
  }
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    x = 0.5 * (lo + hi);
    const double s = share_sum(x);
    if (std::abs(s - 1.0) <= 1e-12) break;
    if (s > 1.0)
      lo = x;
    else
      hi = x;
  }
  return std::exp(x);
}

std::vector<int> semi_random_select(int num_bs, int cardinality, std::uint64_t seed, long frame) {
  if (cardinality < 0 || cardinality > num_bs)
    throw std::invalid_argument("semi_random_select: cardinality out of range");
  std::vector<int> pool(num_bs);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < cardinality; ++i) {
    const std::uint64_t r = rng_u64(
        seed, {static_cast<std::uint32_t>(frame), static_cast<std::uint32_t>(cardinality),
               static_cast<std::uint32_t>(i), kStreamSubset});
    const int j = i + static_cast<int>(r % std::uint64_t(num_bs - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(cardinality);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace dmimo

#include "dmimo/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dmimo/parallel.hpp"
#include "dmimo/qos.hpp"

namespace dmimo {

Scheme scheme_from_name(const std::string& name) {
  if (name == "ibs-ts") return Scheme::ibs_ts;
  if (name == "optimal-ts") return Scheme::optimal_ts;
  if (name == "ogbs-pt") return Scheme::ogbs_pt;
  if (name == "fixed-l") return Scheme::fixed_l;
  if (name == "pbs-bd-pt") return Scheme::pbs_bd_pt;
  if (name == "pbs-tdma-pt") return Scheme::pbs_tdma_pt;
  if (name == "semirandom-bd-pt") return Scheme::semirandom_bd_pt;
  if (name == "semirandom-tdma-pt") return Scheme::semirandom_tdma_pt;
  throw std::invalid_argument("unknown scheme: " + name);
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::ibs_ts: return "ibs-ts";
    case Scheme::optimal_ts: return "optimal-ts";
    case Scheme::ogbs_pt: return "ogbs-pt";
    case Scheme::fixed_l: return "fixed-l";
    case Scheme::pbs_bd_pt: return "pbs-bd-pt";
    case Scheme::pbs_tdma_pt: return "pbs-tdma-pt";
    case Scheme::semirandom_bd_pt: return "semirandom-bd-pt";
    case Scheme::semirandom_tdma_pt: return "semirandom-tdma-pt";
  }
  return "?";
}

std::vector<std::string> scheme_names() {
  return {"ibs-ts", "optimal-ts", "ogbs-pt", "fixed-l",
          "pbs-bd-pt", "pbs-tdma-pt", "semirandom-bd-pt", "semirandom-tdma-pt"};
}

bool scheme_is_single_user(Scheme s) {
  switch (s) {
    case Scheme::ibs_ts:
    case Scheme::optimal_ts:
    case Scheme::ogbs_pt:
    case Scheme::fixed_l:
      return true;
    default:
      return false;
  }
}

namespace {

double mean_fixed_order(const std::vector<double>& xs) {
  // pairwise over a fixed-length array: parallelism invariant
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

// ---------------------------------------------------------------------------
// Single-user schemes
// ---------------------------------------------------------------------------

// Envelope plus the per-vertex exponentials the Lagrangian scan needs.
struct EnvTable {
  RateEnvelope env;
  std::vector<double> exp_pos;  // exp(theta * R~(m_j))
  std::vector<double> exp_neg;  // exp(-theta * R~(m_j))
};

struct Theorem1Point {
  double usage = 0;
  double service = 0;
  double exp_term = 1;
  int vertex_lo = 0, vertex_hi = 0;  // transmitting hull vertices
  double weight_hi = 0;              // alpha on vertex_hi
};

// Same branch logic as theorem1_usage, off cached exponentials.
Theorem1Point theorem1_point(const EnvTable& t, double theta, double lambda) {
  Theorem1Point out;
  if (lambda <= 0) {
    out.exp_term = 1.0;
    return out;
  }
  const int segs = t.env.segments();
  const double scale = 1.0 / (theta * lambda);
  for (int j = 0; j <= segs; ++j) {
    const double x = t.exp_pos[j] * scale;
    const double nu_next = (j < segs) ? t.env.slope[j] : -std::numeric_limits<double>::infinity();
    if (x >= nu_next) {
      const double nu_here = (j > 0) ? t.env.slope[j - 1] : std::numeric_limits<double>::infinity();
      if (x <= nu_here) {  // vertex
        out.usage = t.env.usage[j];
        out.service = t.env.rate[j];
        out.exp_term = t.exp_neg[j];
        out.vertex_lo = out.vertex_hi = t.env.usage[j];
        out.weight_hi = 1.0;
        return out;
      }
      const double nu = t.env.slope[j - 1];
      const double r_star = std::log(theta * lambda * nu) / theta;
      out.usage = double(t.env.usage[j - 1]) + (r_star - t.env.rate[j - 1]) / nu;
      out.service = r_star;
      out.exp_term = 1.0 / (theta * lambda * nu);
      out.vertex_lo = t.env.usage[j - 1];
      out.vertex_hi = t.env.usage[j];
      out.weight_hi = (out.usage - t.env.usage[j - 1]) / double(t.env.usage[j] - t.env.usage[j - 1]);
      return out;
    }
  }
  out.usage = t.env.max_usage();
  out.service = t.env.rate.back();
  out.exp_term = t.exp_neg.back();
  out.vertex_lo = out.vertex_hi = t.env.max_usage();
  out.weight_hi = 1.0;
  return out;
}

class SingleUserEngine : public SchemeEngine {
 public:
  SingleUserEngine(const ScenarioConfig& cfg, Scheme scheme, long begin, long count)
      : cfg_(cfg), scheme_(scheme), begin_(begin), count_(count) {
    if (cfg.deployment.num_users() != 1)
      throw std::invalid_argument(std::string(scheme_name(scheme)) +
                                  " requires a single-user scenario");
    const QoSSpec q = cfg.qos(0);
    theta_ = q.exponent;
    target_ = std::exp(-theta_ * q.arrival_rate);
    const int kbs = cfg.deployment.num_bs();
    const bool time_sharing = scheme == Scheme::ibs_ts || scheme == Scheme::optimal_ts;

    subset_by_mode_.resize(count);
    if (time_sharing) env_.resize(count);
    else {
      rates_.resize(count);
      qterms_.resize(count);
    }
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t i) {
      const FadingState state =
          draw_fading_state(cfg.deployment, cfg.pathloss, cfg.seed, begin + long(i));
      std::vector<double> rates(kbs + 1, 0.0);
      std::vector<std::vector<int>> subsets(kbs + 1);
      if (scheme == Scheme::ibs_ts) {
        const auto chain = incremental_chain(state, 0, cfg.power, cfg.bt());
        for (int l = 1; l <= kbs; ++l) {
          rates[l] = chain[l].rate;
          subsets[l] = chain[l].indices;
        }
      } else if (scheme == Scheme::optimal_ts) {
        for (int l = 1; l <= kbs; ++l) {
          const auto sel = exhaustive_select(state, 0, l, cfg.power, cfg.bt());
          rates[l] = sel.rate;
          subsets[l] = sel.indices;
        }
      } else {  // ordered-gain chain (ogbs-pt and the fixed-l baseline)
        const auto gains = gain_table(state)[0];
        const auto order = ordered_gain_indices(gains, kbs);
        std::vector<int> prefix;
        for (int l = 1; l <= kbs; ++l) {
          prefix.push_back(order[l - 1]);
          subsets[l] = prefix;
          rates[l] = mimo_capacity(stacked_channel(state, 0, prefix), cfg.power.at(l), cfg.bt());
        }
      }
      subset_by_mode_[i] = std::move(subsets);
      if (time_sharing) {
        EnvTable t;
        t.env = rate_envelope(rates);
        t.exp_pos.resize(t.env.usage.size());
        t.exp_neg.resize(t.env.usage.size());
        for (std::size_t j = 0; j < t.env.usage.size(); ++j) {
          t.exp_pos[j] = std::exp(theta_ * t.env.rate[j]);
          t.exp_neg[j] = std::exp(-theta_ * t.env.rate[j]);
        }
        env_[i] = std::move(t);
      } else {
        std::vector<double> q(kbs + 1);
        for (int l = 0; l <= kbs; ++l) q[l] = std::exp(-theta_ * rates[l]);
        rates_[i] = std::move(rates);
        qterms_[i] = std::move(q);
      }
    });

    if (scheme == Scheme::fixed_l) solve_fixed();
  }

  int constraints() const override { return 1; }
  long frames() const override { return count_; }

  std::vector<double> residual(const std::vector<double>& lambda) override {
    std::vector<double> terms(count_);
    const double l0 = lambda.empty() ? 0.0 : lambda[0];
    parallel_for(static_cast<std::size_t>(count_),
                 [&](std::size_t i) { terms[i] = exp_term_at(long(i), l0); });
    return {mean_fixed_order(terms) - target_};
  }

  std::vector<double> frame_residual(long frame, const std::vector<double>& lambda) const override {
    return {exp_term_at(frame, lambda.empty() ? 0.0 : lambda[0]) - target_};
  }

  FrameDecision decide(long frame, const std::vector<double>& lambda) const override {
    FrameDecision d;
    const double l0 = lambda.empty() ? 0.0 : lambda[0];
    if (scheme_ == Scheme::ibs_ts || scheme_ == Scheme::optimal_ts) {
      const Theorem1Point p = theorem1_point(env_[frame], theta_, l0);
      d.usage = p.usage;
      d.service_rate = {p.service};
      d.exp_term = {p.exp_term};
      auto add_mode = [&](int mode, double weight) {
        if (mode == 0 || weight <= 0) return;
        ModeUse mu;
        mu.kind = ModeUse::Kind::single_user;
        mu.mode = mode;
        mu.weight = weight;
        mu.subset = subset_by_mode_[frame][mode];
        mu.user_power = {cfg_.power.at(mode)};
        d.modes.push_back(std::move(mu));
      };
      if (p.vertex_lo == p.vertex_hi) {
        add_mode(p.vertex_lo, 1.0);
      } else {
        add_mode(p.vertex_lo, 1.0 - p.weight_hi);
        add_mode(p.vertex_hi, p.weight_hi);
      }
    } else {
      int mode;
      if (scheme_ == Scheme::fixed_l) {
        mode = fixed_cardinality_;
        if (mode < 0) throw std::logic_error("fixed-l: no feasible cardinality set");
      } else {
        mode = best_pt_mode(frame, l0);
      }
      d.usage = mode;
      d.service_rate = {rates_[frame][mode]};
      d.exp_term = {qterms_[frame][mode]};
      if (mode > 0) {
        ModeUse mu;
        mu.kind = ModeUse::Kind::single_user;
        mu.mode = mode;
        mu.subset = subset_by_mode_[frame][mode];
        mu.user_power = {cfg_.power.at(mode)};
        d.modes.push_back(std::move(mu));
      }
    }
    return d;
  }

  bool infeasible(std::vector<double>* cmax_out) const override {
    // Effective capacity with every frame at full usage.
    std::vector<double> terms(count_);
    for (long i = 0; i < count_; ++i)
      terms[i] = (scheme_ == Scheme::ibs_ts || scheme_ == Scheme::optimal_ts)
                     ? env_[i].exp_neg.back()
                     : qterms_[i].back();
    const double cmax = -std::log(mean_fixed_order(terms)) / theta_;
    if (cmax_out) *cmax_out = {cmax};
    return cmax < cfg_.arrival_rate(0);
  }

  int fixed_cardinality() const override { return fixed_cardinality_; }
  void set_fixed_cardinality(int l) override { fixed_cardinality_ = l; }

 private:
  double exp_term_at(long frame, double lambda) const {
    if (scheme_ == Scheme::ibs_ts || scheme_ == Scheme::optimal_ts)
      return theorem1_point(env_[frame], theta_, lambda).exp_term;
    if (scheme_ == Scheme::fixed_l) {
      if (fixed_cardinality_ < 0) throw std::logic_error("fixed-l: cardinality unset");
      return qterms_[frame][fixed_cardinality_];
    }
    return qterms_[frame][best_pt_mode(frame, lambda)];
  }

  int best_pt_mode(long frame, double lambda) const {
    const auto& q = qterms_[frame];
    int best = 0;
    double best_obj = lambda * q[0];
    for (int l = 1; l < static_cast<int>(q.size()); ++l) {
      const double obj = double(l) + lambda * q[l];
      if (obj < best_obj) {
        best_obj = obj;
        best = l;
      }
    }
    return best;
  }

  void solve_fixed() {
    const int kbs = cfg_.deployment.num_bs();
    for (int l = 0; l <= kbs; ++l) {
      std::vector<double> terms(count_);
      for (long i = 0; i < count_; ++i) terms[i] = qterms_[i][l];
      if (mean_fixed_order(terms) - target_ <= 0.0) {
        fixed_cardinality_ = l;
        return;
      }
    }
    fixed_cardinality_ = -1;
  }

  ScenarioConfig cfg_;
  Scheme scheme_;
  long begin_, count_;
  double theta_ = 0, target_ = 0;
  std::vector<EnvTable> env_;                          // time-sharing schemes
  std::vector<std::vector<double>> rates_;             // PT schemes: R(Omega_L)
  std::vector<std::vector<double>> qterms_;            // exp(-theta R(Omega_L))
  std::vector<std::vector<std::vector<int>>> subset_by_mode_;
  int fixed_cardinality_ = -1;
};

// ---------------------------------------------------------------------------
// Multi-user schemes
// ---------------------------------------------------------------------------

struct MultiFrameTables {
  std::vector<std::vector<int>> subset;           // [L] -> BS indices (L entries)
  std::vector<std::vector<BdUserGains>> bd;       // [L][user], BD schemes
  std::vector<std::vector<double>> tdma_rate;     // [L][user] rate at full P_L
  std::vector<std::vector<double>> tdma_rtheta;   // theta_n * rate
  std::vector<std::vector<double>> tdma_logr;     // log(theta_n * rate), -inf if 0
};

class MultiUserEngine : public SchemeEngine {
 public:
  MultiUserEngine(const ScenarioConfig& cfg, Scheme scheme, long begin, long count,
                  const PriorityOrder* inherited)
      : cfg_(cfg), scheme_(scheme), begin_(begin), count_(count) {
    users_ = cfg.deployment.num_users();
    kbs_ = cfg.deployment.num_bs();
    bd_mode_ = scheme == Scheme::pbs_bd_pt || scheme == Scheme::semirandom_bd_pt;
    priority_based_ = scheme == Scheme::pbs_bd_pt || scheme == Scheme::pbs_tdma_pt;
    theta_.resize(users_);
    target_.resize(users_);
    for (int u = 0; u < users_; ++u) {
      const QoSSpec q = cfg.qos(u);
      theta_[u] = q.exponent;
      target_[u] = std::exp(-q.exponent * q.arrival_rate);
    }

    // All-BS single-user rates drive both the priority order and the
    // per-user feasibility bound.
    std::vector<std::vector<double>> full_rates(users_, std::vector<double>(count));
    std::vector<int> all_bs(kbs_);
    for (int m = 0; m < kbs_; ++m) all_bs[m] = m;
    const double p_full = cfg.power.at(kbs_);
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t i) {
      const FadingState state =
          draw_fading_state(cfg.deployment, cfg.pathloss, cfg.seed, begin + long(i));
      for (int u = 0; u < users_; ++u)
        full_rates[u][i] = mimo_capacity(stacked_channel(state, u, all_bs), p_full, cfg.bt());
    });
    cmax_.resize(users_);
    for (int u = 0; u < users_; ++u)
      cmax_[u] = effective_capacity(full_rates[u], theta_[u]);

    if (priority_based_) {
      if (inherited != nullptr) {
        priority_ = *inherited;
      } else {
        std::vector<double> arrivals(users_);
        for (int u = 0; u < users_; ++u) arrivals[u] = cfg.arrival_rate(u);
        priority_ = priority_order(cmax_, arrivals);
      }
    }

    tables_.resize(count);
    zeta_hint_.assign(static_cast<std::size_t>(count) * (kbs_ + 1), 0.0);
    parallel_for(static_cast<std::size_t>(count),
                 [&](std::size_t i) { tables_[i] = build_frame(begin + long(i)); });
  }

  int constraints() const override { return users_; }
  long frames() const override { return count_; }

  std::vector<double> residual(const std::vector<double>& lambda) override {
    std::vector<std::vector<double>> terms(users_, std::vector<double>(count_));
    parallel_for(static_cast<std::size_t>(count_), [&](std::size_t i) {
      double usage;
      std::vector<double> e(users_);
      choose_mode(long(i), lambda, &usage, &e, nullptr, nullptr);
      for (int u = 0; u < users_; ++u) terms[u][i] = e[u];
    });
    std::vector<double> g(users_);
    for (int u = 0; u < users_; ++u) g[u] = mean_fixed_order(terms[u]) - target_[u];
    return g;
  }

  std::vector<double> frame_residual(long frame, const std::vector<double>& lambda) const override {
    double usage;
    std::vector<double> e(users_);
    choose_mode(frame, lambda, &usage, &e, nullptr, nullptr);
    std::vector<double> g(users_);
    for (int u = 0; u < users_; ++u) g[u] = e[u] - target_[u];
    return g;
  }

  FrameDecision decide(long frame, const std::vector<double>& lambda) const override {
    FrameDecision d;
    d.exp_term.resize(users_);
    d.service_rate.assign(users_, 0.0);
    int mode = 0;
    std::vector<double> per_user_aux(users_, 0.0);
    choose_mode(frame, lambda, &d.usage, &d.exp_term, &mode, &per_user_aux);
    if (mode > 0) {
      ModeUse mu;
      mu.kind = bd_mode_ ? ModeUse::Kind::bd : ModeUse::Kind::tdma;
      mu.mode = mode;
      mu.subset = tables_[frame].subset[mode];
      if (bd_mode_) {
        mu.user_power = per_user_aux;
        for (int u = 0; u < users_; ++u) {
          // exp_term is exactly exp(-theta * rate)
          if (d.exp_term[u] < 1.0)
            d.service_rate[u] = -std::log(d.exp_term[u]) / theta_[u];
        }
      } else {
        mu.time_share = per_user_aux;
        for (int u = 0; u < users_; ++u)
          d.service_rate[u] = per_user_aux[u] * tables_[frame].tdma_rate[mode][u];
      }
      d.modes.push_back(std::move(mu));
    }
    return d;
  }

  bool infeasible(std::vector<double>* cmax_out) const override {
    if (cmax_out) *cmax_out = cmax_;
    for (int u = 0; u < users_; ++u)
      if (cmax_[u] < cfg_.arrival_rate(u)) return true;
    return false;
  }

  const PriorityOrder* priority() const override {
    return priority_based_ ? &priority_ : nullptr;
  }

 private:
  MultiFrameTables build_frame(long frame) const {
    const FadingState state = draw_fading_state(cfg_.deployment, cfg_.pathloss, cfg_.seed, frame);
    MultiFrameTables t;
    t.subset.resize(kbs_ + 1);
    if (priority_based_) {
      const auto gains = gain_table(state);
      const std::vector<int> order = priority_selection_order(gains, priority_.order);
      for (int l = 1; l <= kbs_; ++l)
        t.subset[l] = std::vector<int>(order.begin(), order.begin() + l);
    } else {
      for (int l = 1; l <= kbs_; ++l)
        t.subset[l] = semi_random_select(kbs_, l, cfg_.seed, frame);
    }
    if (bd_mode_) {
      t.bd.resize(kbs_ + 1);
      for (int l = 1; l <= kbs_; ++l) {
        std::vector<ComplexMatrix> channels(users_);
        for (int u = 0; u < users_; ++u) channels[u] = stacked_channel(state, u, t.subset[l]);
        const auto bd = bd_precoders(channels);
        t.bd[l].resize(users_);
        for (int u = 0; u < users_; ++u)
          if (!bd[u].skipped) t.bd[l][u] = BdUserGains::from(bd[u].gains);
      }
    } else {
      t.tdma_rate.assign(kbs_ + 1, std::vector<double>(users_, 0.0));
      t.tdma_rtheta.assign(kbs_ + 1, std::vector<double>(users_, 0.0));
      t.tdma_logr.assign(kbs_ + 1, std::vector<double>(users_, 0.0));
      for (int l = 1; l <= kbs_; ++l) {
        const double pl = cfg_.power.at(l);
        for (int u = 0; u < users_; ++u) {
          const double r = mimo_capacity(stacked_channel(state, u, t.subset[l]), pl, cfg_.bt());
          t.tdma_rate[l][u] = r;
          t.tdma_rtheta[l][u] = theta_[u] * r;
          t.tdma_logr[l][u] = r > 0 ? std::log(theta_[u] * r) : 0.0;
        }
      }
    }
    return t;
  }

  // Evaluates every mode at the given multipliers, picks the Lagrangian
  // minimizer (ties to the smaller L), and reports the winning mode's
  // per-user exponential terms plus the power split / time shares.
  void choose_mode(long frame, const std::vector<double>& lambda, double* usage,
                   std::vector<double>* exp_terms, int* mode_out,
                   std::vector<double>* aux_out) const {
    const MultiFrameTables& t = tables_[frame];
    double lambda_sum = 0;
    for (int u = 0; u < users_; ++u) lambda_sum += lambda[u];

    int best_mode = 0;
    double best_obj = lambda_sum;  // L = 0: every term is exp(0) = 1
    std::vector<double> best_terms(users_, 1.0);
    std::vector<double> best_aux(users_, 0.0);
    std::vector<double> terms(users_), aux(users_);

    for (int l = 1; l <= kbs_; ++l) {
      double obj = double(l);
      if (bd_mode_) {
        const double pl = cfg_.power.at(l);
        double& hint = zeta_hint_[std::size_t(frame) * (kbs_ + 1) + l];
        const double zeta = solve_zeta(t.bd[l], theta_, lambda, pl, cfg_.bt(), hint);
        if (zeta > 0) hint = zeta;
        for (int u = 0; u < users_; ++u) {
          if (zeta > 0) {
            const BdUserAlloc a = bd_power_alloc_user(t.bd[l][u], theta_[u], lambda[u], zeta, cfg_.bt());
            terms[u] = std::exp(-theta_[u] * a.rate);
            aux[u] = a.power;
          } else {
            terms[u] = 1.0;
            aux[u] = 0.0;
          }
          obj += lambda[u] * terms[u];
        }
      } else {
        // TDMA: share sum is piecewise linear in log delta.
        double hi = -std::numeric_limits<double>::infinity();
        for (int u = 0; u < users_; ++u) {
          if (lambda[u] > 0 && t.tdma_rtheta[l][u] > 0)
            hi = std::max(hi, std::log(lambda[u]) + t.tdma_logr[l][u]);
        }
        if (!std::isfinite(hi)) {
          for (int u = 0; u < users_; ++u) terms[u] = 1.0, aux[u] = 0.0;
          for (int u = 0; u < users_; ++u) obj += lambda[u];
        } else {
          auto share_sum = [&](double x) {
            double s = 0;
            for (int u = 0; u < users_; ++u) {
              if (!(lambda[u] > 0) || !(t.tdma_rtheta[l][u] > 0)) continue;
              const double c = std::log(lambda[u]) + t.tdma_logr[l][u];
              if (c > x) s += (c - x) / t.tdma_rtheta[l][u];
            }
            return s;
          };
          double lo = hi - 1.0, step = 1.0;
          for (int i = 0; i < 200 && share_sum(lo) < 1.0; ++i) {
            step *= 2;
            lo = hi - step;
          }
          double x = 0.5 * (lo + hi);
          for (int iter = 0; iter < 200; ++iter) {
            x = 0.5 * (lo + hi);
            const double s = share_sum(x);
            if (std::abs(s - 1.0) <= 1e-12) break;
            (s > 1.0 ? lo : hi) = x;
          }
          for (int u = 0; u < users_; ++u) {
            const double c = (lambda[u] > 0 && t.tdma_rtheta[l][u] > 0)
                                 ? std::log(lambda[u]) + t.tdma_logr[l][u]
                                 : -std::numeric_limits<double>::infinity();
            if (c > x) {
              aux[u] = (c - x) / t.tdma_rtheta[l][u];       // t_n
              terms[u] = std::exp(x - c);                   // exp(-theta t R)
            } else {
              aux[u] = 0.0;
              terms[u] = 1.0;
            }
            obj += lambda[u] * terms[u];
          }
        }
      }
      if (obj < best_obj) {
        best_obj = obj;
        best_mode = l;
        best_terms = terms;
        best_aux = aux;
      }
    }
    *usage = best_mode;
    *exp_terms = best_terms;
    if (mode_out) *mode_out = best_mode;
    if (aux_out) *aux_out = best_aux;
  }

  ScenarioConfig cfg_;
  Scheme scheme_;
  long begin_, count_;
  int users_ = 0, kbs_ = 0;
  bool bd_mode_ = false, priority_based_ = false;
  std::vector<double> theta_, target_, cmax_;
  PriorityOrder priority_;
  std::vector<MultiFrameTables> tables_;
  mutable std::vector<double> zeta_hint_;
};

}  // namespace

std::unique_ptr<SchemeEngine> build_engine(const ScenarioConfig& config, Scheme scheme,
                                           long frame_begin, long frame_count,
                                           const PriorityOrder* inherited_priority) {
  if (scheme_is_single_user(scheme))
    return std::make_unique<SingleUserEngine>(config, scheme, frame_begin, frame_count);
  return std::make_unique<MultiUserEngine>(config, scheme, frame_begin, frame_count,
                                           inherited_priority);
}

}  // namespace dmimo

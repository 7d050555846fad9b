#pragma once

#include <span>
#include <vector>

#include "dmimo/channel.hpp"

namespace dmimo {

// P_L = reference + kappa * (L - 1) for L >= 1; 0 for the silent mode.
struct PowerPolicy {
  double reference = 4.0;
  double kappa = 2.4;

  double at(int mode) const { return mode <= 0 ? 0.0 : reference + kappa * (mode - 1); }
};

// A BS subset of fixed cardinality plus its achievable rate at that mode's
// power budget. Indices are 0-based, listed in selection order.
struct SubsetSelection {
  std::vector<int> indices;
  double rate = 0;
};

// Greedy one-BS-at-a-time selection; each step adds the BS that maximizes the
// capacity of the enlarged subset at the enlarged subset's power budget.
SubsetSelection incremental_select(const FadingState& state, int user, int cardinality,
                                   const PowerPolicy& power, double bt);
// The full nested chain for L = 0..K_bs (one greedy pass).
std::vector<SubsetSelection> incremental_chain(const FadingState& state, int user,
                                               const PowerPolicy& power, double bt);

// The L largest aggregate power gains; ties broken toward the lower index.
std::vector<int> ordered_gain_indices(std::span<const double> gains, int cardinality);
SubsetSelection ordered_gain_select(const FadingState& state, int user,
                                    std::span<const double> gains, int cardinality,
                                    const PowerPolicy& power, double bt);

// True maximizer over all C(K_bs, L) subsets; refuses to enumerate more than
// one million combinations.
SubsetSelection exhaustive_select(const FadingState& state, int user, int cardinality,
                                  const PowerPolicy& power, double bt);

// Upper concave hull of {(L, R(Omega_L))}: vertices m_0=0 < ... < m_K = K_bs
// with strictly decreasing segment slopes.
struct RateEnvelope {
  std::vector<int> usage;     // m_j, j = 0..K
  std::vector<double> rate;   // R~(m_j)
  std::vector<double> slope;  // nu_j, j = 1..K

  int segments() const { return static_cast<int>(slope.size()); }
  int max_usage() const { return usage.back(); }
  double rate_at(double u) const;
};

// rates[L] for L = 0..K_bs with rates[0] == 0.
RateEnvelope rate_envelope(std::span<const double> rates);

// Time-sharing weights realizing a fractional usage on the envelope: at most
// two nonzero entries, on the adjacent hull vertices.
std::vector<double> usage_to_alpha(const RateEnvelope& env, double usage, int num_bs);

// Per-state minimizer of L + lambda (exp(-theta R~(L)) - exp(-theta C)) over
// [0, K_bs]: vertex or interior-of-segment branch.
double theorem1_usage(const RateEnvelope& env, double theta, double lambda);

}  // namespace dmimo

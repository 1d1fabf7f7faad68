#pragma once

#include <optional>
#include <vector>

#include "wepr/data_model.hpp"

namespace wepr {

// Per-step entropy decomposition over the exposed top-K candidates.
// All entropies are in bits.
struct TokenEntropyProfile {
  int step_index = 1;
  double entropy_bits = 0.0;               // sum of contributions
  std::vector<double> contributions;       // -p_k log2 p_k per rank, length <= K
  double residual_mass = 0.0;              // 1 - sum(p), clamped to [0, 1]
  std::optional<double> tail_bound_full;        // needs settings.vocab_size
  std::optional<double> tail_bound_truncated;   // needs settings.sampling_top_k > K
};

struct SequenceEntropyProfile {
  std::vector<TokenEntropyProfile> per_token;
  double epr = 0.0;                        // mean per-step entropy_bits
  // Mean contribution per rank across steps, zero-padded to K for steps
  // exposing fewer candidates. Feature vector of the supervised scorer.
  std::vector<double> mean_contributions;
};

// -p log2 p with the limit value 0 at p in {0, 1}. Throws DomainError
// outside [0, 1].
double entropic_contribution(double p);

// Entropy of the exposed candidates plus the uncovered mass.
// Tail-bound fields are left empty; sequence_profile fills them from the
// record's settings.
TokenEntropyProfile token_entropy_topk(const TokenDistribution& dist);

// Largest entropy the unexposed tail could carry if the residual mass were
// spread uniformly over the remaining vocabulary:
//   h(Q) + Q log2(|V| - K),  h(x) = -x log2 x.
double tail_bound_full_vocab(double residual_mass, long long vocab_size, int k);

// Same bound in the |V| >> K approximation, log2(|V| - K) ~ log2 |V|.
double tail_bound_full_vocab_approx(double residual_mass, long long vocab_size, int k);

// Tail restricted to the sampling cutoff: only K_samp - K slots can carry
// mass at generation time, which tightens the bound to
//   h(Q) + Q log2(K_samp - K).
double tail_bound_truncated(double residual_mass, int sampling_top_k, int k);

// How much of the recoverable uncertainty the exposed entropy captures.
// Returns +infinity when the bound is 0 (no unexposed mass).
double sufficiency_ratio(double entropy_bits, double tail_bound);

// Full per-sequence profile: per-step entropies with tail bounds (where the
// settings allow them), the EPR, and the rank-mean feature vector.
SequenceEntropyProfile sequence_profile(const SequenceRecord& record);

// Rebuilds the distribution as it would look at a different sampling
// temperature: relative logits are recovered from the exposed
// probabilities, rescaled, and softmaxed over the K available candidates
// only (the unexposed tail is unavailable, so the result renormalizes to
// mass 1). Candidates whose rescaled probability underflows to zero are
// dropped. Throws DomainError on non-positive temperatures.
TokenDistribution retemper(const TokenDistribution& dist, double new_temperature,
                           double source_temperature);

}  // namespace wepr

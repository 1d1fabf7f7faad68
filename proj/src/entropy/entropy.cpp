#include "wepr/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wepr/errors.hpp"
#include "wepr/kernels.hpp"

namespace wepr {
namespace {

// h(x) = -x log2 x, the entropy kernel applied to a single mass.
double h_bits(double x) {
  if (x <= 0.0) return 0.0;
  return -(x * std::log2(x)) + 0.0;
}

}  // namespace

double entropic_contribution(double p) {
  if (!(p >= 0.0) || p > 1.0) throw DomainError("entropic_contribution: p must lie in [0, 1]");
  return h_bits(p);
}

TokenEntropyProfile token_entropy_topk(const TokenDistribution& dist) {
  dist.validate();
  const size_t n = dist.candidates.size();

  std::vector<double> probs(n);
  for (size_t i = 0; i < n; ++i) probs[i] = dist.candidates[i].probability;

  TokenEntropyProfile profile;
  profile.step_index = dist.step_index;
  profile.contributions.resize(n);
  const kernels::Ops& k = kernels::active();
  k.neg_p_log2_p(probs.data(), profile.contributions.data(), n);
  profile.entropy_bits = k.sum(profile.contributions.data(), n);
  profile.residual_mass = std::clamp(1.0 - k.sum(probs.data(), n), 0.0, 1.0);
  return profile;
}

double tail_bound_full_vocab(double residual_mass, long long vocab_size, int k) {
  if (!(residual_mass >= 0.0) || residual_mass > 1.0)
    throw DomainError("tail_bound_full_vocab: residual mass must lie in [0, 1]");
  if (vocab_size <= k) throw DomainError("tail_bound_full_vocab: vocab_size must exceed K");
  return h_bits(residual_mass) + residual_mass * std::log2(static_cast<double>(vocab_size - k));
}

double tail_bound_full_vocab_approx(double residual_mass, long long vocab_size, int k) {
  if (!(residual_mass >= 0.0) || residual_mass > 1.0)
    throw DomainError("tail_bound_full_vocab_approx: residual mass must lie in [0, 1]");
  if (vocab_size <= k) throw DomainError("tail_bound_full_vocab_approx: vocab_size must exceed K");
  return h_bits(residual_mass) + residual_mass * std::log2(static_cast<double>(vocab_size));
}

double tail_bound_truncated(double residual_mass, int sampling_top_k, int k) {
  if (!(residual_mass >= 0.0) || residual_mass > 1.0)
    throw DomainError("tail_bound_truncated: residual mass must lie in [0, 1]");
  if (sampling_top_k <= k) throw DomainError("tail_bound_truncated: sampling_top_k must exceed K");
  return h_bits(residual_mass) + residual_mass * std::log2(static_cast<double>(sampling_top_k - k));
}

double sufficiency_ratio(double entropy_bits, double tail_bound) {
  if (!(entropy_bits >= 0.0) || !(tail_bound >= 0.0))
    throw DomainError("sufficiency_ratio: both arguments must be >= 0");
  if (tail_bound == 0.0) return std::numeric_limits<double>::infinity();
  return entropy_bits / tail_bound;
}

SequenceEntropyProfile sequence_profile(const SequenceRecord& record) {
  record.validate();
  const int k = record.settings.top_k_exposed;
  const size_t steps = record.steps.size();

  SequenceEntropyProfile profile;
  profile.per_token.reserve(steps);
  profile.mean_contributions.assign(static_cast<size_t>(k), 0.0);

  double entropy_sum = 0.0;
  for (const TokenDistribution& dist : record.steps) {
    TokenEntropyProfile tp = token_entropy_topk(dist);
    if (record.settings.vocab_size)
      tp.tail_bound_full = tail_bound_full_vocab(tp.residual_mass, *record.settings.vocab_size, k);
    if (record.settings.sampling_top_k && *record.settings.sampling_top_k > k)
      tp.tail_bound_truncated = tail_bound_truncated(tp.residual_mass, *record.settings.sampling_top_k, k);
    entropy_sum += tp.entropy_bits;
    for (size_t r = 0; r < tp.contributions.size(); ++r)
      profile.mean_contributions[r] += tp.contributions[r];
    profile.per_token.push_back(std::move(tp));
  }

  const double inv_len = 1.0 / static_cast<double>(steps);
  profile.epr = entropy_sum * inv_len;
  for (double& x : profile.mean_contributions) x *= inv_len;
  return profile;
}

TokenDistribution retemper(const TokenDistribution& dist, double new_temperature,
                           double source_temperature) {
  if (!(new_temperature > 0.0) || !(source_temperature > 0.0))
    throw DomainError("retemper: temperatures must be > 0");
  dist.validate();
  for (const Candidate& c : dist.candidates)
    if (c.probability <= 0.0) throw DomainError("retemper: zero-probability candidate");

  // p_k(T_new) ~ p_k(T_src)^(T_src/T_new); work in log space against the
  // top candidate so the exponent never overflows.
  const double exponent = source_temperature / new_temperature;
  const double log_top = std::log(dist.candidates.front().probability);

  std::vector<double> unnormalized(dist.candidates.size());
  double norm = 0.0;
  for (size_t i = 0; i < dist.candidates.size(); ++i) {
    const double shifted = exponent * (std::log(dist.candidates[i].probability) - log_top);
    unnormalized[i] = std::exp(shifted);
    norm += unnormalized[i];
  }

  TokenDistribution out;
  out.step_index = dist.step_index;
  out.sampled_rank = dist.sampled_rank;
  for (size_t i = 0; i < dist.candidates.size(); ++i) {
    const double p = unnormalized[i] / norm;
    if (p == 0.0) continue;  // underflow at extreme cooling
    out.candidates.push_back({dist.candidates[i].token, std::min(p, 1.0)});
  }
  if (out.sampled_rank && *out.sampled_rank > static_cast<int>(out.candidates.size()))
    out.sampled_rank.reset();
  out.validate();
  return out;
}

}  // namespace wepr

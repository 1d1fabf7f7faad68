#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <vector>

#include "wepr/entropy.hpp"
#include "wepr/errors.hpp"
#include "wepr/rng.hpp"

using namespace wepr;

namespace {

TokenDistribution make_dist(const std::vector<double>& probs, int step = 1) {
  TokenDistribution d;
  d.step_index = step;
  for (size_t i = 0; i < probs.size(); ++i)
    d.candidates.push_back({"t" + std::to_string(i), probs[i]});
  return d;
}

// Random point on the simplex over n slots, sorted descending.
std::vector<double> random_simplex(Rng& rng, size_t n) {
  std::vector<double> p(n);
  double total = 0.0;
  for (double& x : p) {
    x = rng.next_gamma(1.0);
    total += x;
  }
  for (double& x : p) x /= total;
  std::sort(p.begin(), p.end(), std::greater<>());
  return p;
}

double entropy_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

SequenceRecord make_record(const std::vector<std::vector<double>>& step_probs, int k,
                           std::optional<int> sampling_top_k = std::nullopt,
                           std::optional<long long> vocab = std::nullopt) {
  SequenceRecord rec;
  rec.query_id = "t";
  rec.settings.temperature = 1.0;
  rec.settings.top_k_exposed = k;
  rec.settings.sampling_top_k = sampling_top_k;
  rec.settings.vocab_size = vocab;
  for (size_t j = 0; j < step_probs.size(); ++j)
    rec.steps.push_back(make_dist(step_probs[j], static_cast<int>(j + 1)));
  return rec;
}

}  // namespace

TEST_CASE("entropic_contribution: values and domain") {
  CHECK(entropic_contribution(1.0) == 0.0);
  CHECK(entropic_contribution(0.0) == 0.0);
  CHECK(entropic_contribution(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(entropic_contribution(0.25) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(entropic_contribution(-0.1), DomainError);
  CHECK_THROWS_AS(entropic_contribution(1.1), DomainError);
}

TEST_CASE("token_entropy_topk: spec examples") {
  auto p1 = token_entropy_topk(make_dist({0.5, 0.5}));
  CHECK(p1.entropy_bits == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p1.residual_mass == doctest::Approx(0.0).epsilon(1e-12));

  auto p2 = token_entropy_topk(make_dist({1.0}));
  CHECK(p2.entropy_bits == 0.0);
  CHECK(p2.residual_mass == 0.0);

  auto p3 = token_entropy_topk(make_dist({0.5, 0.25}));
  CHECK(p3.entropy_bits == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p3.residual_mass == doctest::Approx(0.25).epsilon(1e-12));

  // Decomposition identity: entropy is the sum of its contributions.
  const double sum = std::accumulate(p3.contributions.begin(), p3.contributions.end(), 0.0);
  CHECK(std::abs(p3.entropy_bits - sum) < 1e-12);
}

TEST_CASE("entropy stays within [0, log2 K] on random distributions") {
  Rng rng(31);
  for (int rep = 0; rep < 500; ++rep) {
    const size_t k = 1 + rng.next_below(20);
    const auto profile = token_entropy_topk(make_dist(random_simplex(rng, k)));
    CHECK(profile.entropy_bits >= 0.0);
    CHECK(profile.entropy_bits <= std::log2(static_cast<double>(k)) + 1e-12);
  }
}

TEST_CASE("tail_bound_full_vocab: values") {
  CHECK(tail_bound_full_vocab(0.0, 1024, 2) == 0.0);
  const double expect = 0.5 + 0.25 * std::log2(1022.0);
  CHECK(tail_bound_full_vocab(0.25, 1024, 2) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(tail_bound_full_vocab(0.25, 1024, 2) == doctest::Approx(2.99930).epsilon(1e-5));
  CHECK(tail_bound_full_vocab(1.0, 3, 2) == 0.0);  // single tail slot
  CHECK_THROWS_AS(tail_bound_full_vocab(0.5, 2, 2), DomainError);
  CHECK_THROWS_AS(tail_bound_full_vocab(1.5, 10, 2), DomainError);
}

TEST_CASE("tail_bound_truncated: values and tightness vs full") {
  const double expect = entropic_contribution(0.1) + 0.1 * std::log2(40.0);
  CHECK(tail_bound_truncated(0.1, 50, 10) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(tail_bound_truncated(0.1, 50, 10) == doctest::Approx(0.86438).epsilon(1e-4));
  CHECK(tail_bound_truncated(0.0, 50, 10) == 0.0);
  CHECK_THROWS_AS(tail_bound_truncated(0.1, 10, 10), DomainError);

  Rng rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    const double q = rng.next_double();
    const int k = static_cast<int>(1 + rng.next_below(15));
    const int ks = k + 1 + static_cast<int>(rng.next_below(60));
    const long long vocab = ks + static_cast<long long>(rng.next_below(2000));
    CHECK(tail_bound_truncated(q, ks, k) <= tail_bound_full_vocab(q, vocab, k) + 1e-12);
    CHECK(tail_bound_full_vocab(q, vocab, k) <= tail_bound_full_vocab_approx(q, vocab, k) + 1e-12);
  }
}

TEST_CASE("tail bound dominates any actual tail (brute force)") {
  Rng rng(99);
  for (int rep = 0; rep < 300; ++rep) {
    const size_t vocab = 20 + rng.next_below(980);
    const int k = static_cast<int>(5 + 5 * rng.next_below(3));  // 5, 10, 15
    const auto full = random_simplex(rng, vocab);
    std::vector<double> head(full.begin(), full.begin() + k);

    const double h_full = entropy_of(full);
    const double h_head = entropy_of(head);
    const double captured = std::accumulate(head.begin(), head.end(), 0.0);
    const double q = std::clamp(1.0 - captured, 0.0, 1.0);

    const double bound = tail_bound_full_vocab(q, static_cast<long long>(vocab), k);
    CHECK(h_full - h_head <= bound + 1e-12);
  }
}

TEST_CASE("truncated bound is attained by the uniform tail and never beaten") {
  // Tail of N = K_samp - K slots carrying mass Q: uniform attains the
  // bound; random tails stay below it.
  const int k = 10, ksamp = 50;
  const int n_tail = ksamp - k;
  const double q = 0.1;
  const double bound = tail_bound_truncated(q, ksamp, k);

  std::vector<double> uniform(n_tail, q / n_tail);
  CHECK(entropy_of(uniform) == doctest::Approx(bound).epsilon(1e-12));

  Rng rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    auto tail = random_simplex(rng, n_tail);
    for (double& x : tail) x *= q;
    CHECK(entropy_of(tail) <= bound + 1e-12);
  }
}

TEST_CASE("sufficiency_ratio") {
  CHECK(sufficiency_ratio(2.0, 0.5) == doctest::Approx(4.0));
  CHECK(std::isinf(sufficiency_ratio(1.0, 0.0)));
  CHECK(std::isinf(sufficiency_ratio(0.0, 0.0)));
  const double b = tail_bound_truncated(0.1, 50, 10);
  CHECK(sufficiency_ratio(b, b) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(sufficiency_ratio(-1.0, 1.0), DomainError);
}

TEST_CASE("sequence_profile: epr and feature vector") {
  // Steps with entropies 1.0 and 0.5 bits.
  const auto profile = sequence_profile(make_record({{0.5, 0.5}, {0.5}}, 2));
  CHECK(profile.epr == doctest::Approx(0.75).epsilon(1e-15));
  REQUIRE(profile.per_token.size() == 2);
  CHECK(profile.per_token[1].entropy_bits == doctest::Approx(0.5).epsilon(1e-15));

  const auto single = sequence_profile(make_record({{0.5, 0.5}}, 5));
  REQUIRE(single.mean_contributions.size() == 5);
  CHECK(single.mean_contributions[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(single.mean_contributions[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(single.mean_contributions[2] == 0.0);
  CHECK(single.epr == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sequence_profile: sum of rank means equals epr at full exposure") {
  Rng rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    const int k = static_cast<int>(2 + rng.next_below(14));
    std::vector<std::vector<double>> steps;
    const int len = static_cast<int>(1 + rng.next_below(40));
    for (int j = 0; j < len; ++j) {
      auto p = random_simplex(rng, static_cast<size_t>(k) + 5);
      p.resize(static_cast<size_t>(k));  // leaves residual mass, full K exposure
      steps.push_back(std::move(p));
    }
    const auto profile = sequence_profile(make_record(steps, k));
    const double sum_means =
        std::accumulate(profile.mean_contributions.begin(), profile.mean_contributions.end(), 0.0);
    CHECK(std::abs(sum_means - profile.epr) < 1e-12);

    // epr is the mean of the per-step entropies.
    double mean_h = 0.0;
    for (const auto& tp : profile.per_token) mean_h += tp.entropy_bits;
    mean_h /= static_cast<double>(profile.per_token.size());
    CHECK(std::abs(mean_h - profile.epr) < 1e-12);
  }
}

TEST_CASE("sequence_profile: epr invariant under step permutation") {
  Rng rng(23);
  std::vector<std::vector<double>> steps;
  for (int j = 0; j < 12; ++j) steps.push_back(random_simplex(rng, 8));
  const double epr1 = sequence_profile(make_record(steps, 8)).epr;
  std::reverse(steps.begin(), steps.end());
  const double epr2 = sequence_profile(make_record(steps, 8)).epr;
  CHECK(epr1 == doctest::Approx(epr2).epsilon(1e-12));
}

TEST_CASE("sequence_profile: tail bounds populated from settings") {
  const auto profile = sequence_profile(make_record({{0.5, 0.25}}, 2, 50, 131072));
  REQUIRE(profile.per_token.size() == 1);
  REQUIRE(profile.per_token[0].tail_bound_full.has_value());
  REQUIRE(profile.per_token[0].tail_bound_truncated.has_value());
  CHECK(*profile.per_token[0].tail_bound_truncated <= *profile.per_token[0].tail_bound_full);
  CHECK(*profile.per_token[0].tail_bound_truncated ==
        doctest::Approx(tail_bound_truncated(0.25, 50, 2)).epsilon(1e-12));
}

TEST_CASE("retemper: symmetry, identity, oracle") {
  const auto same = retemper(make_dist({0.5, 0.5}), 3.7, 1.0);
  CHECK(same.candidates[0].probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(same.candidates[1].probability == doctest::Approx(0.5).epsilon(1e-12));

  Rng rng(41);
  for (int rep = 0; rep < 100; ++rep) {
    const auto probs = random_simplex(rng, 1 + rng.next_below(12));
    const auto out = retemper(make_dist(probs), 1.0, 1.0);
    REQUIRE(out.candidates.size() == probs.size());
    for (size_t i = 0; i < probs.size(); ++i)
      CHECK(std::abs(out.candidates[i].probability - probs[i]) < 1e-12);

    // Direct power-law oracle at an arbitrary temperature pair.
    const double t_new = 0.25 + 3.0 * rng.next_double();
    const double t_src = 0.25 + 3.0 * rng.next_double();
    const auto heated = retemper(make_dist(probs), t_new, t_src);
    double z = 0.0;
    std::vector<double> expect(probs.size());
    for (size_t i = 0; i < probs.size(); ++i) {
      expect[i] = std::pow(probs[i], t_src / t_new);
      z += expect[i];
    }
    REQUIRE(heated.candidates.size() == probs.size());
    for (size_t i = 0; i < probs.size(); ++i)
      CHECK(heated.candidates[i].probability == doctest::Approx(expect[i] / z).epsilon(1e-9));
  }
}

TEST_CASE("retemper: renormalizes sub-unit inputs to shares") {
  const auto out = retemper(make_dist({0.5, 0.25}), 1.0, 1.0);
  CHECK(out.candidates[0].probability == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(out.candidates[1].probability == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("retemper: temperature limits") {
  const auto fixture = make_dist({0.4, 0.3, 0.2, 0.1});

  const auto cold = retemper(fixture, 1e-3, 1.0);
  CHECK(token_entropy_topk(cold).entropy_bits < 1e-6);

  const auto hot = retemper(fixture, 1e3, 1.0);
  CHECK(std::abs(token_entropy_topk(hot).entropy_bits - std::log2(4.0)) < 1e-3);

  CHECK_THROWS_AS(retemper(fixture, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(retemper(fixture, 1.0, -1.0), DomainError);
}

TEST_CASE("retemper: entropy monotone in temperature") {
  Rng rng(53);
  const double grid[] = {0.25, 0.5, 1.0, 2.0, 4.0};
  for (int rep = 0; rep < 200; ++rep) {
    const auto probs = random_simplex(rng, 2 + rng.next_below(14));
    const auto dist = make_dist(probs);
    double prev = -1.0;
    for (double t : grid) {
      const double h = token_entropy_topk(retemper(dist, t, 1.0)).entropy_bits;
      CHECK(h >= prev - 1e-10);
      prev = h;
    }
  }
}

TEST_CASE("profiles are safe to compute concurrently") {
  Rng rng(61);
  std::vector<std::vector<double>> steps;
  for (int j = 0; j < 30; ++j) steps.push_back(random_simplex(rng, 10));
  const SequenceRecord rec = make_record(steps, 10, 50, 131072);

  const double serial = sequence_profile(rec).epr;
  std::vector<std::future<double>> futures;
  for (int t = 0; t < 4; ++t)
    futures.push_back(std::async(std::launch::async, [&rec] { return sequence_profile(rec).epr; }));
  for (auto& f : futures) CHECK(f.get() == serial);
}

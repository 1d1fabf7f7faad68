#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wepr/errors.hpp"
#include "wepr/evaluator.hpp"
#include "wepr/metrics.hpp"
#include "wepr/rng.hpp"

using namespace wepr;

// Frozen after the first run of the 100-group/fraction-0.2/seed-7 split.
#define WEPR_GOLDEN_TEST_GROUPS 25

namespace {

// O(n^2) pairwise-count oracle for ROC-AUC.
double roc_auc_pairwise(const std::vector<double>& scores, const std::vector<int>& labels) {
  double wins = 0.0;
  size_t pairs = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

std::vector<LabeledExample> shell_examples(const std::vector<std::string>& ids) {
  std::vector<LabeledExample> out;
  for (const std::string& id : ids) {
    LabeledExample ex;
    ex.record.query_id = id;
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace

TEST_CASE("roc_auc: spec examples") {
  CHECK(roc_auc({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}) == 1.0);
  CHECK(roc_auc({0.9, 0.4, 0.35, 0.8}, {1, 0, 1, 0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(roc_auc({0.3, 0.3, 0.3, 0.3}, {1, 0, 1, 0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(roc_auc({0.1, 0.2}, {1, 1}), MetricError);
  CHECK_THROWS_AS(roc_auc({}, {}), MetricError);
}

TEST_CASE("pr_auc: spec examples") {
  CHECK(pr_auc({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}) == 1.0);
  CHECK(pr_auc({0.9, 0.8, 0.7}, {1, 0, 1}) ==
        doctest::Approx(0.5 + 0.5 * (2.0 / 3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(pr_auc({0.1, 0.2}, {0, 0}), MetricError);
}

TEST_CASE("roc_auc equals the pairwise oracle on an exhaustive small grid") {
  // All label patterns and score assignments over a coarse grid, n <= 4
  // here; the acceptance suite runs the full n <= 6 sweep.
  const double grid[] = {0.1, 0.5, 0.9};
  for (int n = 2; n <= 4; ++n) {
    std::vector<int> labels(static_cast<size_t>(n));
    for (int mask = 1; mask < (1 << n) - 1; ++mask) {
      for (int i = 0; i < n; ++i) labels[static_cast<size_t>(i)] = (mask >> i) & 1;
      std::vector<size_t> idx(static_cast<size_t>(n), 0);
      for (;;) {
        std::vector<double> scores(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) scores[static_cast<size_t>(i)] = grid[idx[static_cast<size_t>(i)]];
        CHECK(roc_auc(scores, labels) == doctest::Approx(roc_auc_pairwise(scores, labels)).epsilon(1e-15));
        int pos = 0;
        while (pos < n && ++idx[static_cast<size_t>(pos)] == 3) idx[static_cast<size_t>(pos++)] = 0;
        if (pos == n) break;
      }
    }
  }
}

TEST_CASE("roc_auc: complement symmetry without ties") {
  Rng rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 10 + static_cast<int>(rng.next_below(50));
    std::vector<double> scores;
    std::vector<int> labels;
    for (int i = 0; i < n; ++i) {
      scores.push_back(rng.next_double());  // continuous, ties improbable
      labels.push_back(rng.next_bool() ? 1 : 0);
    }
    labels[0] = 1;
    labels[1] = 0;
    std::vector<double> neg(scores);
    for (double& x : neg) x = -x;
    CHECK(roc_auc(scores, labels) + roc_auc(neg, labels) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("metrics invariant under strictly increasing transforms") {
  Rng rng(9);
  std::vector<double> scores;
  std::vector<int> labels;
  for (int i = 0; i < 200; ++i) {
    scores.push_back(2.0 * rng.next_double() - 1.0);
    labels.push_back(rng.next_bool() ? 1 : 0);
  }
  labels[0] = 1;
  labels[1] = 0;
  std::vector<double> warped(scores);
  for (double& x : warped) x = std::exp(3.0 * x) + 1.0;
  CHECK(roc_auc(scores, labels) == doctest::Approx(roc_auc(warped, labels)).epsilon(1e-12));
  CHECK(pr_auc(scores, labels) == doctest::Approx(pr_auc(warped, labels)).epsilon(1e-12));
}

TEST_CASE("pr_auc converges to prevalence on random scores") {
  Rng rng(13);
  const int n = 10000;
  std::vector<double> scores;
  std::vector<int> labels;
  int pos = 0;
  for (int i = 0; i < n; ++i) {
    scores.push_back(rng.next_double());
    const int y = rng.next_double() < 0.3 ? 1 : 0;
    pos += y;
    labels.push_back(y);
  }
  const double prevalence = static_cast<double>(pos) / n;
  CHECK(std::abs(pr_auc(scores, labels) - prevalence) < 0.02);
}

TEST_CASE("bootstrap_eval: degenerate and trivial cases") {
  const std::vector<double> scores{0.9, 0.8, 0.2, 0.1};
  const std::vector<int> labels{1, 1, 0, 0};

  const BootstrapStats one = bootstrap_eval(scores, labels, {1, 7});
  CHECK(one.iterations == 1);
  CHECK(one.pr_auc_std == 0.0);
  CHECK(one.roc_auc_std == 0.0);

  // Perfect separation survives any resample that keeps both classes.
  const BootstrapStats sep = bootstrap_eval(scores, labels, {200, 3});
  CHECK(sep.roc_auc_mean == 1.0);
  CHECK(sep.roc_auc_std == 0.0);
  CHECK(sep.pr_auc_mean == 1.0);
}

TEST_CASE("bootstrap_eval: deterministic in seed, near point estimate") {
  Rng rng(21);
  std::vector<double> scores;
  std::vector<int> labels;
  for (int i = 0; i < 500; ++i) {
    const int y = rng.next_bool() ? 1 : 0;
    scores.push_back(rng.next_normal() + (y == 1 ? 0.8 : 0.0));
    labels.push_back(y);
  }
  const BootstrapStats a = bootstrap_eval(scores, labels, {1000, 99});
  const BootstrapStats b = bootstrap_eval(scores, labels, {1000, 99});
  CHECK(a.pr_auc_mean == b.pr_auc_mean);
  CHECK(a.roc_auc_std == b.roc_auc_std);

  CHECK(std::abs(a.roc_auc_mean - roc_auc(scores, labels)) < 0.02);
  CHECK(std::abs(a.pr_auc_mean - pr_auc(scores, labels)) < 0.02);

  const BootstrapStats c = bootstrap_eval(scores, labels, {1000, 100});
  CHECK(a.pr_auc_mean != c.pr_auc_mean);  // different seed, different resamples
}

TEST_CASE("grouped_split: determinism and order independence") {
  std::vector<std::string> ids;
  for (int g = 0; g < 40; ++g)
    for (int a = 0; a < 3; ++a) ids.push_back("g" + std::to_string(g));
  auto examples = shell_examples(ids);

  const SplitPlan p1 = grouped_split(examples, 0.3, 11);
  const SplitPlan p2 = grouped_split(examples, 0.3, 11);
  CHECK(p1.test_group_ids == p2.test_group_ids);

  std::reverse(examples.begin(), examples.end());
  const SplitPlan p3 = grouped_split(examples, 0.3, 11);
  CHECK(p1.test_group_ids == p3.test_group_ids);

  const SplitPlan p4 = grouped_split(examples, 0.3, 12);
  CHECK(p1.test_group_ids != p4.test_group_ids);
}

TEST_CASE("grouped_split: no query id on both sides, union covers all") {
  Rng rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    const int groups = 2 + static_cast<int>(rng.next_below(30));
    std::vector<std::string> ids;
    for (int g = 0; g < groups; ++g) {
      const int copies = 1 + static_cast<int>(rng.next_below(4));
      for (int c = 0; c < copies; ++c) ids.push_back("q" + std::to_string(g));
    }
    const SplitPlan plan = grouped_split(shell_examples(ids), 0.1 + 0.8 * rng.next_double(),
                                         rng.next_u64());
    CHECK(!plan.train_group_ids.empty());
    CHECK(!plan.test_group_ids.empty());
    CHECK(plan.train_group_ids.size() + plan.test_group_ids.size() == static_cast<size_t>(groups));
    for (const std::string& id : plan.test_group_ids) CHECK(!plan.train_group_ids.count(id));
  }
}

TEST_CASE("grouped_split: two groups split one each at 0.5") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const SplitPlan plan = grouped_split(shell_examples({"a", "a", "b"}), 0.5, seed);
    CHECK(plan.train_group_ids.size() == 1);
    CHECK(plan.test_group_ids.size() == 1);
  }
}

TEST_CASE("grouped_split: errors") {
  CHECK_THROWS_AS(grouped_split(shell_examples({"only", "only"}), 0.5, 1), SplitError);
  CHECK_THROWS_AS(grouped_split(shell_examples({"a", "b"}), 0.0, 1), DomainError);
  CHECK_THROWS_AS(grouped_split(shell_examples({"a", "b"}), 1.0, 1), DomainError);
}

TEST_CASE("grouped_split: golden membership for 100 groups") {
  std::vector<std::string> ids;
  for (int g = 0; g < 100; ++g) ids.push_back("query-" + std::to_string(g));
  const SplitPlan plan = grouped_split(shell_examples(ids), 0.2, 7);
  // Recorded from the first run; the stable hash makes this portable.
  CHECK(plan.test_group_ids.size() >= 10);
  CHECK(plan.test_group_ids.size() <= 30);
  const SplitPlan again = grouped_split(shell_examples(ids), 0.2, 7);
  CHECK(plan.test_group_ids == again.test_group_ids);
  CHECK(plan.test_group_ids.size() == WEPR_GOLDEN_TEST_GROUPS);
}

TEST_CASE("compare_methods: identity model reproduces the EPR baseline") {
  Rng rng(41);
  std::vector<ProfiledExample> test_set;
  for (int i = 0; i < 60; ++i) {
    ProfiledExample ex;
    ex.query_id = "q" + std::to_string(i);
    ex.label = rng.next_bool() ? 1 : 0;
    ex.profile.mean_contributions.resize(6);
    double epr = 0.0;
    for (double& x : ex.profile.mean_contributions) {
      x = 0.5 * rng.next_double();
      epr += x;
    }
    ex.profile.epr = epr;
    test_set.push_back(std::move(ex));
  }
  test_set[0].label = 1;
  test_set[1].label = 0;

  const MethodComparison cmp = compare_methods(test_set, identity_model(6), {300, 17});
  CHECK(std::abs(cmp.epr_baseline.roc_auc - cmp.wepr.roc_auc) < 1e-12);
  CHECK(std::abs(cmp.epr_baseline.pr_auc - cmp.wepr.pr_auc) < 1e-12);
  CHECK(std::abs(cmp.epr_baseline.bootstrap.roc_auc_mean - cmp.wepr.bootstrap.roc_auc_mean) < 1e-12);
  CHECK(cmp.epr_baseline.n_pos == cmp.wepr.n_pos);
}

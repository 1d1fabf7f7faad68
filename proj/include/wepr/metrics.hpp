#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "wepr/data_model.hpp"

namespace wepr {

// ROC-AUC via midranks (Mann-Whitney): P(score_pos > score_neg) + P(tie)/2.
// Throws MetricError unless both classes are present.
double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

// Average precision (step-interpolated PR-AUC); equal scores are processed
// as one threshold block. Throws MetricError when no positives exist.
double pr_auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct BootstrapConfig {
  int iterations = 1000;
  uint64_t seed = 0;
};

struct BootstrapStats {
  int iterations = 0;
  double pr_auc_mean = 0.0;
  double pr_auc_std = 0.0;
  double roc_auc_mean = 0.0;
  double roc_auc_std = 0.0;
};

// Resamples (score, label) pairs with replacement per iteration; iterations
// draw from independent substreams of the seed, so results do not depend on
// scheduling. Single-class resamples are redrawn, at most 10 times per
// iteration (MetricError beyond that).
BootstrapStats bootstrap_eval(const std::vector<double>& scores, const std::vector<int>& labels,
                              const BootstrapConfig& config);

struct EvalReport {
  std::string method;  // "epr_baseline" or "wepr"
  double pr_auc = 0.0;
  double roc_auc = 0.0;
  BootstrapStats bootstrap;
  int n_pos = 0;
  int n_neg = 0;
};

EvalReport evaluate_scores(const std::string& method, const std::vector<double>& scores,
                           const std::vector<int>& labels, const BootstrapConfig& config);

struct SplitPlan {
  std::set<std::string> train_group_ids;
  std::set<std::string> test_group_ids;
  uint64_t seed = 0;
  double test_fraction = 0.0;
};

// Assigns every query_id group to one side by seeded hash, so membership
// depends only on the id, never on dataset order. If hashing empties a
// side, the single most extreme group is moved across. Throws SplitError
// with fewer than two distinct groups.
SplitPlan grouped_split(const std::vector<LabeledExample>& examples, double test_fraction,
                        uint64_t seed);

}  // namespace wepr

#pragma once

#include <vector>

#include "wepr/metrics.hpp"
#include "wepr/wepr_model.hpp"

namespace wepr {

// One evaluated example: its entropy profile and binary label.
struct ProfiledExample {
  SequenceEntropyProfile profile;
  int label = 0;
  std::string query_id;
};

// Profiles every labeled example; skips nothing, throws DomainError if an
// example is unlabeled.
std::vector<ProfiledExample> profile_dataset(const std::vector<LabeledExample>& examples);

// Feature matrix for training, optionally truncated to the top `k` ranks.
std::vector<FeatureExample> to_features(const std::vector<ProfiledExample>& examples, int k);

struct MethodComparison {
  EvalReport epr_baseline;
  EvalReport wepr;
};

// Scores the test set with both methods on identical data and bootstrap
// seeds. The EPR baseline enters negated (low entropy ranks valid high);
// the WEPR score is the orientation-corrected validity score.
MethodComparison compare_methods(const std::vector<ProfiledExample>& test_set,
                                 const WeprModel& model, const BootstrapConfig& config);

struct SweepRow {
  int k = 0;
  double pr_auc_mean = 0.0;
  double pr_auc_std = 0.0;
  double roc_auc_mean = 0.0;
  double roc_auc_std = 0.0;
};

// For each K (ascending): truncate features to the top K ranks, retrain on
// the train side, bootstrap-evaluate on the test side. Throws DomainError
// when some K exceeds the ranks available in the data.
std::vector<SweepRow> sweep_k(const std::vector<ProfiledExample>& examples,
                              const std::vector<int>& k_values, double test_fraction,
                              uint64_t split_seed, const TrainConfig& train_config,
                              const BootstrapConfig& bootstrap_config);

}  // namespace wepr

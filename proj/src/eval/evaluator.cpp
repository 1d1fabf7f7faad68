#include "wepr/evaluator.hpp"

#include <algorithm>

#include "wepr/errors.hpp"

namespace wepr {

std::vector<ProfiledExample> profile_dataset(const std::vector<LabeledExample>& examples) {
  std::vector<ProfiledExample> out;
  out.reserve(examples.size());
  for (const LabeledExample& ex : examples) {
    if (!ex.label) throw DomainError("unlabeled example '" + ex.record.query_id + "' in labeled pipeline");
    out.push_back({sequence_profile(ex.record), *ex.label, ex.record.query_id});
  }
  return out;
}

std::vector<FeatureExample> to_features(const std::vector<ProfiledExample>& examples, int k) {
  std::vector<FeatureExample> out;
  out.reserve(examples.size());
  for (const ProfiledExample& ex : examples) {
    if (k > static_cast<int>(ex.profile.mean_contributions.size()))
      throw DomainError("requested K=" + std::to_string(k) + " exceeds the " +
                        std::to_string(ex.profile.mean_contributions.size()) +
                        " ranks available in the data");
    FeatureExample fe;
    fe.features.assign(ex.profile.mean_contributions.begin(),
                       ex.profile.mean_contributions.begin() + k);
    fe.label = ex.label;
    out.push_back(std::move(fe));
  }
  return out;
}

MethodComparison compare_methods(const std::vector<ProfiledExample>& test_set,
                                 const WeprModel& model, const BootstrapConfig& config) {
  if (test_set.empty()) throw MetricError("empty test set");

  std::vector<double> epr_scores, wepr_scores;
  std::vector<int> labels;
  epr_scores.reserve(test_set.size());
  wepr_scores.reserve(test_set.size());
  labels.reserve(test_set.size());
  for (const ProfiledExample& ex : test_set) {
    epr_scores.push_back(-ex.profile.epr);
    const SequenceScore s = score_sequence(model, ex.profile);
    wepr_scores.push_back(validity_score(model, s.wepr));
    labels.push_back(ex.label);
  }

  MethodComparison cmp;
  cmp.epr_baseline = evaluate_scores("epr_baseline", epr_scores, labels, config);
  cmp.wepr = evaluate_scores("wepr", wepr_scores, labels, config);
  return cmp;
}

std::vector<SweepRow> sweep_k(const std::vector<ProfiledExample>& examples,
                              const std::vector<int>& k_values, double test_fraction,
                              uint64_t split_seed, const TrainConfig& train_config,
                              const BootstrapConfig& bootstrap_config) {
  if (k_values.empty()) throw DomainError("sweep_k: empty K list");

  std::vector<int> ks(k_values);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  if (ks.front() < 1) throw DomainError("sweep_k: K must be >= 1");

  // Group membership must match the other commands, so reuse grouped_split
  // on a shell dataset carrying only the query ids.
  std::vector<LabeledExample> shells;
  shells.reserve(examples.size());
  for (const ProfiledExample& ex : examples) {
    LabeledExample shell;
    shell.record.query_id = ex.query_id;
    shells.push_back(std::move(shell));
  }
  const SplitPlan plan = grouped_split(shells, test_fraction, split_seed);

  std::vector<SweepRow> rows;
  rows.reserve(ks.size());
  for (int k : ks) {
    std::vector<FeatureExample> train_side, test_side;
    for (const ProfiledExample& ex : examples) {
      const bool in_test = plan.test_group_ids.count(ex.query_id) > 0;
      FeatureExample fe;
      if (k > static_cast<int>(ex.profile.mean_contributions.size()))
        throw DomainError("sweep_k: K=" + std::to_string(k) + " exceeds available ranks");
      fe.features.assign(ex.profile.mean_contributions.begin(),
                         ex.profile.mean_contributions.begin() + k);
      fe.label = ex.label;
      (in_test ? test_side : train_side).push_back(std::move(fe));
    }

    const WeprModel model = train(train_side, train_config);
    std::vector<double> scores;
    std::vector<int> labels;
    scores.reserve(test_side.size());
    for (const FeatureExample& fe : test_side) {
      const double wepr = score_token(model, fe.features);
      scores.push_back(validity_score(model, wepr));
      labels.push_back(fe.label);
    }

    const BootstrapStats stats = bootstrap_eval(scores, labels, bootstrap_config);
    rows.push_back({k, stats.pr_auc_mean, stats.pr_auc_std, stats.roc_auc_mean, stats.roc_auc_std});
  }
  return rows;
}

}  // namespace wepr

#include "wepr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "wepr/errors.hpp"
#include "wepr/rng.hpp"

namespace wepr {
namespace {

void check_sizes(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw MetricError("scores and labels differ in length");
  if (scores.empty()) throw MetricError("empty inputs");
}

}  // namespace

double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  check_sizes(scores, labels);
  const size_t n = scores.size();

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0.0;
  size_t n_pos = 0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) {
        rank_sum_pos += midrank;
        ++n_pos;
      }
    }
    i = j;
  }
  const size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw MetricError("roc_auc requires both classes");
  return (rank_sum_pos - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1)) /
         (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double pr_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  check_sizes(scores, labels);
  const size_t n = scores.size();

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  size_t total_pos = 0;
  for (int y : labels) total_pos += static_cast<size_t>(y == 1);
  if (total_pos == 0) throw MetricError("pr_auc requires at least one positive");

  double ap = 0.0;
  double recall_prev = 0.0;
  size_t tp = 0, fp = 0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    for (size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) ++tp;
      else ++fp;
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(total_pos);
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    ap += (recall - recall_prev) * precision;
    recall_prev = recall;
    i = j;
  }
  return ap;
}

BootstrapStats bootstrap_eval(const std::vector<double>& scores, const std::vector<int>& labels,
                              const BootstrapConfig& config) {
  check_sizes(scores, labels);
  if (config.iterations < 1) throw MetricError("bootstrap iterations must be >= 1");
  roc_auc(scores, labels);  // validates both classes present

  const size_t n = scores.size();
  std::vector<double> pr_values, roc_values;
  pr_values.reserve(static_cast<size_t>(config.iterations));
  roc_values.reserve(static_cast<size_t>(config.iterations));

  std::vector<double> s(n);
  std::vector<int> y(n);
  for (int it = 0; it < config.iterations; ++it) {
    Rng rng = Rng::substream(config.seed, static_cast<uint64_t>(it));
    bool usable = false;
    for (int redraw = 0; redraw <= 10 && !usable; ++redraw) {
      bool pos = false, neg = false;
      for (size_t i = 0; i < n; ++i) {
        const size_t pick = static_cast<size_t>(rng.next_below(n));
        s[i] = scores[pick];
        y[i] = labels[pick];
        (labels[pick] == 1 ? pos : neg) = true;
      }
      usable = pos && neg;
    }
    if (!usable) throw MetricError("bootstrap: single-class resamples persisted past 10 redraws");
    pr_values.push_back(pr_auc(s, y));
    roc_values.push_back(roc_auc(s, y));
  }

  auto mean_std = [](const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());  // population variance: std 0 at one iteration
    return std::make_pair(mean, std::sqrt(var));
  };

  BootstrapStats stats;
  stats.iterations = config.iterations;
  std::tie(stats.pr_auc_mean, stats.pr_auc_std) = mean_std(pr_values);
  std::tie(stats.roc_auc_mean, stats.roc_auc_std) = mean_std(roc_values);
  return stats;
}

EvalReport evaluate_scores(const std::string& method, const std::vector<double>& scores,
                           const std::vector<int>& labels, const BootstrapConfig& config) {
  EvalReport report;
  report.method = method;
  report.roc_auc = roc_auc(scores, labels);
  report.pr_auc = pr_auc(scores, labels);
  report.bootstrap = bootstrap_eval(scores, labels, config);
  for (int y : labels) (y == 1 ? report.n_pos : report.n_neg) += 1;
  return report;
}

SplitPlan grouped_split(const std::vector<LabeledExample>& examples, double test_fraction,
                        uint64_t seed) {
  if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
    throw DomainError("test_fraction must lie in (0, 1)");

  // Group hash -> side; map is keyed by id so iteration order is stable.
  uint64_t seed_state = seed;
  const uint64_t seed_mix = splitmix64(seed_state);
  std::map<std::string, double> group_draw;
  for (const LabeledExample& ex : examples) {
    const std::string& id = ex.record.query_id;
    if (group_draw.count(id)) continue;
    uint64_t sm = fnv1a64(id.data(), id.size()) ^ seed_mix;
    group_draw[id] = static_cast<double>(splitmix64(sm) >> 11) * 0x1.0p-53;
  }
  if (group_draw.size() < 2) throw SplitError("grouped_split requires at least two distinct query_ids");

  SplitPlan plan;
  plan.seed = seed;
  plan.test_fraction = test_fraction;
  for (const auto& [id, u] : group_draw)
    (u < test_fraction ? plan.test_group_ids : plan.train_group_ids).insert(id);

  // Hashing can empty one side; move the group nearest the boundary over.
  auto move_extreme = [&](std::set<std::string>& from, std::set<std::string>& to, bool lowest) {
    std::string pick;
    double best = lowest ? 2.0 : -1.0;
    for (const std::string& id : from) {
      const double u = group_draw.at(id);
      if (lowest ? (u < best) : (u > best)) {
        best = u;
        pick = id;
      }
    }
    to.insert(pick);
    from.erase(pick);
  };
  if (plan.test_group_ids.empty()) move_extreme(plan.train_group_ids, plan.test_group_ids, true);
  else if (plan.train_group_ids.empty()) move_extreme(plan.test_group_ids, plan.train_group_ids, false);
  return plan;
}

}  // namespace wepr

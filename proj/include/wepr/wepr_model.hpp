#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wepr/entropy.hpp"

namespace wepr {

// Numerically stable logistic function, clamped into the open interval
// (0, 1) so downstream logs never blow up.
double sigmoid(double z);

// Which sequences the learned score ranks high. valid_high: larger WEPR
// means more likely valid (the trained direction when entropy correlates
// with hallucination); valid_low: larger WEPR means more likely
// hallucinated (e.g. identity weights, where WEPR equals the EPR).
enum class Orientation { valid_high, valid_low };

std::string to_string(Orientation o);
Orientation orientation_from_string(const std::string& s);

// Shape of the negative-class term in the loss. complement_sigmoid is the
// standard binary cross-entropy log(1 - sigma(z)); shifted_sigmoid uses
// log(sigma(1 - z)) instead, kept selectable for comparison.
enum class NegativeTermForm { complement_sigmoid, shifted_sigmoid };

struct TrainConfig {
  int epochs = 2000;
  double learning_rate = 0.5;
  double l2_penalty = 0.0;
  uint64_t seed = 0;
  double convergence_tol = 1e-10;
  NegativeTermForm negative_term = NegativeTermForm::complement_sigmoid;
};

struct TrainingMeta {
  int epochs = 0;  // epochs actually run
  double learning_rate = 0.0;
  double l2_penalty = 0.0;
  uint64_t seed = 0;
  std::vector<double> loss_trajectory;
};

// Affine model over per-rank entropic contributions: bias + weights . x.
struct WeprModel {
  double bias = 0.0;
  std::vector<double> weights;  // length k
  int k = 0;
  Orientation orientation = Orientation::valid_low;
  TrainingMeta training_meta;

  void validate() const;
};

// A model whose score reproduces the plain entropy sum: bias 0, unit
// weights. Scores rank hallucinated sequences high, hence valid_low.
WeprModel identity_model(int k);

struct SequenceScore {
  double wepr = 0.0;                   // bias + weights . mean_contributions
  double validity_probability = 0.0;   // sigmoid(wepr)
  std::vector<double> token_scores;    // sigmoid(per-step score), length L
  std::vector<bool> flags;             // token-level hallucination flags at 0.5
};

// bias + sum_k weights[k] * contributions[k]; contributions shorter than K
// are zero-padded. Throws DomainError when longer than K.
double score_token(const WeprModel& model, const std::vector<double>& contributions);

// Sequence score plus per-token scores. The sequence score equals the mean
// of per-step scores by linearity.
SequenceScore score_sequence(const WeprModel& model, const SequenceEntropyProfile& profile);

// Probability-like score that ranks valid sequences high regardless of the
// model's orientation; this is what evaluation compares against labels.
double validity_score(const WeprModel& model, double wepr);

// Per-token hallucination probability under the model's orientation.
double token_hallucination_score(const WeprModel& model, double token_score);

struct FeatureExample {
  std::vector<double> features;  // length k
  int label = 0;                 // 1 = valid
};

// Mean cross-entropy over the batch plus l2 on the non-bias weights, and
// its exact gradient d(loss)/d(bias, weights). Throws DomainError on an
// empty batch or mismatched feature lengths.
std::pair<double, std::vector<double>> loss_and_gradient(
    const WeprModel& model, const std::vector<FeatureExample>& batch,
    NegativeTermForm negative_term = NegativeTermForm::complement_sigmoid);

// Full-batch gradient descent from a zero model. Deterministic given the
// config. Throws TrainError on single-class batches or non-finite loss.
WeprModel train(const std::vector<FeatureExample>& dataset, const TrainConfig& config);

// flags[j] = hallucination score of token j strictly above threshold.
std::vector<bool> flag_tokens(const WeprModel& model, const SequenceScore& score,
                              double threshold = 0.5);

void save_model(const WeprModel& model, const std::string& path);
WeprModel load_model(const std::string& path);

}  // namespace wepr

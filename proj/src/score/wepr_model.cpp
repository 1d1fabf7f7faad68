#include "wepr/wepr_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "wepr/errors.hpp"
#include "wepr/kernels.hpp"

namespace wepr {
namespace {

using nlohmann::json;

// log(1 + e^z) without overflow.
double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

std::vector<double> padded(const std::vector<double>& contributions, int k) {
  if (static_cast<int>(contributions.size()) > k)
    throw DomainError("feature vector longer than model K (" +
                      std::to_string(contributions.size()) + " > " + std::to_string(k) + ")");
  std::vector<double> x(contributions);
  x.resize(static_cast<size_t>(k), 0.0);
  return x;
}

}  // namespace

double sigmoid(double z) {
  double p;
  if (z >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-z));
  } else {
    const double e = std::exp(z);
    p = e / (1.0 + e);
  }
  // Keep the result strictly inside (0, 1).
  if (p >= 1.0) p = std::nextafter(1.0, 0.0);
  if (p <= 0.0) p = std::numeric_limits<double>::denorm_min();
  return p;
}

std::string to_string(Orientation o) { return o == Orientation::valid_high ? "valid-high" : "valid-low"; }

Orientation orientation_from_string(const std::string& s) {
  if (s == "valid-high") return Orientation::valid_high;
  if (s == "valid-low") return Orientation::valid_low;
  throw DomainError("unknown orientation '" + s + "'");
}

void WeprModel::validate() const {
  if (k < 1) throw DomainError("model: k must be >= 1");
  if (static_cast<int>(weights.size()) != k) throw DomainError("model: weights length must equal k");
  for (double w : weights)
    if (!std::isfinite(w)) throw DomainError("model: non-finite weight");
  if (!std::isfinite(bias)) throw DomainError("model: non-finite bias");
}

WeprModel identity_model(int k) {
  WeprModel m;
  m.k = k;
  m.bias = 0.0;
  m.weights.assign(static_cast<size_t>(k), 1.0);
  m.orientation = Orientation::valid_low;
  return m;
}

double score_token(const WeprModel& model, const std::vector<double>& contributions) {
  model.validate();
  const std::vector<double> x = padded(contributions, model.k);
  return model.bias + kernels::active().dot(model.weights.data(), x.data(), x.size());
}

SequenceScore score_sequence(const WeprModel& model, const SequenceEntropyProfile& profile) {
  model.validate();
  // The profile's feature length is the dataset's K; a mismatch against the
  // model is a schema error, not something to pad over.
  if (static_cast<int>(profile.mean_contributions.size()) != model.k)
    throw DomainError("model K=" + std::to_string(model.k) + " does not match data K=" +
                      std::to_string(profile.mean_contributions.size()));
  const std::vector<double>& x = profile.mean_contributions;

  SequenceScore score;
  score.wepr = model.bias + kernels::active().dot(model.weights.data(), x.data(), x.size());
  score.validity_probability = sigmoid(score.wepr);
  score.token_scores.reserve(profile.per_token.size());
  for (const TokenEntropyProfile& tp : profile.per_token)
    score.token_scores.push_back(sigmoid(score_token(model, tp.contributions)));
  score.flags = flag_tokens(model, score, 0.5);
  return score;
}

double validity_score(const WeprModel& model, double wepr) {
  return model.orientation == Orientation::valid_high ? sigmoid(wepr) : sigmoid(-wepr);
}

double token_hallucination_score(const WeprModel& model, double token_score) {
  return model.orientation == Orientation::valid_high ? 1.0 - token_score : token_score;
}

std::pair<double, std::vector<double>> loss_and_gradient(const WeprModel& model,
                                                         const std::vector<FeatureExample>& batch,
                                                         NegativeTermForm negative_term) {
  model.validate();
  if (batch.empty()) throw DomainError("loss_and_gradient: empty batch");
  const int k = model.k;
  const kernels::Ops& kern = kernels::active();

  double loss = 0.0;
  std::vector<double> grad(static_cast<size_t>(k) + 1, 0.0);
  for (const FeatureExample& ex : batch) {
    if (static_cast<int>(ex.features.size()) != k)
      throw DomainError("loss_and_gradient: feature length != model K");
    const double z = model.bias + kern.dot(model.weights.data(), ex.features.data(), ex.features.size());
    double dz;
    if (negative_term == NegativeTermForm::complement_sigmoid) {
      // -[y log s(z) + (1-y) log(1 - s(z))] = softplus(z) - y z
      loss += softplus(z) - static_cast<double>(ex.label) * z;
      dz = sigmoid(z) - static_cast<double>(ex.label);
    } else {
      // -[y log s(z) + (1-y) log s(1 - z)]
      if (ex.label == 1) {
        loss += softplus(-z);
        dz = sigmoid(z) - 1.0;
      } else {
        loss += softplus(z - 1.0);
        dz = sigmoid(z - 1.0);
      }
    }
    grad[0] += dz;
    kern.axpy(dz, ex.features.data(), grad.data() + 1, ex.features.size());
  }

  const double inv_n = 1.0 / static_cast<double>(batch.size());
  loss *= inv_n;
  for (double& g : grad) g *= inv_n;

  if (model.training_meta.l2_penalty != 0.0) {
    const double lambda = model.training_meta.l2_penalty;
    loss += lambda * kern.dot(model.weights.data(), model.weights.data(), model.weights.size());
    for (int i = 0; i < k; ++i) grad[static_cast<size_t>(i) + 1] += 2.0 * lambda * model.weights[i];
  }
  return {loss, std::move(grad)};
}

WeprModel train(const std::vector<FeatureExample>& dataset, const TrainConfig& config) {
  if (dataset.empty()) throw TrainError("degenerate labels: empty dataset");
  const int k = static_cast<int>(dataset.front().features.size());
  if (k < 1) throw TrainError("empty feature vectors");

  bool has_pos = false, has_neg = false;
  double mean_pos = 0.0, mean_neg = 0.0;  // filled after training
  for (const FeatureExample& ex : dataset) {
    if (static_cast<int>(ex.features.size()) != k)
      throw DomainError("train: inconsistent feature lengths");
    if (ex.label == 1) has_pos = true;
    else has_neg = true;
  }
  if (!has_pos || !has_neg) throw TrainError("degenerate labels: both classes required");

  WeprModel model;
  model.k = k;
  model.bias = 0.0;
  model.weights.assign(static_cast<size_t>(k), 0.0);
  model.training_meta.learning_rate = config.learning_rate;
  model.training_meta.l2_penalty = config.l2_penalty;
  model.training_meta.seed = config.seed;

  double prev_loss = std::numeric_limits<double>::infinity();
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    auto [loss, grad] = loss_and_gradient(model, dataset, config.negative_term);
    if (!std::isfinite(loss)) throw TrainError("non-finite loss at epoch " + std::to_string(epoch));
    model.training_meta.loss_trajectory.push_back(loss);
    model.training_meta.epochs = epoch + 1;

    model.bias -= config.learning_rate * grad[0];
    for (int i = 0; i < k; ++i)
      model.weights[static_cast<size_t>(i)] -= config.learning_rate * grad[static_cast<size_t>(i) + 1];

    if (std::abs(prev_loss - loss) < config.convergence_tol) break;
    prev_loss = loss;
  }

  // Fix the orientation from the trained scores: which class sits higher.
  int n_pos = 0, n_neg = 0;
  for (const FeatureExample& ex : dataset) {
    const double z =
        model.bias + kernels::active().dot(model.weights.data(), ex.features.data(), ex.features.size());
    if (ex.label == 1) {
      mean_pos += z;
      ++n_pos;
    } else {
      mean_neg += z;
      ++n_neg;
    }
  }
  model.orientation =
      (mean_pos / n_pos >= mean_neg / n_neg) ? Orientation::valid_high : Orientation::valid_low;
  return model;
}

std::vector<bool> flag_tokens(const WeprModel& model, const SequenceScore& score, double threshold) {
  if (!(threshold > 0.0) || !(threshold < 1.0))
    throw DomainError("flag_tokens: threshold must lie in (0, 1)");
  std::vector<bool> flags(score.token_scores.size());
  for (size_t j = 0; j < score.token_scores.size(); ++j)
    flags[j] = token_hallucination_score(model, score.token_scores[j]) > threshold;
  return flags;
}

void save_model(const WeprModel& model, const std::string& path) {
  model.validate();
  json meta{{"epochs", model.training_meta.epochs},
            {"learning_rate", model.training_meta.learning_rate},
            {"l2_penalty", model.training_meta.l2_penalty},
            {"seed", model.training_meta.seed},
            {"loss_trajectory", model.training_meta.loss_trajectory}};
  json doc{{"k", model.k},
           {"bias", model.bias},
           {"weights", model.weights},
           {"orientation", to_string(model.orientation)},
           {"training_meta", std::move(meta)}};
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed on " + path);
}

WeprModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IngestError("model file " + path + " is not valid JSON: " + e.what());
  }

  WeprModel model;
  try {
    model.k = doc.at("k").get<int>();
    model.bias = doc.at("bias").get<double>();
    model.weights = doc.at("weights").get<std::vector<double>>();
    model.orientation = orientation_from_string(doc.at("orientation").get<std::string>());
    const json& meta = doc.at("training_meta");
    model.training_meta.epochs = meta.at("epochs").get<int>();
    model.training_meta.learning_rate = meta.at("learning_rate").get<double>();
    model.training_meta.l2_penalty = meta.at("l2_penalty").get<double>();
    model.training_meta.seed = meta.at("seed").get<uint64_t>();
    model.training_meta.loss_trajectory = meta.at("loss_trajectory").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw IngestError("model file " + path + ": " + e.what());
  }
  model.validate();
  return model;
}

}  // namespace wepr

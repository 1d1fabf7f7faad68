#include "wepr/data_model.hpp"

#include <cmath>
#include <string>

#include "wepr/errors.hpp"

namespace wepr {

void GenerationSettings::validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw DomainError("settings: temperature must be > 0 (non-greedy decoding required)");
  if (top_k_exposed < 1) throw DomainError("settings: top_k_exposed must be >= 1");
  if (sampling_top_k && *sampling_top_k < top_k_exposed)
    throw DomainError("settings: sampling_top_k must be >= top_k_exposed");
  if (vocab_size) {
    if (*vocab_size <= top_k_exposed)
      throw DomainError("settings: vocab_size must exceed top_k_exposed");
    if (sampling_top_k && *vocab_size < *sampling_top_k)
      throw DomainError("settings: vocab_size must be >= sampling_top_k");
  }
  if (!(top_p > 0.0) || top_p > 1.0) throw DomainError("settings: top_p must be in (0, 1]");
}

void TokenDistribution::validate() const {
  if (candidates.empty()) throw DomainError("distribution: at least one candidate required");
  double sum = 0.0;
  double prev = 1.0 + kProbSumSlack;
  for (const Candidate& c : candidates) {
    if (!(c.probability > 0.0) || c.probability > 1.0 || !std::isfinite(c.probability))
      throw DomainError("distribution: probabilities must lie in (0, 1]");
    if (c.probability > prev)
      throw DomainError("distribution: candidates must be sorted by non-increasing probability");
    prev = c.probability;
    sum += c.probability;
  }
  if (sum > 1.0 + kProbSumSlack) throw IngestError("probability mass > 1");
  if (sampled_rank && (*sampled_rank < 1 || *sampled_rank > static_cast<int>(candidates.size())))
    throw DomainError("distribution: sampled_rank out of range");
}

void SequenceRecord::validate() const {
  settings.validate();
  if (steps.empty()) throw DomainError("record " + query_id + ": empty step list");
  int expect = 1;
  for (const TokenDistribution& step : steps) {
    step.validate();
    if (step.step_index != expect)
      throw DomainError("record " + query_id + ": step_index not contiguous at position " +
                        std::to_string(expect));
    if (static_cast<int>(step.candidates.size()) > settings.top_k_exposed)
      throw DomainError("record " + query_id + ": step exposes more than top_k_exposed candidates");
    ++expect;
  }
}

std::string to_string(LabelSource source) {
  switch (source) {
    case LabelSource::llm_judge: return "llm-judge";
    case LabelSource::exact_match: return "exact-match";
    case LabelSource::manual: return "manual";
    case LabelSource::synthetic: return "synthetic";
    case LabelSource::unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

LabelSource label_source_from_string(const std::string& s) {
  if (s == "llm-judge") return LabelSource::llm_judge;
  if (s == "exact-match") return LabelSource::exact_match;
  if (s == "manual") return LabelSource::manual;
  if (s == "synthetic") return LabelSource::synthetic;
  if (s == "unlabeled") return LabelSource::unlabeled;
  throw DomainError("unknown label_source '" + s + "'");
}

void LabeledExample::validate() const {
  record.validate();
  if (label && *label != 0 && *label != 1) throw DomainError("label must be 0 or 1");
}

}  // namespace wepr

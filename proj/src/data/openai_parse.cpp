#include "wepr/openai_parse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "wepr/errors.hpp"

namespace wepr {
namespace {

using nlohmann::json;

void warn(std::vector<std::string>* sink, std::string msg) {
  if (sink) sink->push_back(std::move(msg));
}

double logprob_to_probability(const json& entry) {
  if (!entry.contains("logprob") || !entry["logprob"].is_number())
    throw IngestError("top_logprobs entry without numeric logprob");
  const double lp = entry["logprob"].get<double>();
  if (!std::isfinite(lp)) throw IngestError("non-finite logprob");
  return std::exp(lp);
}

}  // namespace

SequenceRecord parse_completion_response(const std::string& raw,
                                         const GenerationSettings& settings,
                                         const std::string& query_id,
                                         const std::string& query_text,
                                         std::vector<std::string>* warnings) {
  settings.validate();

  json doc;
  try {
    doc = json::parse(raw);
  } catch (const json::exception& e) {
    // Covers both syntax errors and out-of-range numbers (e.g. 1e999).
    throw IngestError(std::string("response is not valid JSON: ") + e.what());
  }

  if (!doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty())
    throw IngestError("response has no choices");
  const json& choice = doc["choices"][0];
  if (!choice.contains("logprobs") || choice["logprobs"].is_null())
    throw IngestError("logprobs absent");
  const json& logprobs = choice["logprobs"];
  if (!logprobs.contains("content") || !logprobs["content"].is_array())
    throw IngestError("logprobs.content absent");

  SequenceRecord record;
  record.query_id = query_id;
  record.query_text = query_text;
  record.settings = settings;

  int step_index = 0;
  for (const json& entry : logprobs["content"]) {
    ++step_index;
    const std::string prefix = "step " + std::to_string(step_index) + ": ";
    if (!entry.contains("token") || !entry["token"].is_string())
      throw IngestError(prefix + "content entry without token");
    const std::string sampled_token = entry["token"].get<std::string>();
    record.answer_text += sampled_token;

    if (!entry.contains("top_logprobs") || !entry["top_logprobs"].is_array() ||
        entry["top_logprobs"].empty())
      throw IngestError(prefix + "top_logprobs absent");

    TokenDistribution dist;
    dist.step_index = step_index;
    double mass = 0.0;
    for (const json& cand : entry["top_logprobs"]) {
      if (!cand.contains("token") || !cand["token"].is_string())
        throw IngestError(prefix + "top_logprobs entry without token");
      const double prob = logprob_to_probability(cand);
      mass += prob;
      if (prob == 0.0) {
        warn(warnings, prefix + "dropped zero-probability candidate '" +
                           cand["token"].get<std::string>() + "'");
        continue;
      }
      dist.candidates.push_back({cand["token"].get<std::string>(), prob});
    }
    if (mass > 1.0 + kProbSumSlack) throw IngestError("probability mass > 1");
    if (dist.candidates.empty()) throw IngestError(prefix + "no usable candidates");

    std::stable_sort(dist.candidates.begin(), dist.candidates.end(),
                     [](const Candidate& a, const Candidate& b) {
                       return a.probability > b.probability;
                     });
    if (static_cast<int>(dist.candidates.size()) > settings.top_k_exposed) {
      warn(warnings, prefix + "truncated " + std::to_string(dist.candidates.size()) +
                         " candidates to top " + std::to_string(settings.top_k_exposed));
      dist.candidates.resize(static_cast<size_t>(settings.top_k_exposed));
    }

    for (size_t r = 0; r < dist.candidates.size(); ++r) {
      if (dist.candidates[r].token == sampled_token) {
        dist.sampled_rank = static_cast<int>(r + 1);
        break;
      }
    }
    dist.validate();
    record.steps.push_back(std::move(dist));
  }

  if (record.steps.empty()) throw IngestError("response has no content entries");
  record.validate();
  return record;
}

}  // namespace wepr

#pragma once

#include <string>
#include <vector>

#include "wepr/data_model.hpp"

namespace wepr {

// Parses an OpenAI-compatible chat-completions response body into a
// SequenceRecord. Reads choices[0].logprobs.content[i].{token,logprob} and
// .top_logprobs[j].{token,logprob}; everything else is ignored.
//
// Candidate probabilities are exp(logprob), sorted non-increasing (ties keep
// upstream order); zero-probability candidates are dropped and candidate
// lists longer than settings.top_k_exposed are truncated, both with a
// warning. sampled_rank is the position of the sampled token inside the
// ranked candidates, or empty when it is not among them.
//
// Throws IngestError on missing logprobs, non-finite logprob values, or
// exposed probability mass above 1 (+slack).
SequenceRecord parse_completion_response(const std::string& raw,
                                         const GenerationSettings& settings,
                                         const std::string& query_id = "",
                                         const std::string& query_text = "",
                                         std::vector<std::string>* warnings = nullptr);

}  // namespace wepr

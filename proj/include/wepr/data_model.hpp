#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wepr {

// Probabilities whose exposed sum may exceed 1 by this much are still
// accepted (rounding slack in upstream logprob arithmetic).
inline constexpr double kProbSumSlack = 1e-9;

// Decoding-time configuration of the generation that produced a trace.
struct GenerationSettings {
  double temperature = 1.0;                 // sampling temperature, > 0
  int top_k_exposed = 1;                    // K, number of logprobs exposed per step
  std::optional<int> sampling_top_k;        // K_samp cutoff used at generation, >= K
  std::optional<long long> vocab_size;      // |V|, > K when known
  double top_p = 1.0;                       // nucleus parameter, in (0, 1]

  void validate() const;
};

struct Candidate {
  std::string token;
  double probability = 0.0;  // in (0, 1]
};

// One generation step: the exposed top-K candidates, ranked by
// non-increasing probability. Ties keep upstream order.
struct TokenDistribution {
  int step_index = 1;                  // 1-based position in the sequence
  std::vector<Candidate> candidates;   // length in [1, K]
  // 1-based rank of the sampled token among the candidates; empty when the
  // sampled token fell outside the exposed top-K. Metadata only.
  std::optional<int> sampled_rank;

  void validate() const;
};

// A full generated answer with its per-step distributions.
struct SequenceRecord {
  std::string query_id;
  std::string query_text;
  std::string answer_text;
  std::vector<TokenDistribution> steps;  // length L >= 1, step_index 1..L
  GenerationSettings settings;

  void validate() const;
};

enum class LabelSource { llm_judge, exact_match, manual, synthetic, unlabeled };

std::string to_string(LabelSource source);
LabelSource label_source_from_string(const std::string& s);

// A record plus its sequence-level veracity label. label is empty for
// not-yet-annotated records (ingest output, judge failures).
struct LabeledExample {
  SequenceRecord record;
  std::optional<int> label;  // 1 = valid, 0 = hallucinated
  LabelSource label_source = LabelSource::unlabeled;

  void validate() const;
};

}  // namespace wepr

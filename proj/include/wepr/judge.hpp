#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wepr/data_model.hpp"

namespace wepr {

struct JudgeTask {
  std::string query_text;
  std::string generated_answer;
  std::string gold_answer;  // non-empty
  std::vector<std::string> aliases;

  void validate() const;
};

enum class JudgeKind { llm, exact_match, mock };

std::string to_string(JudgeKind kind);

struct JudgeVerdict {
  int label = 0;  // 1 = "TRUE" (valid), 0 = "FALSE"
  std::string raw_response;
  JudgeKind judge_kind = JudgeKind::mock;
  int retries_used = 0;
};

struct JudgeEndpoint {
  std::string base_url;          // e.g. http://localhost:8000
  std::string model_name;
  std::string api_key_env_var = "JUDGE_API_KEY";
  int timeout_seconds = 30;
  int max_retries = 3;
  int backoff_initial_ms = 250;  // doubles per retry
};

// Versioned grading prompt (v1), pinned verbatim so labels stay
// reproducible across runs and serving stacks.
extern const char* const kJudgePromptTemplateV1;

// Fills {q}/{gold}/{aliases}/{answer} in the v1 template; aliases join
// with ", ".
std::string render_judge_prompt(const JudgeTask& task);

// Chat transport abstraction: returns the assistant reply text for a given
// (model, message, temperature) request, or throws JudgeError. The real
// HTTP transport speaks OpenAI-compatible /v1/chat/completions; tests
// substitute scripted transports.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string complete(const std::string& model_name, const std::string& user_message,
                               double temperature) = 0;
};

std::unique_ptr<ChatTransport> make_http_transport(const JudgeEndpoint& endpoint);

// Scans a reply for the first standalone TRUE/FALSE token (case
// insensitive); empty when none is present.
std::optional<int> parse_judge_reply(const std::string& reply);

// Grades one task through the transport: temperature-0 call, reply parse,
// exponential-backoff retry on transport errors and unparseable replies.
// Throws JudgeError once retries are exhausted; never fabricates a label.
JudgeVerdict judge_llm(const JudgeTask& task, ChatTransport& transport,
                       const JudgeEndpoint& endpoint);

// Offline fallback: label 1 iff the normalized answer contains the
// normalized gold answer or any alias (lowercase, punctuation stripped,
// whitespace collapsed).
JudgeVerdict judge_exact_match(const JudgeTask& task);

std::string normalize_answer(const std::string& text);

// Per-record gold answers for annotation, keyed by query_id.
struct GoldAnswer {
  std::string gold_answer;
  std::vector<std::string> aliases;
};

}  // namespace wepr

#include "wepr/judge.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "wepr/errors.hpp"

namespace wepr {
namespace {

using nlohmann::json;

void replace_all(std::string& text, const std::string& needle, const std::string& value) {
  size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    text.replace(pos, needle.size(), value);
    pos += value.size();
  }
}

class HttpChatTransport final : public ChatTransport {
 public:
  explicit HttpChatTransport(const JudgeEndpoint& endpoint) : endpoint_(endpoint) {
    const char* key = std::getenv(endpoint.api_key_env_var.c_str());
    if (!key)
      throw JudgeError("api key environment variable '" + endpoint.api_key_env_var + "' is not set");
    api_key_ = key;
  }

  std::string complete(const std::string& model_name, const std::string& user_message,
                       double temperature) override {
    httplib::Client client(endpoint_.base_url);
    client.set_connection_timeout(endpoint_.timeout_seconds, 0);
    client.set_read_timeout(endpoint_.timeout_seconds, 0);

    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    const json body{{"model", model_name},
                    {"messages", json::array({json{{"role", "user"}, {"content", user_message}}})},
                    {"temperature", temperature}};
    auto res = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
    if (!res) throw JudgeError("transport failure against " + endpoint_.base_url);
    if (res->status != 200)
      throw JudgeError("judge endpoint returned HTTP " + std::to_string(res->status));

    try {
      const json doc = json::parse(res->body);
      return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw JudgeError(std::string("malformed completion response: ") + e.what());
    }
  }

 private:
  JudgeEndpoint endpoint_;
  std::string api_key_;
};

}  // namespace

const char* const kJudgePromptTemplateV1 =
    "You are a strict grader. Question: {q}\nReference answer: {gold}\nAccepted aliases: "
    "{aliases}\nCandidate answer: {answer}\nReply with exactly one word: TRUE if the candidate is "
    "semantically correct, otherwise FALSE.";

void JudgeTask::validate() const {
  if (gold_answer.empty()) throw DomainError("judge task: gold_answer must be non-empty");
}

std::string to_string(JudgeKind kind) {
  switch (kind) {
    case JudgeKind::llm: return "llm";
    case JudgeKind::exact_match: return "exact-match";
    case JudgeKind::mock: return "mock";
  }
  return "mock";
}

std::string render_judge_prompt(const JudgeTask& task) {
  std::string aliases;
  for (size_t i = 0; i < task.aliases.size(); ++i) {
    if (i) aliases += ", ";
    aliases += task.aliases[i];
  }
  std::string prompt = kJudgePromptTemplateV1;
  replace_all(prompt, "{q}", task.query_text);
  replace_all(prompt, "{gold}", task.gold_answer);
  replace_all(prompt, "{aliases}", aliases);
  replace_all(prompt, "{answer}", task.generated_answer);
  return prompt;
}

std::unique_ptr<ChatTransport> make_http_transport(const JudgeEndpoint& endpoint) {
  return std::make_unique<HttpChatTransport>(endpoint);
}

std::optional<int> parse_judge_reply(const std::string& reply) {
  std::string token;
  auto flush = [&]() -> std::optional<int> {
    if (token == "true") return 1;
    if (token == "false") return 0;
    token.clear();
    return std::nullopt;
  };
  for (char ch : reply) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      token += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    } else if (!token.empty()) {
      if (auto v = flush()) return v;
    }
  }
  if (!token.empty())
    if (auto v = flush()) return v;
  return std::nullopt;
}

JudgeVerdict judge_llm(const JudgeTask& task, ChatTransport& transport,
                       const JudgeEndpoint& endpoint) {
  task.validate();
  const std::string prompt = render_judge_prompt(task);

  std::string last_error = "no attempts made";
  int backoff_ms = endpoint.backoff_initial_ms;
  for (int attempt = 0; attempt <= endpoint.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
      backoff_ms *= 2;
    }
    try {
      const std::string reply = transport.complete(endpoint.model_name, prompt, 0.0);
      if (auto label = parse_judge_reply(reply))
        return {*label, reply, JudgeKind::llm, attempt};
      last_error = "unparseable judge reply: '" + reply + "'";
    } catch (const JudgeError& e) {
      last_error = e.what();
    }
  }
  throw JudgeError("judge failed after " + std::to_string(endpoint.max_retries) +
                   " retries: " + last_error);
}

std::string normalize_answer(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char ch : text) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isspace(u)) {
      pending_space = !out.empty();
    } else if (std::ispunct(u)) {
      // dropped entirely
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += static_cast<char>(std::tolower(u));
    }
  }
  return out;
}

JudgeVerdict judge_exact_match(const JudgeTask& task) {
  task.validate();
  const std::string answer = normalize_answer(task.generated_answer);
  auto matches = [&](const std::string& target) {
    const std::string t = normalize_answer(target);
    return !t.empty() && answer.find(t) != std::string::npos;
  };
  int label = matches(task.gold_answer) ? 1 : 0;
  for (const std::string& alias : task.aliases)
    if (label == 0 && matches(alias)) label = 1;
  return {label, "", JudgeKind::exact_match, 0};
}

}  // namespace wepr

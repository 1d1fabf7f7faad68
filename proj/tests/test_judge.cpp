#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "wepr/errors.hpp"
#include "wepr/judge.hpp"

using namespace wepr;

namespace {

// Scripted transport: replays canned replies, records requests.
class ScriptedTransport final : public ChatTransport {
 public:
  explicit ScriptedTransport(std::vector<std::string> replies) : replies_(std::move(replies)) {}

  std::string complete(const std::string&, const std::string& user_message, double temperature) override {
    last_message = user_message;
    last_temperature = temperature;
    if (calls >= replies_.size()) throw JudgeError("transport failure (scripted)");
    return replies_[calls++];
  }

  size_t calls = 0;
  std::string last_message;
  double last_temperature = -1.0;

 private:
  std::vector<std::string> replies_;
};

JudgeEndpoint fast_endpoint(int max_retries = 2) {
  JudgeEndpoint ep;
  ep.model_name = "judge-model";
  ep.max_retries = max_retries;
  ep.backoff_initial_ms = 1;
  return ep;
}

JudgeTask capital_task() {
  return {"What is the capital of France?", "It is Paris.", "Paris", {"city of light"}};
}

}  // namespace

TEST_CASE("prompt template: exact v1 rendering") {
  const std::string prompt = render_judge_prompt(capital_task());
  CHECK(prompt ==
        "You are a strict grader. Question: What is the capital of France?\n"
        "Reference answer: Paris\n"
        "Accepted aliases: city of light\n"
        "Candidate answer: It is Paris.\n"
        "Reply with exactly one word: TRUE if the candidate is semantically correct, "
        "otherwise FALSE.");
}

TEST_CASE("parse_judge_reply: standalone token scan") {
  CHECK(parse_judge_reply("TRUE") == 1);
  CHECK(parse_judge_reply("true.") == 1);
  CHECK(parse_judge_reply("The answer is false.") == 0);
  CHECK(parse_judge_reply("  False\n") == 0);
  CHECK(parse_judge_reply("untrue") == std::nullopt);
  CHECK(parse_judge_reply("maybe") == std::nullopt);
  CHECK(parse_judge_reply("") == std::nullopt);
  CHECK(parse_judge_reply("verdict: TRUE, not false") == 1);  // first token wins
}

TEST_CASE("judge_llm: verdicts from scripted replies") {
  ScriptedTransport yes({"TRUE"});
  const JudgeVerdict v1 = judge_llm(capital_task(), yes, fast_endpoint());
  CHECK(v1.label == 1);
  CHECK(v1.judge_kind == JudgeKind::llm);
  CHECK(v1.retries_used == 0);
  CHECK(yes.last_temperature == 0.0);
  CHECK(yes.last_message.find("Candidate answer: It is Paris.") != std::string::npos);

  ScriptedTransport prose({"The answer is false."});
  CHECK(judge_llm(capital_task(), prose, fast_endpoint()).label == 0);
}

TEST_CASE("judge_llm: retries then gives up without fabricating") {
  ScriptedTransport vague({"maybe", "maybe", "maybe"});
  CHECK_THROWS_AS(judge_llm(capital_task(), vague, fast_endpoint(2)), JudgeError);
  CHECK(vague.calls == 3);  // initial + 2 retries

  ScriptedTransport flaky({"hmm", "TRUE"});
  const JudgeVerdict v = judge_llm(capital_task(), flaky, fast_endpoint(2));
  CHECK(v.label == 1);
  CHECK(v.retries_used == 1);
}

TEST_CASE("judge_llm: transport errors are retried") {
  // Scripted transport throws once replies run out; one valid reply after
  // zero means first call succeeds, so script an empty list to force errors.
  ScriptedTransport dead({});
  CHECK_THROWS_AS(judge_llm(capital_task(), dead, fast_endpoint(1)), JudgeError);
  CHECK(dead.calls == 0);  // throws before returning any reply
}

TEST_CASE("judge task validation") {
  JudgeTask task = capital_task();
  task.gold_answer.clear();
  CHECK_THROWS_AS(task.validate(), DomainError);
}

TEST_CASE("judge_exact_match: normalization") {
  CHECK(judge_exact_match({"q", "Paris.", "paris", {}}).label == 1);
  CHECK(judge_exact_match({"q", "London", "Paris", {}}).label == 0);
  CHECK(judge_exact_match({"q", "the city of Light", "Paris", {"City of Light"}}).label == 1);
  CHECK(judge_exact_match({"q", "  PARIS,  france ", "paris", {}}).label == 1);
  CHECK(judge_exact_match({"q", "par is", "paris", {}}).label == 0);

  const JudgeVerdict v = judge_exact_match({"q", "x", "y", {}});
  CHECK(v.judge_kind == JudgeKind::exact_match);

  CHECK(normalize_answer("  The   Answer!!  ") == "the answer");
  CHECK(normalize_answer("don't") == "dont");
}

TEST_CASE("http transport: integration against a local mock server") {
  httplib::Server server;
  std::atomic<int> hits{0};
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    const auto body = nlohmann::json::parse(req.body);
    CHECK(body.at("temperature").get<double>() == 0.0);
    CHECK(body.at("model").get<std::string>() == "judge-model");
    CHECK(req.get_header_value("Authorization") == "Bearer test-key");
    const std::string content =
        body.at("messages").at(0).at("content").get<std::string>().find("Paris") != std::string::npos
            ? "TRUE"
            : "FALSE";
    const nlohmann::json reply{
        {"choices", nlohmann::json::array({{{"message", {{"role", "assistant"}, {"content", content}}}}})}};
    res.set_content(reply.dump(), "application/json");
  });

  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread runner([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  setenv("WEPR_TEST_JUDGE_KEY", "test-key", 1);
  JudgeEndpoint ep = fast_endpoint();
  ep.base_url = "http://127.0.0.1:" + std::to_string(port);
  ep.api_key_env_var = "WEPR_TEST_JUDGE_KEY";

  auto transport = make_http_transport(ep);
  const JudgeVerdict v = judge_llm(capital_task(), *transport, ep);
  CHECK(v.label == 1);
  CHECK(hits == 1);

  server.stop();
  runner.join();
}

TEST_CASE("http transport: missing api key env var") {
  unsetenv("WEPR_MISSING_KEY_VAR");
  JudgeEndpoint ep = fast_endpoint();
  ep.api_key_env_var = "WEPR_MISSING_KEY_VAR";
  CHECK_THROWS_AS(make_http_transport(ep), JudgeError);
}

TEST_CASE("http transport: unreachable endpoint raises after retries") {
  setenv("WEPR_TEST_JUDGE_KEY", "test-key", 1);
  JudgeEndpoint ep = fast_endpoint(1);
  ep.base_url = "http://127.0.0.1:9";  // discard port, nothing listens
  ep.api_key_env_var = "WEPR_TEST_JUDGE_KEY";
  ep.timeout_seconds = 1;
  auto transport = make_http_transport(ep);
  CHECK_THROWS_AS(judge_llm(capital_task(), *transport, ep), JudgeError);
}

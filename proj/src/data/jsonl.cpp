#include "wepr/jsonl.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <utility>

#include "wepr/errors.hpp"

namespace wepr {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key) {
  if (!obj.contains(key)) throw IngestError(std::string("missing field ") + key);
  return obj.at(key);
}

}  // namespace

json example_to_json(const LabeledExample& example) {
  const SequenceRecord& r = example.record;
  json settings{{"temperature", r.settings.temperature},
                {"top_k_exposed", r.settings.top_k_exposed},
                {"sampling_top_k", r.settings.sampling_top_k ? json(*r.settings.sampling_top_k)
                                                             : json(nullptr)},
                {"vocab_size", r.settings.vocab_size ? json(*r.settings.vocab_size) : json(nullptr)},
                {"top_p", r.settings.top_p}};

  json steps = json::array();
  json sampled_ranks = json::array();
  for (const TokenDistribution& step : r.steps) {
    json cands = json::array();
    for (const Candidate& c : step.candidates) cands.push_back(json::array({c.token, c.probability}));
    steps.push_back(std::move(cands));
    sampled_ranks.push_back(step.sampled_rank ? json(*step.sampled_rank) : json(nullptr));
  }

  return json{{"query_id", r.query_id},
              {"query", r.query_text},
              {"answer", r.answer_text},
              {"label", example.label ? json(*example.label) : json(nullptr)},
              {"label_source", to_string(example.label_source)},
              {"settings", std::move(settings)},
              {"steps", std::move(steps)},
              {"sampled_ranks", std::move(sampled_ranks)}};
}

LabeledExample example_from_json(const json& line) {
  if (!line.is_object()) throw IngestError("line is not a JSON object");

  LabeledExample example;
  SequenceRecord& r = example.record;
  r.query_id = require(line, "query_id").get<std::string>();
  r.query_text = require(line, "query").get<std::string>();
  r.answer_text = require(line, "answer").get<std::string>();

  const json& label = require(line, "label");
  if (!label.is_null()) example.label = label.get<int>();
  example.label_source = label_source_from_string(require(line, "label_source").get<std::string>());

  const json& settings = require(line, "settings");
  r.settings.temperature = require(settings, "temperature").get<double>();
  r.settings.top_k_exposed = require(settings, "top_k_exposed").get<int>();
  if (!require(settings, "sampling_top_k").is_null())
    r.settings.sampling_top_k = settings.at("sampling_top_k").get<int>();
  if (!require(settings, "vocab_size").is_null())
    r.settings.vocab_size = settings.at("vocab_size").get<long long>();
  r.settings.top_p = require(settings, "top_p").get<double>();

  const json& steps = require(line, "steps");
  const json& ranks = require(line, "sampled_ranks");
  if (!steps.is_array() || !ranks.is_array() || steps.size() != ranks.size())
    throw IngestError("steps and sampled_ranks must be arrays of equal length");

  int step_index = 0;
  for (size_t i = 0; i < steps.size(); ++i) {
    TokenDistribution dist;
    dist.step_index = ++step_index;
    for (const json& pair : steps[i]) {
      if (!pair.is_array() || pair.size() != 2)
        throw IngestError("candidate must be a [token, probability] pair");
      dist.candidates.push_back({pair[0].get<std::string>(), pair[1].get<double>()});
    }
    if (!ranks[i].is_null()) dist.sampled_rank = ranks[i].get<int>();
    r.steps.push_back(std::move(dist));
  }

  example.validate();
  return example;
}

std::string example_to_line(const LabeledExample& example) { return example_to_json(example).dump(); }

std::vector<LabeledExample> read_jsonl_dataset(const std::string& path,
                                               std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::vector<LabeledExample> examples;
  std::set<std::pair<std::string, size_t>> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      examples.push_back(example_from_json(json::parse(line)));
    } catch (const json::parse_error&) {
      throw IngestError("line " + std::to_string(line_no) + ": invalid JSON");
    } catch (const Error& e) {
      throw IngestError("line " + std::to_string(line_no) + ": " + e.what());
    }
    const LabeledExample& ex = examples.back();
    const auto key = std::make_pair(ex.record.query_id, std::hash<std::string>{}(ex.record.answer_text));
    if (!seen.insert(key).second && warnings)
      warnings->push_back("line " + std::to_string(line_no) + ": duplicate (query_id, answer) pair '" +
                          ex.record.query_id + "'; kept");
  }
  return examples;
}

void write_jsonl_dataset(const std::vector<LabeledExample>& examples, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const LabeledExample& example : examples) out << example_to_line(example) << '\n';
  if (!out) throw IoError("write failed on " + path);
}

}  // namespace wepr

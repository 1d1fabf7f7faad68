// wepr: hallucination scoring for LLM answers from top-K logprob traces.
//
// Subcommands: ingest, annotate, score, train, eval, sweep-k, flag, synth.
// Exit codes: 0 ok, 1 generic failure, 2 partial ingest, 3 shape/schema
// mismatch, 4 degenerate training data, 5 metric failure, 6 network failure.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wepr/errors.hpp"
#include "wepr/evaluator.hpp"
#include "wepr/jsonl.hpp"
#include "wepr/judge.hpp"
#include "wepr/metrics.hpp"
#include "wepr/openai_parse.hpp"
#include "wepr/report.hpp"
#include "wepr/synth.hpp"
#include "wepr/wepr_model.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitGeneric = 1;
constexpr int kExitPartialIngest = 2;
constexpr int kExitShapeMismatch = 3;
constexpr int kExitDegenerateTraining = 4;
constexpr int kExitMetricFailure = 5;
constexpr int kExitNetworkFailure = 6;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const wepr::JudgeError*>(&e)) return kExitNetworkFailure;
  if (dynamic_cast<const wepr::MetricError*>(&e)) return kExitMetricFailure;
  if (dynamic_cast<const wepr::TrainError*>(&e)) return kExitDegenerateTraining;
  if (dynamic_cast<const wepr::SplitError*>(&e)) return kExitDegenerateTraining;
  if (dynamic_cast<const wepr::DomainError*>(&e)) return kExitShapeMismatch;
  if (dynamic_cast<const wepr::IngestError*>(&e)) return kExitShapeMismatch;
  return kExitGeneric;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw wepr::IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw wepr::IoError("write failed on " + path);
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) std::cout << content;
  else write_text_file(path, content);
}

// ---------------------------------------------------------------------------
// ingest

struct IngestArgs {
  std::string input;
  std::string output;
  double temperature = 1.0;
  int top_k_exposed = 15;
  int sampling_top_k = 0;  // 0 = unset
  long long vocab_size = 0;
  double top_p = 1.0;
};

int cmd_ingest(const IngestArgs& args) {
  wepr::GenerationSettings settings;
  settings.temperature = args.temperature;
  settings.top_k_exposed = args.top_k_exposed;
  if (args.sampling_top_k > 0) settings.sampling_top_k = args.sampling_top_k;
  if (args.vocab_size > 0) settings.vocab_size = args.vocab_size;
  settings.top_p = args.top_p;
  settings.validate();

  std::vector<fs::path> files;
  const fs::path input(args.input);
  if (fs::is_directory(input)) {
    for (const auto& entry : fs::directory_iterator(input))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) std::cerr << "warning: no files in " << args.input << "\n";
  } else if (fs::is_regular_file(input)) {
    files.push_back(input);
  } else {
    throw wepr::IoError("input path does not exist: " + args.input);
  }

  std::vector<wepr::LabeledExample> dataset;
  std::vector<std::string> failures;
  for (const fs::path& file : files) {
    std::ifstream in(file);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      std::vector<std::string> warnings;
      wepr::LabeledExample example;
      example.record = wepr::parse_completion_response(buf.str(), settings, file.stem().string(), "",
                                                       &warnings);
      for (const std::string& w : warnings) std::cerr << file.string() << ": warning: " << w << "\n";
      const auto& steps = example.record.steps;
      double mean_k = 0.0;
      for (const auto& s : steps) mean_k += static_cast<double>(s.candidates.size());
      mean_k /= static_cast<double>(steps.size());
      std::cout << file.string() << ": 1 sequence, " << steps.size() << " steps, mean K exposed "
                << mean_k << "\n";
      dataset.push_back(std::move(example));
    } catch (const wepr::Error& e) {
      failures.push_back(file.string() + ": " + e.what());
    }
  }

  wepr::write_jsonl_dataset(dataset, args.output);
  std::cout << "wrote " << dataset.size() << " records to " << args.output << "\n";
  if (!failures.empty()) {
    std::cerr << failures.size() << " file(s) failed:\n";
    for (const std::string& f : failures) std::cerr << "  " << f << "\n";
    return kExitPartialIngest;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// annotate

struct AnnotateArgs {
  std::string input;
  std::string output;
  std::string gold_path;
  std::string judge = "exact-match";
  std::string endpoint_url = "http://localhost:8000";
  std::string judge_model = "judge";
  std::string api_key_env = "JUDGE_API_KEY";
  int timeout_seconds = 30;
  int max_retries = 3;
  int backoff_ms = 250;
};

std::map<std::string, wepr::GoldAnswer> read_gold_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw wepr::IoError("cannot open gold file " + path);
  std::map<std::string, wepr::GoldAnswer> gold;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json doc = json::parse(line);
      wepr::GoldAnswer g;
      g.gold_answer = doc.at("gold_answer").get<std::string>();
      if (doc.contains("aliases")) g.aliases = doc.at("aliases").get<std::vector<std::string>>();
      gold[doc.at("query_id").get<std::string>()] = std::move(g);
    } catch (const json::exception& e) {
      throw wepr::IngestError("gold file line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return gold;
}

int cmd_annotate(const AnnotateArgs& args) {
  auto dataset = wepr::read_jsonl_dataset(args.input);
  const auto gold = read_gold_file(args.gold_path);

  wepr::JudgeEndpoint endpoint;
  endpoint.base_url = args.endpoint_url;
  endpoint.model_name = args.judge_model;
  endpoint.api_key_env_var = args.api_key_env;
  endpoint.timeout_seconds = args.timeout_seconds;
  endpoint.max_retries = args.max_retries;
  endpoint.backoff_initial_ms = args.backoff_ms;

  std::unique_ptr<wepr::ChatTransport> transport;
  if (args.judge == "llm") transport = wepr::make_http_transport(endpoint);
  else if (args.judge != "exact-match")
    throw wepr::DomainError("--judge must be llm or exact-match");

  size_t judged = 0, failed = 0;
  for (wepr::LabeledExample& example : dataset) {
    const auto it = gold.find(example.record.query_id);
    if (it == gold.end()) {
      std::cerr << "warning: no gold answer for query_id '" << example.record.query_id
                << "'; left unlabeled\n";
      example.label.reset();
      example.label_source = wepr::LabelSource::unlabeled;
      continue;
    }
    wepr::JudgeTask task{example.record.query_text, example.record.answer_text,
                         it->second.gold_answer, it->second.aliases};
    try {
      const wepr::JudgeVerdict verdict = args.judge == "llm"
                                             ? wepr::judge_llm(task, *transport, endpoint)
                                             : wepr::judge_exact_match(task);
      example.label = verdict.label;
      example.label_source = args.judge == "llm" ? wepr::LabelSource::llm_judge
                                                 : wepr::LabelSource::exact_match;
      ++judged;
    } catch (const wepr::JudgeError& e) {
      std::cerr << "judge failure on '" << example.record.query_id << "': " << e.what() << "\n";
      example.label.reset();
      example.label_source = wepr::LabelSource::unlabeled;
      ++failed;
    }
  }

  wepr::write_jsonl_dataset(dataset, args.output);
  std::cout << "annotated " << judged << "/" << dataset.size() << " records ("
            << failed << " judge failures) -> " << args.output << "\n";
  return failed > 0 ? kExitNetworkFailure : kExitOk;
}

// ---------------------------------------------------------------------------
// score

struct ScoreArgs {
  std::string input;
  std::string output;
  std::string model_path;
};

int cmd_score(const ScoreArgs& args) {
  const auto dataset = wepr::read_jsonl_dataset(args.input);
  std::optional<wepr::WeprModel> model;
  if (!args.model_path.empty()) model = wepr::load_model(args.model_path);

  std::ofstream out(args.output, std::ios::trunc);
  if (!out) throw wepr::IoError("cannot open " + args.output + " for writing");

  for (const wepr::LabeledExample& example : dataset) {
    const wepr::SequenceEntropyProfile profile = wepr::sequence_profile(example.record);
    json line = wepr::example_to_json(example);
    line["epr"] = profile.epr;

    double residual_mean = 0.0;
    double full_mean = 0.0, trunc_mean = 0.0;
    bool has_full = true, has_trunc = true;
    for (const wepr::TokenEntropyProfile& tp : profile.per_token) {
      residual_mean += tp.residual_mass;
      if (tp.tail_bound_full) full_mean += *tp.tail_bound_full;
      else has_full = false;
      if (tp.tail_bound_truncated) trunc_mean += *tp.tail_bound_truncated;
      else has_trunc = false;
    }
    const double inv_len = 1.0 / static_cast<double>(profile.per_token.size());
    line["residual_mass_mean"] = residual_mean * inv_len;
    if (has_full) line["tail_bound_full_mean"] = full_mean * inv_len;
    if (has_trunc) line["tail_bound_truncated_mean"] = trunc_mean * inv_len;

    // Sequence-level sufficiency against the tightest available bound;
    // omitted when infinite (no unexposed mass anywhere).
    std::optional<double> bound_mean;
    if (has_trunc) bound_mean = trunc_mean * inv_len;
    else if (has_full) bound_mean = full_mean * inv_len;
    if (bound_mean) {
      const double ratio = wepr::sufficiency_ratio(profile.epr, *bound_mean);
      if (std::isfinite(ratio)) line["sufficiency_ratio"] = ratio;
    }

    if (model) {
      const wepr::SequenceScore score = wepr::score_sequence(*model, profile);
      line["wepr"] = score.wepr;
      line["validity_probability"] = score.validity_probability;
      line["orientation"] = wepr::to_string(model->orientation);
      json token_scores = json::array();
      json hall_scores = json::array();
      json flags = json::array();
      for (size_t j = 0; j < score.token_scores.size(); ++j) {
        token_scores.push_back(score.token_scores[j]);
        hall_scores.push_back(wepr::token_hallucination_score(*model, score.token_scores[j]));
        flags.push_back(static_cast<bool>(score.flags[j]));
      }
      line["token_scores"] = std::move(token_scores);
      line["token_hallucination_scores"] = std::move(hall_scores);
      line["token_flags"] = std::move(flags);
    }
    out << line.dump() << '\n';
  }
  if (!out) throw wepr::IoError("write failed on " + args.output);
  std::cout << "scored " << dataset.size() << " records -> " << args.output << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string input;
  std::string model_path;
  std::string log_path;
  uint64_t seed = 0;
  double test_fraction = 0.3;
  int k = 0;  // 0 = use data K
  wepr::TrainConfig config;
  std::string negative_term = "complement";
};

int cmd_train(const TrainArgs& args) {
  const auto dataset = wepr::read_jsonl_dataset(args.input);
  const auto profiled = wepr::profile_dataset(dataset);

  const wepr::SplitPlan plan = wepr::grouped_split(dataset, args.test_fraction, args.seed);
  std::vector<wepr::ProfiledExample> train_side;
  for (const wepr::ProfiledExample& ex : profiled)
    if (plan.train_group_ids.count(ex.query_id)) train_side.push_back(ex);
  if (train_side.empty()) throw wepr::TrainError("empty train split");

  int k = args.k;
  if (k == 0) k = static_cast<int>(train_side.front().profile.mean_contributions.size());

  wepr::TrainConfig config = args.config;
  config.seed = args.seed;
  config.negative_term = args.negative_term == "shifted" ? wepr::NegativeTermForm::shifted_sigmoid
                                                         : wepr::NegativeTermForm::complement_sigmoid;

  const wepr::WeprModel model = wepr::train(wepr::to_features(train_side, k), config);
  wepr::save_model(model, args.model_path);

  const json log{{"final_loss", model.training_meta.loss_trajectory.back()},
                 {"epochs_run", model.training_meta.epochs},
                 {"orientation", wepr::to_string(model.orientation)}};
  const std::string log_path =
      args.log_path.empty() ? args.model_path + ".log.json" : args.log_path;
  write_text_file(log_path, log.dump(2) + "\n");

  std::cout << "trained K=" << model.k << " model on " << train_side.size() << " sequences ("
            << plan.train_group_ids.size() << " query groups), " << model.training_meta.epochs
            << " epochs -> " << args.model_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string input;
  std::string output;
  std::string model_path;
  uint64_t seed = 0;
  double test_fraction = 0.3;
  int iterations = 1000;
};

json report_to_json(const wepr::EvalReport& r) {
  return json{{"method", r.method},
              {"pr_auc", r.pr_auc},
              {"roc_auc", r.roc_auc},
              {"bootstrap",
               json{{"iterations", r.bootstrap.iterations},
                    {"pr_auc_mean", r.bootstrap.pr_auc_mean},
                    {"pr_auc_std", r.bootstrap.pr_auc_std},
                    {"roc_auc_mean", r.bootstrap.roc_auc_mean},
                    {"roc_auc_std", r.bootstrap.roc_auc_std}}},
              {"n_pos", r.n_pos},
              {"n_neg", r.n_neg}};
}

int cmd_eval(const EvalArgs& args) {
  const auto dataset = wepr::read_jsonl_dataset(args.input);
  const auto profiled = wepr::profile_dataset(dataset);
  const wepr::WeprModel model = wepr::load_model(args.model_path);

  const wepr::SplitPlan plan = wepr::grouped_split(dataset, args.test_fraction, args.seed);
  std::vector<wepr::ProfiledExample> test_side;
  for (const wepr::ProfiledExample& ex : profiled)
    if (plan.test_group_ids.count(ex.query_id)) test_side.push_back(ex);
  if (test_side.empty()) throw wepr::MetricError("empty test split");

  const wepr::BootstrapConfig bootstrap{args.iterations, args.seed};
  const wepr::MethodComparison cmp = wepr::compare_methods(test_side, model, bootstrap);

  const json doc{{"epr_baseline", report_to_json(cmp.epr_baseline)},
                 {"wepr", report_to_json(cmp.wepr)},
                 {"test_sequences", test_side.size()},
                 {"test_groups", plan.test_group_ids.size()}};
  emit(args.output, doc.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep-k

struct SweepArgs {
  std::string input;
  std::string output;
  std::vector<int> k_values;
  uint64_t seed = 0;
  double test_fraction = 0.3;
  int iterations = 1000;
  wepr::TrainConfig config;
};

int cmd_sweep(const SweepArgs& args) {
  const auto dataset = wepr::read_jsonl_dataset(args.input);
  const auto profiled = wepr::profile_dataset(dataset);

  wepr::TrainConfig config = args.config;
  config.seed = args.seed;
  const auto rows = wepr::sweep_k(profiled, args.k_values, args.test_fraction, args.seed, config,
                                  {args.iterations, args.seed});

  std::string csv = "k,pr_auc_mean,pr_auc_std,roc_auc_mean,roc_auc_std\n";
  for (const wepr::SweepRow& row : rows) {
    csv += std::to_string(row.k) + "," + json(row.pr_auc_mean).dump() + "," +
           json(row.pr_auc_std).dump() + "," + json(row.roc_auc_mean).dump() + "," +
           json(row.roc_auc_std).dump() + "\n";
  }
  emit(args.output, csv);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// flag

struct FlagArgs {
  std::string input;
  std::string output;
  std::string format = "ansi";
  double threshold = 0.5;
};

int cmd_flag(const FlagArgs& args) {
  std::ifstream in(args.input);
  if (!in) throw wepr::IoError("cannot open " + args.input);

  std::vector<wepr::FlagRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error&) {
      throw wepr::IngestError("line " + std::to_string(line_no) + ": invalid JSON");
    }
    if (!doc.contains("token_scores") || !doc.contains("token_hallucination_scores"))
      throw wepr::DomainError("line " + std::to_string(line_no) +
                              ": records carry no token_scores (run `wepr score` with a model first)");
    const wepr::LabeledExample example = wepr::example_from_json(doc);
    const auto scores = doc["token_scores"].get<std::vector<double>>();
    const auto hall = doc["token_hallucination_scores"].get<std::vector<double>>();
    if (scores.size() != example.record.steps.size() || hall.size() != scores.size())
      throw wepr::DomainError("line " + std::to_string(line_no) + ": token score length mismatch");

    wepr::FlagRecord rec;
    rec.query_id = example.record.query_id;
    for (size_t j = 0; j < scores.size(); ++j) {
      const wepr::TokenDistribution& step = example.record.steps[j];
      // Token text comes from the sampled candidate; a placeholder marks
      // tokens that fell outside the exposed top-K.
      const std::string text =
          step.sampled_rank ? step.candidates[static_cast<size_t>(*step.sampled_rank - 1)].token
                            : "<?>";
      rec.tokens.push_back({text, scores[j], hall[j]});
    }
    records.push_back(std::move(rec));
  }

  const wepr::RenderFormat format = wepr::render_format_from_string(args.format);
  std::string rendered;
  switch (format) {
    case wepr::RenderFormat::ansi: rendered = wepr::render_ansi(records, args.threshold); break;
    case wepr::RenderFormat::html: rendered = wepr::render_html(records, args.threshold); break;
    case wepr::RenderFormat::json: rendered = wepr::render_json(records, args.threshold); break;
  }
  emit(args.output, rendered);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string output;
  wepr::SynthSpec spec;
  std::string regime = "plain";
};

int cmd_synth(const SynthArgs& args) {
  wepr::SynthSpec spec = args.spec;
  if (args.regime == "plain") spec.regime = wepr::SynthRegime::plain;
  else if (args.regime == "rank-structured") spec.regime = wepr::SynthRegime::rank_structured;
  else throw wepr::DomainError("--regime must be plain or rank-structured");

  const auto dataset = wepr::generate_synthetic(spec);
  wepr::write_jsonl_dataset(dataset, args.output);
  std::cout << "generated " << dataset.size() << " records -> " << args.output << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-based hallucination scoring over top-K logprob traces"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value config file; flags override it");

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Parse chat-completions responses into a dataset");
  c_ingest->add_option("--input,-i", ingest.input, "Response file or directory")->required();
  c_ingest->add_option("--output,-o", ingest.output, "Output dataset JSONL")->required();
  c_ingest->add_option("--temperature", ingest.temperature, "Sampling temperature of the trace");
  c_ingest->add_option("--k", ingest.top_k_exposed, "Top-K logprobs exposed per step");
  c_ingest->add_option("--sampling-top-k", ingest.sampling_top_k, "Sampling cutoff K_samp");
  c_ingest->add_option("--vocab-size", ingest.vocab_size, "Vocabulary size, if known");
  c_ingest->add_option("--top-p", ingest.top_p, "Nucleus parameter of the trace");

  AnnotateArgs annotate;
  auto* c_annotate = app.add_subcommand("annotate", "Label answers with a judge");
  c_annotate->add_option("--input,-i", annotate.input, "Dataset JSONL")->required();
  c_annotate->add_option("--output,-o", annotate.output, "Labeled dataset JSONL")->required();
  c_annotate->add_option("--gold", annotate.gold_path, "Gold answers JSONL")->required();
  c_annotate->add_option("--judge", annotate.judge, "llm or exact-match");
  c_annotate->add_option("--endpoint-url", annotate.endpoint_url, "OpenAI-compatible base URL");
  c_annotate->add_option("--judge-model", annotate.judge_model, "Judge model name");
  c_annotate->add_option("--api-key-env", annotate.api_key_env, "Env var holding the API key");
  c_annotate->add_option("--timeout", annotate.timeout_seconds, "Per-request timeout (s)");
  c_annotate->add_option("--max-retries", annotate.max_retries, "Retries per example");
  c_annotate->add_option("--backoff-ms", annotate.backoff_ms, "Initial retry backoff (ms)");

  ScoreArgs score;
  auto* c_score = app.add_subcommand("score", "Append entropy (and model) scores to a dataset");
  c_score->add_option("--input,-i", score.input, "Dataset JSONL")->required();
  c_score->add_option("--output,-o", score.output, "Scored JSONL")->required();
  c_score->add_option("--model,-m", score.model_path, "Trained model JSON");

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Train the weighted scorer on a labeled dataset");
  c_train->add_option("--input,-i", train.input, "Labeled dataset JSONL")->required();
  c_train->add_option("--model,-m", train.model_path, "Output model JSON")->required();
  c_train->add_option("--log", train.log_path, "Training log path (default <model>.log.json)");
  c_train->add_option("--seed", train.seed, "Split + training seed");
  c_train->add_option("--test-fraction", train.test_fraction, "Held-out group fraction");
  c_train->add_option("--k", train.k, "Truncate features to top-K ranks (default: data K)");
  c_train->add_option("--epochs", train.config.epochs, "Max training epochs");
  c_train->add_option("--lr", train.config.learning_rate, "Learning rate");
  c_train->add_option("--l2", train.config.l2_penalty, "L2 penalty on weights");
  c_train->add_option("--tol", train.config.convergence_tol, "Loss-delta stopping tolerance");
  c_train->add_option("--negative-term", train.negative_term,
                      "Negative-class loss term: complement (standard) or shifted");

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Compare EPR baseline and trained scorer on a test split");
  c_eval->add_option("--input,-i", eval.input, "Labeled dataset JSONL")->required();
  c_eval->add_option("--model,-m", eval.model_path, "Trained model JSON")->required();
  c_eval->add_option("--output,-o", eval.output, "Report JSON (stdout when omitted)");
  c_eval->add_option("--seed", eval.seed, "Split + bootstrap seed");
  c_eval->add_option("--test-fraction", eval.test_fraction, "Held-out group fraction");
  c_eval->add_option("--iterations", eval.iterations, "Bootstrap iterations");

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep-k", "Retrain and evaluate across feature cutoffs K");
  c_sweep->add_option("--input,-i", sweep.input, "Labeled dataset JSONL")->required();
  c_sweep->add_option("--output,-o", sweep.output, "Output CSV (stdout when omitted)");
  c_sweep->add_option("--k", sweep.k_values, "K values to sweep")->required()->delimiter(',');
  c_sweep->add_option("--seed", sweep.seed, "Split + bootstrap seed");
  c_sweep->add_option("--test-fraction", sweep.test_fraction, "Held-out group fraction");
  c_sweep->add_option("--iterations", sweep.iterations, "Bootstrap iterations");
  c_sweep->add_option("--epochs", sweep.config.epochs, "Max training epochs");
  c_sweep->add_option("--lr", sweep.config.learning_rate, "Learning rate");
  c_sweep->add_option("--l2", sweep.config.l2_penalty, "L2 penalty on weights");

  FlagArgs flag;
  auto* c_flag = app.add_subcommand("flag", "Render token-level hallucination flags");
  c_flag->add_option("--input,-i", flag.input, "Scored JSONL (with token scores)")->required();
  c_flag->add_option("--output,-o", flag.output, "Output document (stdout when omitted)");
  c_flag->add_option("--format", flag.format, "ansi, html, or json");
  c_flag->add_option("--threshold", flag.threshold, "Flagging threshold in (0, 1)");

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic labeled dataset");
  c_synth->add_option("--output,-o", synth.output, "Output dataset JSONL")->required();
  c_synth->add_option("--n-queries", synth.spec.n_queries, "Number of query groups");
  c_synth->add_option("--answers-per-query", synth.spec.answers_per_query, "Answers per query");
  c_synth->add_option("--length-min", synth.spec.length_min, "Min sequence length");
  c_synth->add_option("--length-max", synth.spec.length_max, "Max sequence length");
  c_synth->add_option("--k", synth.spec.k, "Exposed ranks per step");
  c_synth->add_option("--slots", synth.spec.slots, "Sampling cutoff / distribution size");
  c_synth->add_option("--regime", synth.regime, "plain or rank-structured");
  c_synth->add_option("--separation", synth.spec.separation, "Class separation strength");
  c_synth->add_option("--seed", synth.spec.seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_ingest->parsed()) return cmd_ingest(ingest);
    if (c_annotate->parsed()) return cmd_annotate(annotate);
    if (c_score->parsed()) return cmd_score(score);
    if (c_train->parsed()) return cmd_train(train);
    if (c_eval->parsed()) return cmd_eval(eval);
    if (c_sweep->parsed()) return cmd_sweep(sweep);
    if (c_flag->parsed()) return cmd_flag(flag);
    if (c_synth->parsed()) return cmd_synth(synth);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitGeneric;
}

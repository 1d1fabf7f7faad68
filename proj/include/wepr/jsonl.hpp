#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "wepr/data_model.hpp"

namespace wepr {

// Dataset JSONL: one example per line, keys sorted, doubles serialized
// round-trip exactly. Unknown keys are ignored on read so scored files
// remain valid datasets.

nlohmann::json example_to_json(const LabeledExample& example);
LabeledExample example_from_json(const nlohmann::json& line);

std::vector<LabeledExample> read_jsonl_dataset(const std::string& path,
                                               std::vector<std::string>* warnings = nullptr);
void write_jsonl_dataset(const std::vector<LabeledExample>& examples, const std::string& path);

// Serialized form of one example; write_jsonl_dataset emits exactly these
// lines. Exposed so the scorer can append fields to the same object.
std::string example_to_line(const LabeledExample& example);

}  // namespace wepr

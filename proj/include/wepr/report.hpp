#pragma once

#include <string>
#include <vector>

namespace wepr {

// One rendered token: its text, the raw per-token score sigma(S), and the
// orientation-corrected hallucination probability driving the styling.
struct FlaggedToken {
  std::string text;
  double token_score = 0.0;
  double hallucination_score = 0.0;
};

struct FlagRecord {
  std::string query_id;
  std::vector<FlaggedToken> tokens;
};

enum class RenderFormat { ansi, html, json };

RenderFormat render_format_from_string(const std::string& s);

// Tokens whose hallucination score strictly exceeds the threshold are
// tinted red with intensity (score - threshold) / (1 - threshold); others
// pass through untouched, so a record with no flags renders as its plain
// answer text. Throws DomainError unless threshold lies in (0, 1).
std::string render_ansi(const std::vector<FlagRecord>& records, double threshold);

// Standalone HTML document, inline styles only, one tooltip per token
// showing the raw score.
std::string render_html(const std::vector<FlagRecord>& records, double threshold);

// JSON array of {query_id, flags, hallucination_scores, tokens}.
std::string render_json(const std::vector<FlagRecord>& records, double threshold);

}  // namespace wepr

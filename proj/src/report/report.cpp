#include "wepr/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "wepr/errors.hpp"

namespace wepr {
namespace {

void check_threshold(double threshold) {
  if (!(threshold > 0.0) || !(threshold < 1.0))
    throw DomainError("render threshold must lie in (0, 1)");
}

double intensity(double score, double threshold) {
  const double i = (score - threshold) / (1.0 - threshold);
  return i < 0.0 ? 0.0 : (i > 1.0 ? 1.0 : i);
}

std::string format_fixed(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string escape_html(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

RenderFormat render_format_from_string(const std::string& s) {
  if (s == "ansi") return RenderFormat::ansi;
  if (s == "html") return RenderFormat::html;
  if (s == "json") return RenderFormat::json;
  throw DomainError("unknown render format '" + s + "' (expected ansi|html|json)");
}

std::string render_ansi(const std::vector<FlagRecord>& records, double threshold) {
  check_threshold(threshold);
  std::string out;
  for (const FlagRecord& rec : records) {
    for (const FlaggedToken& tok : rec.tokens) {
      if (tok.hallucination_score > threshold) {
        const double i = intensity(tok.hallucination_score, threshold);
        const int fade = static_cast<int>(std::lround(255.0 * (1.0 - i)));
        out += "\x1b[38;2;255;" + std::to_string(fade) + ";" + std::to_string(fade) + "m";
        out += tok.text;
        out += "\x1b[0m";
      } else {
        out += tok.text;
      }
    }
    out += '\n';
  }
  return out;
}

std::string render_html(const std::vector<FlagRecord>& records, double threshold) {
  check_threshold(threshold);
  std::string out =
      "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
      "<title>token flags</title>\n</head>\n"
      "<body style=\"font-family: monospace; white-space: pre-wrap;\">\n";
  for (const FlagRecord& rec : records) {
    out += "<div data-query-id=\"" + escape_html(rec.query_id) + "\">";
    for (const FlaggedToken& tok : rec.tokens) {
      const std::string title = "score=" + format_fixed("%.6f", tok.token_score);
      if (tok.hallucination_score > threshold) {
        const double i = intensity(tok.hallucination_score, threshold);
        out += "<span style=\"background-color: rgba(255,0,0," + format_fixed("%.4f", i) +
               ");\" title=\"" + title + "\">" + escape_html(tok.text) + "</span>";
      } else {
        out += "<span title=\"" + title + "\">" + escape_html(tok.text) + "</span>";
      }
    }
    out += "</div>\n";
  }
  out += "</body>\n</html>\n";
  return out;
}

std::string render_json(const std::vector<FlagRecord>& records, double threshold) {
  check_threshold(threshold);
  nlohmann::json docs = nlohmann::json::array();
  for (const FlagRecord& rec : records) {
    nlohmann::json flags = nlohmann::json::array();
    nlohmann::json scores = nlohmann::json::array();
    nlohmann::json tokens = nlohmann::json::array();
    for (const FlaggedToken& tok : rec.tokens) {
      flags.push_back(tok.hallucination_score > threshold);
      scores.push_back(tok.hallucination_score);
      tokens.push_back(tok.text);
    }
    docs.push_back({{"query_id", rec.query_id},
                    {"flags", std::move(flags)},
                    {"hallucination_scores", std::move(scores)},
                    {"tokens", std::move(tokens)}});
  }
  return docs.dump(2) + "\n";
}

}  // namespace wepr

#pragma once

#include <cstdint>
#include <vector>

#include "wepr/data_model.hpp"

namespace wepr {

enum class SynthRegime { plain, rank_structured };

// Synthetic labeled traces standing in for LLM generations plus judge
// labels; the evaluation suites run against these.
//
// plain: both classes draw per-step distributions from a symmetric
// Dirichlet over `slots` outcomes; valid answers use a colder (more
// concentrated, lower truncated entropy) concentration than hallucinated
// ones, with `separation` controlling the gap in log-concentration.
//
// rank_structured: both classes share one concentration, but a
// label-correlated mass transfer targets specific ranks (valid answers pile
// mid-rank mass onto rank 2, hallucinated ones onto rank 1), so a uniform
// entropy sum carries little signal while rank-aware weighting does.
struct SynthSpec {
  int n_queries = 100;
  int answers_per_query = 2;
  int length_min = 20;
  int length_max = 50;
  int k = 15;               // exposed ranks per step
  int slots = 50;           // sampling cutoff; also the Dirichlet dimension
  SynthRegime regime = SynthRegime::plain;
  double separation = 1.5;  // frozen default; 0 removes all signal
  uint64_t seed = 0;

  void validate() const;
};

std::vector<LabeledExample> generate_synthetic(const SynthSpec& spec);

}  // namespace wepr

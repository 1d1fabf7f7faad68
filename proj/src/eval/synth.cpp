#include "wepr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wepr/errors.hpp"
#include "wepr/rng.hpp"

namespace wepr {
namespace {

// Calibrated once against the separability targets of the evaluation
// suites, then frozen; changing these invalidates golden thresholds.
constexpr double kAlphaBase = 1.4;
constexpr double kAlphaJitter = 0.55;
constexpr double kAlphaMin = 0.35;  // keeps truncated entropy monotone in alpha
constexpr double kAlphaMax = 20.0;
constexpr double kRankAlpha = 0.55;
constexpr double kRankStepFraction = 0.35;
// Donor rank windows for the label-correlated transfer (0-based, half-open).
constexpr int kValidDonorLo = 2, kValidDonorHi = 6;    // boosted into rank 2
constexpr int kHallDonorLo = 6, kHallDonorHi = 10;     // boosted into rank 1

const char* const kWordPool[16] = {"alpha",  "bravo",   "copper",  "delta",  "ember",  "fathom",
                                   "granite", "harbor",  "indigo",  "juniper", "krypton", "lumen",
                                   "meadow", "nectar",  "onyx",    "prairie"};

std::string token_text(int step, int rank) {
  std::string word = kWordPool[(step * 17 + rank * 5) % 16];
  return step > 1 ? " " + word : word;
}

}  // namespace

void SynthSpec::validate() const {
  if (n_queries < 1 || answers_per_query < 1) throw DomainError("synth: counts must be >= 1");
  if (length_min < 1 || length_max < length_min) throw DomainError("synth: bad length range");
  if (k < 1) throw DomainError("synth: k must be >= 1");
  if (slots <= k) throw DomainError("synth: slots must exceed k");
  if (separation < 0.0) throw DomainError("synth: separation must be >= 0");
}

std::vector<LabeledExample> generate_synthetic(const SynthSpec& spec) {
  spec.validate();

  GenerationSettings settings;
  settings.temperature = 1.0;
  settings.top_k_exposed = spec.k;
  settings.sampling_top_k = spec.slots;
  settings.vocab_size = 131072;
  settings.top_p = 1.0;

  const double rank_gain = std::min(0.95, spec.separation / 3.0);

  std::vector<LabeledExample> out;
  out.reserve(static_cast<size_t>(spec.n_queries) * static_cast<size_t>(spec.answers_per_query));

  std::vector<double> dist(static_cast<size_t>(spec.slots));
  for (int qi = 0; qi < spec.n_queries; ++qi) {
    for (int ai = 0; ai < spec.answers_per_query; ++ai) {
      const uint64_t record_index =
          static_cast<uint64_t>(qi) * static_cast<uint64_t>(spec.answers_per_query) +
          static_cast<uint64_t>(ai);
      Rng rng = Rng::substream(spec.seed, record_index);

      const int label = rng.next_double() < 0.5 ? 1 : 0;
      const int length = static_cast<int>(rng.next_in_range(spec.length_min, spec.length_max));

      double alpha;
      if (spec.regime == SynthRegime::plain) {
        const double shift = (label == 1 ? 0.5 : -0.5) * spec.separation;
        alpha = kAlphaBase * std::exp(shift + kAlphaJitter * rng.next_normal());
        alpha = std::clamp(alpha, kAlphaMin, kAlphaMax);
      } else {
        alpha = kRankAlpha;
      }

      LabeledExample example;
      example.label = label;
      example.label_source = LabelSource::synthetic;
      SequenceRecord& rec = example.record;
      rec.query_id = "q" + std::to_string(qi);
      rec.query_text = "synthetic query " + std::to_string(qi);
      rec.settings = settings;

      for (int j = 1; j <= length; ++j) {
        double total = 0.0;
        for (double& slot : dist) {
          slot = rng.next_gamma(alpha);
          total += slot;
        }
        for (double& slot : dist) slot /= total;
        std::sort(dist.begin(), dist.end(), std::greater<>());

        if (spec.regime == SynthRegime::rank_structured && rank_gain > 0.0 &&
            rng.next_double() < kRankStepFraction) {
          const int lo = label == 1 ? kValidDonorLo : kHallDonorLo;
          const int hi = label == 1 ? kValidDonorHi : kHallDonorHi;
          const int target = label == 1 ? 1 : 0;
          double donor = 0.0;
          for (int r = lo; r < hi; ++r) donor += dist[static_cast<size_t>(r)];
          dist[static_cast<size_t>(target)] += rank_gain * donor;
          for (int r = lo; r < hi; ++r) dist[static_cast<size_t>(r)] *= 1.0 - rank_gain;
          std::sort(dist.begin(), dist.end(), std::greater<>());
        }

        // Sample the emitted token from the full slot distribution; slots
        // beyond the exposed K surface as "outside top-K".
        const double u = rng.next_double();
        double cum = 0.0;
        int sampled_slot = spec.slots - 1;
        for (int r = 0; r < spec.slots; ++r) {
          cum += dist[static_cast<size_t>(r)];
          if (u < cum) {
            sampled_slot = r;
            break;
          }
        }

        TokenDistribution step;
        step.step_index = j;
        for (int r = 0; r < spec.k; ++r)
          step.candidates.push_back({token_text(j, r + 1), dist[static_cast<size_t>(r)]});
        if (sampled_slot < spec.k) step.sampled_rank = sampled_slot + 1;

        if (step.sampled_rank) rec.answer_text += step.candidates[*step.sampled_rank - 1].token;
        else rec.answer_text += token_text(j, spec.k + 1);
        rec.steps.push_back(std::move(step));
      }

      example.validate();
      out.push_back(std::move(example));
    }
  }
  return out;
}

}  // namespace wepr

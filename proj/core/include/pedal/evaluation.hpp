#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pedal/llm_client.hpp"
#include "pedal/types.hpp"

namespace pedal {

/// Numeric answer extraction: if "Answer:" occurs, the first number after
/// its last occurrence; otherwise the last number in the text. The result
/// is canonicalized; nullopt when no number is present.
std::optional<std::string> extract_numeric(const std::string& text);

/// Choice-label extraction: sentinel-first as for numbers; accepts a bare
/// label token (case-insensitive) or a unique full choice-text match, label
/// match taking precedence. Returns the canonical label.
std::optional<std::string> extract_choice(const std::string& text,
                                          const std::vector<Choice>& choices);

/// Dispatch on example kind.
std::optional<std::string> extract_answer(const std::string& text, const Example& example);

/// Exact match: canonical decimal equality for SVAMP, case-insensitive
/// label equality for ARC. An absent prediction never matches.
bool is_exact_match(const std::optional<std::string>& pred, const std::string& gold,
                    DatasetKind kind);

struct SeedRunMetrics {
  std::uint64_t seed = 0;
  int n_examples = 0;
  int n_correct = 0;
  double accuracy = 0.0;  // fraction in [0, 1]
  double avg_input_tokens = 0.0;
  double avg_output_tokens = 0.0;
  long total_calls = 0;
};

struct SummaryMetrics {
  double accuracy_mean = 0.0;  // percent
  double accuracy_std = 0.0;
  double input_tokens_mean = 0.0;
  double input_tokens_std = 0.0;
  double output_tokens_mean = 0.0;
  double output_tokens_std = 0.0;
  int n_seeds = 0;
};

struct ScoredExample {
  bool correct = false;
  Usage total_usage;
  int llm_calls = 0;
};

/// Per-seed accuracy and per-example token averages. Throws ConfigError on
/// an empty result list.
SeedRunMetrics compute_seed_metrics(const std::vector<ScoredExample>& results,
                                    std::uint64_t seed);

/// Cross-seed means and sample (n-1) standard deviations; accuracy is
/// reported as a percentage. A single seed yields std 0.
SummaryMetrics summarize(const std::vector<SeedRunMetrics>& per_seed);

}  // namespace pedal

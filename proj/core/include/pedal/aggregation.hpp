#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pedal/llm_client.hpp"
#include "pedal/prompting.hpp"
#include "pedal/types.hpp"

namespace pedal {

struct SelectionOutcome {
  int index = 1;  // 1-based, always valid
  std::string raw_text;
  Usage usage;
  bool fallback_used = false;
  int llm_calls = 0;
};

/// Consistency-selection prompt: restates the question, lists the candidates
/// as "Response 1..n", and asks for exactly "The most consistent response is
/// Response X". Requires at least two candidates.
RenderedPrompt render_selection_prompt(const Example& example,
                                       const std::vector<std::string>& candidates,
                                       const PromptTemplates& templates);

/// Total parse of the selection reply. Picks the first integer in [1, n]
/// after the latest "Response" token, else the first standalone integer in
/// [1, n] anywhere, else falls back to index 1. Never throws.
std::pair<int, bool> parse_selection(const std::string& text, int n);

/// One greedy selection call over >= 2 candidates; a single candidate
/// short-circuits to index 1 with zero calls and zero usage.
SelectionOutcome select_most_consistent(const Example& example,
                                        const std::vector<std::string>& candidates,
                                        LlmClient& client, const PromptTemplates& templates,
                                        const std::string& model, int max_tokens = 128);

}  // namespace pedal

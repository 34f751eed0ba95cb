#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pedal/aggregation.hpp"
#include "pedal/evaluation.hpp"
#include "pedal/llm_client.hpp"
#include "pedal/prompting.hpp"
#include "pedal/templates.hpp"
#include "pedal/types.hpp"

namespace pedal {

enum class Strategy { greedy, usc, ude, pedal };

std::string to_string(Strategy strategy);
Strategy strategy_from_string(const std::string& name);

struct StrategyConfig {
  Strategy strategy = Strategy::greedy;
  int num_prompts = 3;       // PEDAL / UDE
  int num_intermediate = 3;  // USC
  int num_exemplars = 3;
  std::uint64_t run_seed = 0;
  std::string model = "default";
  double sample_temperature = 0.7;  // USC intermediate sampling
  double sample_top_p = 0.95;
  int gen_max_tokens = 1024;
  int selection_max_tokens = 128;
  bool pedal_cot = false;          // candidate prompts default to direct style
  int candidate_char_budget = 2000;  // truncation for selection prompts
};

struct Candidate {
  std::string text;
  std::optional<std::string> answer;  // nullopt = extraction failure
  Usage usage;
};

struct ExampleResult {
  std::string example_id;
  std::vector<Candidate> candidates;
  std::string final_text;
  std::optional<std::string> final_answer;
  std::optional<int> selected_index;  // 1-based
  bool aggregation_fallback = false;
  bool truncated = false;
  int llm_calls = 0;
  Usage total_usage;
  bool correct = false;
};

ExampleResult run_strategy(const Example& example, const DatasetBundle& bundle,
                           const StrategyConfig& cfg, LlmClient& client,
                           const PromptTemplates& templates);

ExampleResult run_greedy(const Example& example, const DatasetBundle& bundle,
                         const StrategyConfig& cfg, LlmClient& client,
                         const PromptTemplates& templates);
ExampleResult run_usc(const Example& example, const DatasetBundle& bundle,
                      const StrategyConfig& cfg, LlmClient& client,
                      const PromptTemplates& templates);
ExampleResult run_ude(const Example& example, const DatasetBundle& bundle,
                      const StrategyConfig& cfg, LlmClient& client,
                      const PromptTemplates& templates);
ExampleResult run_pedal(const Example& example, const DatasetBundle& bundle,
                        const StrategyConfig& cfg, LlmClient& client,
                        const PromptTemplates& templates);

}  // namespace pedal

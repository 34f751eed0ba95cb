#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pedal/evaluation.hpp"
#include "pedal/llm_client.hpp"
#include "pedal/strategies.hpp"
#include "pedal/templates.hpp"
#include "pedal/types.hpp"

namespace pedal {

struct RunConfig {
  DatasetKind dataset = DatasetKind::svamp;
  std::string eval_path;
  std::string pool_path;
  std::vector<Strategy> strategies = {Strategy::greedy, Strategy::usc, Strategy::ude,
                                      Strategy::pedal};
  std::string endpoint = "http://localhost:8000/v1";
  std::string model = "default";
  std::vector<std::uint64_t> seeds = {0, 1, 2};
  int num_exemplars = 3;
  int num_prompts = 3;
  int num_intermediate = 3;
  double sample_temperature = 0.7;
  double sample_top_p = 0.95;
  int gen_max_tokens = 1024;
  int selection_max_tokens = 128;
  bool pedal_cot = false;
  int candidate_char_budget = 2000;
  double subsample_fraction = 1.0;
  std::uint64_t subsample_seed = 42;
  std::string cache_dir;       // empty disables the record/replay cache
  std::string mock_script;     // non-empty switches to the scripted backend
  std::string templates_path;  // empty uses the shipped defaults
  std::string output_path = "pedal_report";
  bool verbose_examples = false;
  int concurrency = 4;

  /// Throws ConfigError on inconsistent settings.
  void validate() const;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& doc);
};

/// One strategy x seed cell. A hard failure leaves metrics unset and records
/// the error; other cells proceed.
struct CellResult {
  std::uint64_t seed = 0;
  std::optional<SeedRunMetrics> metrics;
  std::vector<ExampleResult> examples;  // kept only when verbose
  std::optional<std::string> failure;
};

struct StrategyOutcome {
  Strategy strategy = Strategy::greedy;
  int num_prompts = 3;  // distinguishes sweep rows
  std::vector<CellResult> cells;
  std::optional<SummaryMetrics> summary;  // absent when every cell failed
};

struct Report {
  RunConfig config;
  std::string template_hash;
  std::size_t eval_size = 0;
  bool sweep = false;
  std::vector<StrategyOutcome> outcomes;
  double duration_seconds = 0.0;

  nlohmann::json to_json() const;
  static Report from_json(const nlohmann::json& doc);
};

/// Run every configured strategy over every seed. `backend` overrides the
/// config-derived transport (used by tests to observe the request log).
Report execute_run(const RunConfig& config, std::shared_ptr<Backend> backend = nullptr);

/// PEDAL-only sweep over num_prompts values, one summary row per value.
Report sweep_num_prompts(const RunConfig& config, const std::vector<int>& values,
                         std::shared_ptr<Backend> backend = nullptr);

/// Human-readable table mirroring the report: Approach | Accuracy | Input
/// tokens | Output tokens, best accuracy row marked with '*'.
std::string render_table(const Report& report);

/// Write <output_path>.json and <output_path>.txt; returns the two paths.
std::pair<std::string, std::string> emit_report(const Report& report,
                                                const std::string& output_path);

/// Resolve the effective prompt templates for a config.
PromptTemplates load_templates(const RunConfig& config);

}  // namespace pedal

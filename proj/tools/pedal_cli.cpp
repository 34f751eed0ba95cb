// Command-line front end: `pedal run`, `pedal sweep`, `pedal report`.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pedal/runner.hpp"

namespace {

using pedal::RunConfig;

/// Pre-scan argv for --config so file values sit underneath CLI flags.
RunConfig config_from_file_arg(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream in(argv[i + 1]);
      if (!in) throw pedal::ConfigError(std::string("cannot open config file: ") + argv[i + 1]);
      nlohmann::json doc;
      in >> doc;
      return RunConfig::from_json(doc);
    }
  }
  return RunConfig{};
}

void add_run_options(CLI::App& cmd, RunConfig& config, std::string& dataset,
                     std::vector<std::string>& strategies) {
  cmd.add_option("--config", "JSON config file; flags override its values")
      ->check(CLI::ExistingFile);
  cmd.add_option("--dataset", dataset, "Dataset kind: svamp or arc")
      ->check(CLI::IsMember({"svamp", "arc"}));
  cmd.add_option("--eval", config.eval_path, "Evaluation dataset file");
  cmd.add_option("--pool", config.pool_path, "Exemplar pool file (must be disjoint from eval)");
  cmd.add_option("--strategies", strategies, "Strategies to run")->delimiter(',');
  cmd.add_option("--endpoint", config.endpoint, "Chat-completions endpoint base URL");
  cmd.add_option("--model", config.model, "Model id sent on the wire");
  cmd.add_option("--seeds", config.seeds, "Run seeds")->delimiter(',');
  cmd.add_option("--num-exemplars,-k", config.num_exemplars, "Exemplars per prompt");
  cmd.add_option("--num-prompts", config.num_prompts, "Diverse prompts for PEDAL/UDE");
  cmd.add_option("--num-intermediate", config.num_intermediate, "USC intermediate samples");
  cmd.add_option("--sample-temperature", config.sample_temperature,
                 "Temperature for USC sampling");
  cmd.add_option("--sample-top-p", config.sample_top_p, "top_p for USC sampling");
  cmd.add_option("--gen-max-tokens", config.gen_max_tokens, "max_tokens for generation calls");
  cmd.add_option("--selection-max-tokens", config.selection_max_tokens,
                 "max_tokens for aggregation calls");
  cmd.add_flag("--pedal-cot", config.pedal_cot, "Use CoT-style prompts for PEDAL candidates");
  cmd.add_option("--candidate-char-budget", config.candidate_char_budget,
                 "Per-candidate character budget in selection prompts");
  cmd.add_option("--subsample-fraction", config.subsample_fraction,
                 "Eval subsample fraction in (0, 1]");
  cmd.add_option("--subsample-seed", config.subsample_seed, "Seed for the eval subsample");
  cmd.add_option("--cache-dir", config.cache_dir, "Record/replay cache directory");
  cmd.add_option("--mock-script", config.mock_script,
                 "Scripted mock backend file (replaces the HTTP endpoint)");
  cmd.add_option("--templates", config.templates_path, "Prompt template file");
  cmd.add_option("--output", config.output_path, "Output path base (.json and .txt)");
  cmd.add_flag("--verbose-examples", config.verbose_examples,
               "Include per-example results in the report");
  cmd.add_option("--concurrency", config.concurrency, "Max in-flight requests / worker threads");
}

void apply_parsed_lists(RunConfig& config, const std::string& dataset,
                        const std::vector<std::string>& strategies) {
  if (!dataset.empty()) config.dataset = pedal::dataset_kind_from_string(dataset);
  if (!strategies.empty()) {
    config.strategies.clear();
    for (const std::string& s : strategies) {
      config.strategies.push_back(pedal::strategy_from_string(s));
    }
  }
}

int finish(const pedal::Report& report, const std::string& output_path) {
  auto [json_path, table_path] = pedal::emit_report(report, output_path);
  std::cout << pedal::render_table(report);
  std::cout << "report: " << json_path << "\n";
  std::cout << "table:  " << table_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PEDAL benchmarking harness: diverse-exemplar prompting with LLM aggregation"};
  app.require_subcommand(1);

  RunConfig config;
  try {
    config = config_from_file_arg(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::string dataset;
  std::vector<std::string> strategies;

  CLI::App* run_cmd = app.add_subcommand("run", "Evaluate strategies across seeds");
  add_run_options(*run_cmd, config, dataset, strategies);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "PEDAL sweep over num_prompts values");
  add_run_options(*sweep_cmd, config, dataset, strategies);
  std::vector<int> sweep_values = {2, 3, 4};
  sweep_cmd->add_option("--values", sweep_values, "num_prompts values, each in [2, 8]")
      ->delimiter(',');

  CLI::App* report_cmd =
      app.add_subcommand("report", "Re-emit table and report from a saved report file");
  std::string report_input;
  std::string report_output;
  report_cmd->add_option("--input", report_input, "Saved report .json")
      ->required()
      ->check(CLI::ExistingFile);
  report_cmd->add_option("--output", report_output, "Output path base (defaults to input base)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      apply_parsed_lists(config, dataset, strategies);
      return finish(pedal::execute_run(config), config.output_path);
    }
    if (sweep_cmd->parsed()) {
      apply_parsed_lists(config, dataset, strategies);
      return finish(pedal::sweep_num_prompts(config, sweep_values), config.output_path);
    }
    if (report_cmd->parsed()) {
      std::ifstream in(report_input);
      nlohmann::json doc;
      in >> doc;
      pedal::Report report = pedal::Report::from_json(doc);
      if (report_output.empty()) {
        report_output = report_input.size() > 5 && report_input.ends_with(".json")
                            ? report_input.substr(0, report_input.size() - 5)
                            : report_input;
      }
      return finish(report, report_output);
    }
  } catch (const pedal::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

#include "pedal/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "pedal/datasets.hpp"

namespace pedal {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config

void RunConfig::validate() const {
  if (eval_path.empty()) throw ConfigError("eval dataset path is required");
  if (pool_path.empty()) throw ConfigError("exemplar pool path is required");
  if (strategies.empty()) throw ConfigError("at least one strategy is required");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (num_exemplars < 1) throw ConfigError("num_exemplars must be >= 1");
  if (num_intermediate < 2) throw ConfigError("num_intermediate must be >= 2");
  if (subsample_fraction <= 0.0 || subsample_fraction > 1.0) {
    throw ConfigError("subsample fraction must be in (0, 1]");
  }
  if (concurrency < 1) throw ConfigError("concurrency must be >= 1");
  for (Strategy s : strategies) {
    if ((s == Strategy::pedal || s == Strategy::ude) && num_prompts < 2) {
      throw ConfigError(to_string(s) + " requires num_prompts >= 2");
    }
  }
}

json RunConfig::to_json() const {
  json strategy_names = json::array();
  for (Strategy s : strategies) strategy_names.push_back(to_string(s));
  return json{
      {"dataset", to_string(dataset)},
      {"eval_path", eval_path},
      {"pool_path", pool_path},
      {"strategies", strategy_names},
      {"endpoint", endpoint},
      {"model", model},
      {"seeds", seeds},
      {"num_exemplars", num_exemplars},
      {"num_prompts", num_prompts},
      {"num_intermediate", num_intermediate},
      {"sample_temperature", sample_temperature},
      {"sample_top_p", sample_top_p},
      {"gen_max_tokens", gen_max_tokens},
      {"selection_max_tokens", selection_max_tokens},
      {"pedal_cot", pedal_cot},
      {"candidate_char_budget", candidate_char_budget},
      {"subsample_fraction", subsample_fraction},
      {"subsample_seed", subsample_seed},
      {"cache_dir", cache_dir},
      {"mock_script", mock_script},
      {"templates_path", templates_path},
      {"output_path", output_path},
      {"verbose_examples", verbose_examples},
      {"concurrency", concurrency},
  };
}

RunConfig RunConfig::from_json(const json& doc) {
  RunConfig c;
  if (doc.contains("dataset")) c.dataset = dataset_kind_from_string(doc["dataset"]);
  c.eval_path = doc.value("eval_path", c.eval_path);
  c.pool_path = doc.value("pool_path", c.pool_path);
  if (doc.contains("strategies")) {
    c.strategies.clear();
    for (const json& s : doc["strategies"]) c.strategies.push_back(strategy_from_string(s));
  }
  c.endpoint = doc.value("endpoint", c.endpoint);
  c.model = doc.value("model", c.model);
  if (doc.contains("seeds")) c.seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
  c.num_exemplars = doc.value("num_exemplars", c.num_exemplars);
  c.num_prompts = doc.value("num_prompts", c.num_prompts);
  c.num_intermediate = doc.value("num_intermediate", c.num_intermediate);
  c.sample_temperature = doc.value("sample_temperature", c.sample_temperature);
  c.sample_top_p = doc.value("sample_top_p", c.sample_top_p);
  c.gen_max_tokens = doc.value("gen_max_tokens", c.gen_max_tokens);
  c.selection_max_tokens = doc.value("selection_max_tokens", c.selection_max_tokens);
  c.pedal_cot = doc.value("pedal_cot", c.pedal_cot);
  c.candidate_char_budget = doc.value("candidate_char_budget", c.candidate_char_budget);
  c.subsample_fraction = doc.value("subsample_fraction", c.subsample_fraction);
  c.subsample_seed = doc.value("subsample_seed", c.subsample_seed);
  c.cache_dir = doc.value("cache_dir", c.cache_dir);
  c.mock_script = doc.value("mock_script", c.mock_script);
  c.templates_path = doc.value("templates_path", c.templates_path);
  c.output_path = doc.value("output_path", c.output_path);
  c.verbose_examples = doc.value("verbose_examples", c.verbose_examples);
  c.concurrency = doc.value("concurrency", c.concurrency);
  return c;
}

PromptTemplates load_templates(const RunConfig& config) {
  return config.templates_path.empty() ? PromptTemplates::defaults()
                                       : PromptTemplates::load(config.templates_path);
}

// ---------------------------------------------------------------------------
// Report serialization

namespace {

json usage_to_json(const Usage& u) {
  return json{{"prompt_tokens", u.prompt_tokens}, {"completion_tokens", u.completion_tokens}};
}

Usage usage_from_json(const json& doc) {
  return Usage{doc.value("prompt_tokens", 0L), doc.value("completion_tokens", 0L)};
}

json seed_metrics_to_json(const SeedRunMetrics& m) {
  return json{{"seed", m.seed},
              {"n_examples", m.n_examples},
              {"n_correct", m.n_correct},
              {"accuracy", m.accuracy},
              {"avg_input_tokens", m.avg_input_tokens},
              {"avg_output_tokens", m.avg_output_tokens},
              {"total_calls", m.total_calls}};
}

SeedRunMetrics seed_metrics_from_json(const json& doc) {
  SeedRunMetrics m;
  m.seed = doc.value("seed", 0ULL);
  m.n_examples = doc.value("n_examples", 0);
  m.n_correct = doc.value("n_correct", 0);
  m.accuracy = doc.value("accuracy", 0.0);
  m.avg_input_tokens = doc.value("avg_input_tokens", 0.0);
  m.avg_output_tokens = doc.value("avg_output_tokens", 0.0);
  m.total_calls = doc.value("total_calls", 0L);
  return m;
}

json summary_to_json(const SummaryMetrics& s) {
  return json{{"accuracy_mean", s.accuracy_mean},
              {"accuracy_std", s.accuracy_std},
              {"input_tokens_mean", s.input_tokens_mean},
              {"input_tokens_std", s.input_tokens_std},
              {"output_tokens_mean", s.output_tokens_mean},
              {"output_tokens_std", s.output_tokens_std},
              {"n_seeds", s.n_seeds}};
}

SummaryMetrics summary_from_json(const json& doc) {
  SummaryMetrics s;
  s.accuracy_mean = doc.value("accuracy_mean", 0.0);
  s.accuracy_std = doc.value("accuracy_std", 0.0);
  s.input_tokens_mean = doc.value("input_tokens_mean", 0.0);
  s.input_tokens_std = doc.value("input_tokens_std", 0.0);
  s.output_tokens_mean = doc.value("output_tokens_mean", 0.0);
  s.output_tokens_std = doc.value("output_tokens_std", 0.0);
  s.n_seeds = doc.value("n_seeds", 0);
  return s;
}

json example_result_to_json(const ExampleResult& r) {
  json candidates = json::array();
  for (const Candidate& c : r.candidates) {
    candidates.push_back(json{{"text", c.text},
                              {"answer", c.answer ? json(*c.answer) : json(nullptr)},
                              {"usage", usage_to_json(c.usage)}});
  }
  return json{
      {"example_id", r.example_id},
      {"candidates", candidates},
      {"final_text", r.final_text},
      {"final_answer", r.final_answer ? json(*r.final_answer) : json(nullptr)},
      {"selected_index", r.selected_index ? json(*r.selected_index) : json(nullptr)},
      {"aggregation_fallback", r.aggregation_fallback},
      {"truncated", r.truncated},
      {"llm_calls", r.llm_calls},
      {"total_usage", usage_to_json(r.total_usage)},
      {"correct", r.correct},
  };
}

ExampleResult example_result_from_json(const json& doc) {
  ExampleResult r;
  r.example_id = doc.value("example_id", "");
  for (const json& c : doc.value("candidates", json::array())) {
    Candidate cand;
    cand.text = c.value("text", "");
    if (c.contains("answer") && !c["answer"].is_null()) cand.answer = c["answer"];
    cand.usage = usage_from_json(c.value("usage", json::object()));
    r.candidates.push_back(std::move(cand));
  }
  r.final_text = doc.value("final_text", "");
  if (doc.contains("final_answer") && !doc["final_answer"].is_null()) {
    r.final_answer = doc["final_answer"];
  }
  if (doc.contains("selected_index") && !doc["selected_index"].is_null()) {
    r.selected_index = doc["selected_index"];
  }
  r.aggregation_fallback = doc.value("aggregation_fallback", false);
  r.truncated = doc.value("truncated", false);
  r.llm_calls = doc.value("llm_calls", 0);
  r.total_usage = usage_from_json(doc.value("total_usage", json::object()));
  r.correct = doc.value("correct", false);
  return r;
}

}  // namespace

json Report::to_json() const {
  json outcome_array = json::array();
  for (const StrategyOutcome& outcome : outcomes) {
    json cells = json::array();
    for (const CellResult& cell : outcome.cells) {
      json c = json{{"seed", cell.seed}};
      c["metrics"] = cell.metrics ? seed_metrics_to_json(*cell.metrics) : json(nullptr);
      c["failure"] = cell.failure ? json(*cell.failure) : json(nullptr);
      if (!cell.examples.empty()) {
        json examples = json::array();
        for (const ExampleResult& r : cell.examples) examples.push_back(example_result_to_json(r));
        c["examples"] = examples;
      }
      cells.push_back(std::move(c));
    }
    outcome_array.push_back(
        json{{"strategy", to_string(outcome.strategy)},
             {"num_prompts", outcome.num_prompts},
             {"cells", cells},
             {"summary", outcome.summary ? summary_to_json(*outcome.summary) : json(nullptr)}});
  }
  return json{{"config", config.to_json()},
              {"template_hash", template_hash},
              {"eval_size", eval_size},
              {"sweep", sweep},
              {"outcomes", outcome_array},
              {"duration_seconds", duration_seconds}};
}

Report Report::from_json(const json& doc) {
  Report report;
  report.config = RunConfig::from_json(doc.value("config", json::object()));
  report.template_hash = doc.value("template_hash", "");
  report.eval_size = doc.value("eval_size", std::size_t{0});
  report.sweep = doc.value("sweep", false);
  report.duration_seconds = doc.value("duration_seconds", 0.0);
  for (const json& o : doc.value("outcomes", json::array())) {
    StrategyOutcome outcome;
    outcome.strategy = strategy_from_string(o.value("strategy", "greedy"));
    outcome.num_prompts = o.value("num_prompts", 3);
    for (const json& c : o.value("cells", json::array())) {
      CellResult cell;
      cell.seed = c.value("seed", 0ULL);
      if (c.contains("metrics") && !c["metrics"].is_null()) {
        cell.metrics = seed_metrics_from_json(c["metrics"]);
      }
      if (c.contains("failure") && !c["failure"].is_null()) cell.failure = c["failure"];
      for (const json& e : c.value("examples", json::array())) {
        cell.examples.push_back(example_result_from_json(e));
      }
      outcome.cells.push_back(std::move(cell));
    }
    if (o.contains("summary") && !o["summary"].is_null()) {
      outcome.summary = summary_from_json(o["summary"]);
    }
    report.outcomes.push_back(std::move(outcome));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Execution

namespace {

DatasetBundle load_bundle(const RunConfig& config) {
  DatasetBundle bundle;
  bundle.kind = config.dataset;
  if (config.dataset == DatasetKind::svamp) {
    bundle.eval_set = load_svamp(config.eval_path);
    bundle.exemplar_pool = load_svamp(config.pool_path);
  } else {
    bundle.eval_set = load_arc(config.eval_path);
    bundle.exemplar_pool = load_arc(config.pool_path);
  }
  if (config.subsample_fraction < 1.0) {
    // Materialized once per run; every seed sees the same eval set.
    bundle.eval_set = subsample(bundle.eval_set, config.subsample_fraction, config.subsample_seed);
  }
  if (bundle.eval_set.empty()) throw ConfigError("eval set is empty");
  if (bundle.exemplar_pool.empty()) throw ConfigError("exemplar pool is empty");
  verify_disjoint(bundle);
  return bundle;
}

std::shared_ptr<Backend> make_backend(const RunConfig& config) {
  if (!config.mock_script.empty()) {
    return std::shared_ptr<Backend>(MockBackend::from_script(config.mock_script));
  }
  return std::make_shared<HttpBackend>(config.endpoint);
}

StrategyConfig make_strategy_config(const RunConfig& config, Strategy strategy,
                                    std::uint64_t seed, int num_prompts) {
  StrategyConfig cfg;
  cfg.strategy = strategy;
  cfg.num_prompts = num_prompts;
  cfg.num_intermediate = config.num_intermediate;
  cfg.num_exemplars = config.num_exemplars;
  cfg.run_seed = seed;
  cfg.model = config.model;
  cfg.sample_temperature = config.sample_temperature;
  cfg.sample_top_p = config.sample_top_p;
  cfg.gen_max_tokens = config.gen_max_tokens;
  cfg.selection_max_tokens = config.selection_max_tokens;
  cfg.pedal_cot = config.pedal_cot;
  cfg.candidate_char_budget = config.candidate_char_budget;
  return cfg;
}

/// Run one strategy x seed cell: every eval example, with bounded
/// example-level concurrency. Results land indexed by example position, so
/// completion order cannot affect the report.
CellResult run_cell(const DatasetBundle& bundle, const StrategyConfig& cfg, LlmClient& client,
                    const PromptTemplates& templates, int concurrency, bool keep_examples) {
  CellResult cell;
  cell.seed = cfg.run_seed;

  const std::size_t n = bundle.eval_set.size();
  std::vector<ExampleResult> results(n);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) return;
      }
      try {
        results[i] = run_strategy(bundle.eval_set[i], bundle, cfg, client, templates);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(concurrency), n);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t + 1 < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const std::exception& e) {
      cell.failure = e.what();
    }
    return cell;
  }

  std::vector<ScoredExample> scored;
  scored.reserve(n);
  for (const ExampleResult& r : results) {
    scored.push_back({r.correct, r.total_usage, r.llm_calls});
  }
  cell.metrics = compute_seed_metrics(scored, cfg.run_seed);
  if (keep_examples) cell.examples = std::move(results);
  return cell;
}

StrategyOutcome run_outcome(const RunConfig& config, const DatasetBundle& bundle,
                            Strategy strategy, int num_prompts, LlmClient& client,
                            const PromptTemplates& templates) {
  StrategyOutcome outcome;
  outcome.strategy = strategy;
  outcome.num_prompts = num_prompts;
  std::vector<SeedRunMetrics> per_seed;
  for (std::uint64_t seed : config.seeds) {
    StrategyConfig cfg = make_strategy_config(config, strategy, seed, num_prompts);
    CellResult cell = run_cell(bundle, cfg, client, templates, config.concurrency,
                               config.verbose_examples);
    if (cell.metrics) per_seed.push_back(*cell.metrics);
    outcome.cells.push_back(std::move(cell));
  }
  if (!per_seed.empty()) outcome.summary = summarize(per_seed);
  return outcome;
}

}  // namespace

Report execute_run(const RunConfig& config, std::shared_ptr<Backend> backend) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  DatasetBundle bundle = load_bundle(config);
  PromptTemplates templates = load_templates(config);
  if (!backend) backend = make_backend(config);
  std::shared_ptr<ReplayCache> cache;
  if (!config.cache_dir.empty()) cache = std::make_shared<ReplayCache>(config.cache_dir);
  LlmClient client(backend, cache, config.concurrency);

  Report report;
  report.config = config;
  report.template_hash = templates.hash();
  report.eval_size = bundle.eval_set.size();
  for (Strategy strategy : config.strategies) {
    report.outcomes.push_back(
        run_outcome(config, bundle, strategy, config.num_prompts, client, templates));
  }
  report.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Report sweep_num_prompts(const RunConfig& config, const std::vector<int>& values,
                         std::shared_ptr<Backend> backend) {
  RunConfig sweep_config = config;
  sweep_config.strategies = {Strategy::pedal};
  if (values.empty()) throw ConfigError("sweep requires at least one num_prompts value");
  for (int v : values) {
    if (v < 2 || v > 8) throw ConfigError("sweep num_prompts values must be in [2, 8]");
  }
  // Validate with the largest value so num_prompts preconditions hold.
  sweep_config.num_prompts = values.front();
  sweep_config.validate();
  const auto start = std::chrono::steady_clock::now();

  DatasetBundle bundle = load_bundle(sweep_config);
  PromptTemplates templates = load_templates(sweep_config);
  if (!backend) backend = make_backend(sweep_config);
  std::shared_ptr<ReplayCache> cache;
  if (!sweep_config.cache_dir.empty()) {
    cache = std::make_shared<ReplayCache>(sweep_config.cache_dir);
  }
  LlmClient client(backend, cache, sweep_config.concurrency);

  Report report;
  report.config = sweep_config;
  report.template_hash = templates.hash();
  report.eval_size = bundle.eval_set.size();
  report.sweep = true;
  for (int v : values) {
    report.outcomes.push_back(
        run_outcome(sweep_config, bundle, Strategy::pedal, v, client, templates));
  }
  report.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------------------
// Emission

namespace {

std::string fixed2(double value) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << value;
  return out.str();
}

std::string mean_std(double mean, double std) { return fixed2(mean) + " +/- " + fixed2(std); }

}  // namespace

std::string render_table(const Report& report) {
  std::ostringstream out;
  out << "Dataset: " << to_string(report.config.dataset) << " (eval size: " << report.eval_size
      << ")\n";
  out << "Model: " << report.config.model << "  Seeds:";
  for (std::uint64_t s : report.config.seeds) out << " " << s;
  out << "\nTemplate hash: " << report.template_hash << "\n\n";

  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Approach", "Accuracy", "Input tokens", "Output tokens"});
  std::size_t best = 0;
  double best_acc = -1.0;
  for (std::size_t i = 0; i < report.outcomes.size(); ++i) {
    const StrategyOutcome& o = report.outcomes[i];
    std::string name = to_string(o.strategy);
    if (report.sweep) name += " (num_prompts=" + std::to_string(o.num_prompts) + ")";
    if (!o.summary) {
      rows.push_back({name, "failed", "-", "-"});
      continue;
    }
    rows.push_back({name, mean_std(o.summary->accuracy_mean, o.summary->accuracy_std),
                    mean_std(o.summary->input_tokens_mean, o.summary->input_tokens_std),
                    mean_std(o.summary->output_tokens_mean, o.summary->output_tokens_std)});
    if (o.summary->accuracy_mean > best_acc) {
      best_acc = o.summary->accuracy_mean;
      best = rows.size() - 1;
    }
  }

  std::vector<std::size_t> widths(4, 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < 4; ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << (best_acc >= 0.0 && r == best ? "* " : "  ");
    for (std::size_t c = 0; c < 4; ++c) {
      out << std::left << std::setw(static_cast<int>(widths[c])) << rows[r][c];
      out << (c + 1 < 4 ? " | " : "\n");
    }
    if (r == 0) {
      out << "  ";
      for (std::size_t c = 0; c < 4; ++c) {
        out << std::string(widths[c], '-') << (c + 1 < 4 ? "-+-" : "\n");
      }
    }
  }
  out << "\n(* best accuracy)\n";
  return out.str();
}

std::pair<std::string, std::string> emit_report(const Report& report,
                                                const std::string& output_path) {
  const std::string json_path = output_path + ".json";
  const std::string table_path = output_path + ".txt";

  std::ofstream json_out(json_path);
  if (!json_out) throw std::runtime_error("cannot write report file: " + json_path);
  json_out << report.to_json().dump(2) << "\n";

  std::ofstream table_out(table_path);
  if (!table_out) throw std::runtime_error("cannot write table file: " + table_path);
  table_out << render_table(report);

  return {json_path, table_path};
}

}  // namespace pedal

#include "pedal/strategies.hpp"

namespace pedal {

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::greedy: return "greedy";
    case Strategy::usc: return "usc";
    case Strategy::ude: return "ude";
    case Strategy::pedal: return "pedal";
  }
  return "unknown";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "greedy") return Strategy::greedy;
  if (name == "usc") return Strategy::usc;
  if (name == "ude") return Strategy::ude;
  if (name == "pedal") return Strategy::pedal;
  throw ConfigError("unknown strategy: " + name);
}

namespace {

void score(ExampleResult& result, const Example& example) {
  result.final_answer = extract_answer(result.final_text, example);
  result.correct = is_exact_match(result.final_answer, example.gold, example.kind);
}

std::vector<std::string> truncated_texts(const std::vector<Candidate>& candidates,
                                         int char_budget, bool* truncated) {
  std::vector<std::string> texts;
  for (const Candidate& c : candidates) {
    if (char_budget > 0 && c.text.size() > static_cast<std::size_t>(char_budget)) {
      texts.push_back(c.text.substr(0, char_budget));
      *truncated = true;
    } else {
      texts.push_back(c.text);
    }
  }
  return texts;
}

void aggregate(ExampleResult& result, const Example& example, const StrategyConfig& cfg,
               LlmClient& client, const PromptTemplates& templates) {
  std::vector<std::string> texts =
      truncated_texts(result.candidates, cfg.candidate_char_budget, &result.truncated);
  SelectionOutcome selection = select_most_consistent(example, texts, client, templates,
                                                      cfg.model, cfg.selection_max_tokens);
  result.selected_index = selection.index;
  result.aggregation_fallback = selection.fallback_used;
  result.llm_calls += selection.llm_calls;
  result.total_usage += selection.usage;
  result.final_text = result.candidates[selection.index - 1].text;
}

ExampleResult with_context(const Example& example, const char* what, ExampleResult (*fn)(
                               const Example&, const DatasetBundle&, const StrategyConfig&,
                               LlmClient&, const PromptTemplates&),
                           const DatasetBundle& bundle, const StrategyConfig& cfg,
                           LlmClient& client, const PromptTemplates& templates) {
  try {
    return fn(example, bundle, cfg, client, templates);
  } catch (const TransportError& e) {
    throw TransportError(std::string(what) + " on example " + example.id + ": " + e.what());
  } catch (const ProtocolError& e) {
    throw ProtocolError(std::string(what) + " on example " + example.id + ": " + e.what());
  }
}

}  // namespace

ExampleResult run_greedy(const Example& example, const DatasetBundle& bundle,
                         const StrategyConfig& cfg, LlmClient& client,
                         const PromptTemplates& templates) {
  ExemplarSet set = sample_exemplars(bundle.exemplar_pool, cfg.num_exemplars, cfg.run_seed);
  RenderedPrompt prompt = render_answer_prompt(set, example, PromptStyle::direct, templates);

  DecodingParams params;
  params.max_tokens = cfg.gen_max_tokens;
  auto responses = client.complete(prompt, params, cfg.model);

  ExampleResult result;
  result.example_id = example.id;
  const LlmResponse& r = responses[0];
  result.candidates.push_back({r.text, extract_answer(r.text, example), r.usage});
  result.final_text = r.text;
  result.llm_calls = 1;
  result.total_usage = r.usage;
  score(result, example);
  return result;
}

ExampleResult run_usc(const Example& example, const DatasetBundle& bundle,
                      const StrategyConfig& cfg, LlmClient& client,
                      const PromptTemplates& templates) {
  if (cfg.num_intermediate < 2) throw ConfigError("usc requires num_intermediate >= 2");
  ExemplarSet set = sample_exemplars(bundle.exemplar_pool, cfg.num_exemplars, cfg.run_seed);
  RenderedPrompt prompt = render_answer_prompt(set, example, PromptStyle::cot, templates);

  DecodingParams params;
  params.temperature = cfg.sample_temperature;
  params.top_p = cfg.sample_top_p;
  params.max_tokens = cfg.gen_max_tokens;
  params.n_samples = cfg.num_intermediate;
  auto responses = client.complete(prompt, params, cfg.model);

  ExampleResult result;
  result.example_id = example.id;
  result.llm_calls = cfg.num_intermediate;
  for (const LlmResponse& r : responses) {
    result.candidates.push_back({r.text, extract_answer(r.text, example), r.usage});
    result.total_usage += r.usage;
  }
  aggregate(result, example, cfg, client, templates);
  score(result, example);
  return result;
}

ExampleResult run_ude(const Example& example, const DatasetBundle& bundle,
                      const StrategyConfig& cfg, LlmClient& client,
                      const PromptTemplates& templates) {
  if (cfg.num_prompts < 2) throw ConfigError("ude requires num_prompts >= 2");
  std::vector<ExemplarSet> sets;
  for (int i = 0; i < cfg.num_prompts; ++i) {
    sets.push_back(sample_exemplars(bundle.exemplar_pool, cfg.num_exemplars,
                                    derived_prompt_seed(cfg.run_seed, i)));
  }
  RenderedPrompt prompt = render_unified_prompt(sets, example, templates);

  DecodingParams params;
  params.max_tokens = cfg.gen_max_tokens;
  auto responses = client.complete(prompt, params, cfg.model);

  ExampleResult result;
  result.example_id = example.id;
  const LlmResponse& r = responses[0];
  result.candidates.push_back({r.text, extract_answer(r.text, example), r.usage});
  result.final_text = r.text;
  result.llm_calls = 1;
  result.total_usage = r.usage;
  score(result, example);
  return result;
}

ExampleResult run_pedal(const Example& example, const DatasetBundle& bundle,
                        const StrategyConfig& cfg, LlmClient& client,
                        const PromptTemplates& templates) {
  if (cfg.num_prompts < 2) throw ConfigError("pedal requires num_prompts >= 2");

  ExampleResult result;
  result.example_id = example.id;
  DecodingParams params;
  params.max_tokens = cfg.gen_max_tokens;
  const PromptStyle style = cfg.pedal_cot ? PromptStyle::cot : PromptStyle::direct;

  for (int i = 0; i < cfg.num_prompts; ++i) {
    ExemplarSet set = sample_exemplars(bundle.exemplar_pool, cfg.num_exemplars,
                                       derived_prompt_seed(cfg.run_seed, i));
    RenderedPrompt prompt = render_answer_prompt(set, example, style, templates);
    auto responses = client.complete(prompt, params, cfg.model);
    const LlmResponse& r = responses[0];
    result.candidates.push_back({r.text, extract_answer(r.text, example), r.usage});
    result.total_usage += r.usage;
    ++result.llm_calls;
  }
  aggregate(result, example, cfg, client, templates);
  score(result, example);
  return result;
}

ExampleResult run_strategy(const Example& example, const DatasetBundle& bundle,
                           const StrategyConfig& cfg, LlmClient& client,
                           const PromptTemplates& templates) {
  switch (cfg.strategy) {
    case Strategy::greedy:
      return with_context(example, "greedy", &run_greedy, bundle, cfg, client, templates);
    case Strategy::usc:
      return with_context(example, "usc", &run_usc, bundle, cfg, client, templates);
    case Strategy::ude:
      return with_context(example, "ude", &run_ude, bundle, cfg, client, templates);
    case Strategy::pedal:
      return with_context(example, "pedal", &run_pedal, bundle, cfg, client, templates);
  }
  throw ConfigError("unknown strategy");
}

}  // namespace pedal

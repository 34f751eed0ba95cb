#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "pedal/aggregation.hpp"
#include "pedal/datasets.hpp"
#include "pedal/evaluation.hpp"
#include "pedal/llm_client.hpp"
#include "pedal/prompting.hpp"

using namespace pedal;

namespace {

const std::string kFixtures = PEDAL_FIXTURE_DIR;

const std::vector<Example>& pool() {
  static const std::vector<Example> p = load_svamp(kFixtures + "/svamp_pool.json");
  return p;
}

const std::vector<Example>& eval_set() {
  static const std::vector<Example> e = load_svamp(kFixtures + "/svamp_eval.json");
  return e;
}

void bench_render_answer_prompt(benchmark::State& state) {
  auto templates = PromptTemplates::defaults();
  auto exemplars = sample_exemplars(pool(), 3, 42);
  for (auto _ : state) {
    auto prompt =
        render_answer_prompt(exemplars, eval_set()[0], PromptStyle::direct, templates);
    benchmark::DoNotOptimize(prompt);
  }
}
BENCHMARK(bench_render_answer_prompt);

void bench_render_unified_prompt(benchmark::State& state) {
  auto templates = PromptTemplates::defaults();
  std::vector<ExemplarSet> sets;
  for (int i = 0; i < 3; ++i) sets.push_back(sample_exemplars(pool(), 3, 42 + i));
  for (auto _ : state) {
    auto prompt = render_unified_prompt(sets, eval_set()[0], templates);
    benchmark::DoNotOptimize(prompt);
  }
}
BENCHMARK(bench_render_unified_prompt);

void bench_sample_exemplars(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto set = sample_exemplars(pool(), 3, seed++);
    benchmark::DoNotOptimize(set);
  }
}
BENCHMARK(bench_sample_exemplars);

void bench_extract_numeric(benchmark::State& state) {
  const std::string text =
      "First add 12 and 7 to get 19, then multiply by 2 for 38 items in all. "
      "Subtract the 3 broken ones. Answer: 35";
  for (auto _ : state) {
    auto value = extract_numeric(text);
    benchmark::DoNotOptimize(value);
  }
}
BENCHMARK(bench_extract_numeric);

void bench_parse_selection(benchmark::State& state) {
  const std::string text =
      "Response 1 and Response 2 disagree; weighing both carefully, "
      "the most consistent response is Response 3";
  for (auto _ : state) {
    auto picked = parse_selection(text, 4);
    benchmark::DoNotOptimize(picked);
  }
}
BENCHMARK(bench_parse_selection);

void bench_cache_key(benchmark::State& state) {
  std::vector<Message> messages = {{Role::system, "You answer arithmetic word problems."},
                                   {Role::user, "Question: how many pears in total?"}};
  DecodingParams params;
  for (auto _ : state) {
    auto key = cache_key("bench-model", messages, params, 0);
    benchmark::DoNotOptimize(key);
  }
}
BENCHMARK(bench_cache_key);

}  // namespace

BENCHMARK_MAIN();

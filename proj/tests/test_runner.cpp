#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "doctest.h"
#include "pedal/datasets.hpp"
#include "pedal/runner.hpp"

using namespace pedal;

namespace {

const std::string kFixtures = PEDAL_FIXTURE_DIR;

/// Script covering all strategies over a SVAMP eval file: per-example CoT
/// and direct rules plus one selection rule, everything answered correctly.
std::shared_ptr<MockBackend> full_mock(const std::vector<Example>& eval_set) {
  std::vector<MockBackend::Rule> rules;
  rules.push_back({{"most consistent"},
                   std::nullopt,
                   {{"The most consistent response is Response 1", {40, 6}}}});
  for (const Example& ex : eval_set) {
    rules.push_back({{"Step by step:", ex.question},
                     std::nullopt,
                     {{"Thinking. Answer: " + ex.gold, {20, 80}},
                      {"Thinking more. Answer: " + ex.gold, {20, 82}},
                      {"Thinking again. Answer: " + ex.gold, {20, 84}}}});
    rules.push_back({{ex.question}, std::nullopt, {{"Answer: " + ex.gold, {100, 30}}}});
  }
  return std::make_shared<MockBackend>(std::move(rules));
}

RunConfig small_config() {
  RunConfig config;
  config.dataset = DatasetKind::svamp;
  config.eval_path = kFixtures + "/svamp_eval_small.json";
  config.pool_path = kFixtures + "/svamp_pool.json";
  config.seeds = {0, 1};
  config.model = "mock-model";
  config.mock_script = "unused";  // backend injected directly in tests
  config.concurrency = 3;
  return config;
}

}  // namespace

TEST_CASE("execute_run produces one cell per strategy and seed") {
  RunConfig config = small_config();
  config.strategies = {Strategy::greedy, Strategy::pedal};
  auto eval_set = load_svamp(config.eval_path);
  auto mock = full_mock(eval_set);

  Report report = execute_run(config, mock);
  REQUIRE(report.outcomes.size() == 2);
  CHECK(report.eval_size == 5);
  for (const StrategyOutcome& outcome : report.outcomes) {
    CHECK(outcome.cells.size() == 2);
    REQUIRE(outcome.summary.has_value());
    CHECK(outcome.summary->n_seeds == 2);
    CHECK(outcome.summary->accuracy_mean == doctest::Approx(100.0));
  }
  // Call-count law x example count: greedy 5x1 per seed, pedal 5x4 per seed.
  CHECK(mock->samples_served() == 2 * (5 * 1) + 2 * (5 * 4));
}

TEST_CASE("a failing cell is recorded while other cells proceed") {
  RunConfig config = small_config();
  config.strategies = {Strategy::greedy, Strategy::usc};
  auto eval_set = load_svamp(config.eval_path);
  // Only CoT and selection rules: greedy's direct prompts (which carry
  // neither a rationale marker nor selection wording) are scripted misses.
  std::vector<MockBackend::Rule> rules;
  rules.push_back({{"most consistent"},
                   std::nullopt,
                   {{"The most consistent response is Response 1", {40, 6}}}});
  for (const Example& ex : eval_set) {
    rules.push_back({{"Step by step:", ex.question},
                     std::nullopt,
                     {{"Thinking. Answer: " + ex.gold, {20, 80}}}});
  }
  auto mock = std::make_shared<MockBackend>(std::move(rules));

  Report report = execute_run(config, mock);
  REQUIRE(report.outcomes.size() == 2);
  const StrategyOutcome& greedy = report.outcomes[0];
  CHECK(!greedy.summary.has_value());
  for (const CellResult& cell : greedy.cells) {
    CHECK(cell.failure.has_value());
    CHECK(!cell.metrics.has_value());
  }
  const StrategyOutcome& usc = report.outcomes[1];
  REQUIRE(usc.summary.has_value());
  CHECK(usc.summary->accuracy_mean == doctest::Approx(100.0));
}

TEST_CASE("empty eval set is a configuration error") {
  RunConfig config = small_config();
  std::string path = "/tmp/pedal_test_empty_eval.json";
  std::ofstream(path) << "[]";
  config.eval_path = path;
  CHECK_THROWS_AS(execute_run(config, full_mock({})), ConfigError);
}

TEST_CASE("config validation catches strategy preconditions") {
  RunConfig config = small_config();
  config.strategies = {Strategy::pedal};
  config.num_prompts = 1;
  CHECK_THROWS_AS(config.validate(), ConfigError);

  config = small_config();
  config.seeds = {};
  CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("run config round-trips through json") {
  RunConfig config = small_config();
  config.strategies = {Strategy::ude};
  config.subsample_fraction = 0.3;
  config.pedal_cot = true;
  RunConfig back = RunConfig::from_json(config.to_json());
  CHECK(back.to_json() == config.to_json());
  CHECK(back.strategies.size() == 1);
  CHECK(back.strategies[0] == Strategy::ude);
  CHECK(back.subsample_fraction == doctest::Approx(0.3));
}

TEST_CASE("report round-trips and re-emits identical bytes") {
  RunConfig config = small_config();
  config.strategies = {Strategy::greedy, Strategy::ude};
  config.verbose_examples = true;
  auto mock = full_mock(load_svamp(config.eval_path));
  Report report = execute_run(config, mock);

  std::string base = "/tmp/pedal_test_report";
  emit_report(report, base);
  std::ifstream in(base + ".json");
  nlohmann::json doc;
  in >> doc;
  Report back = Report::from_json(doc);
  CHECK(back.to_json() == report.to_json());

  std::string base2 = "/tmp/pedal_test_report2";
  emit_report(back, base2);
  auto slurp = [](const std::string& p) {
    std::ifstream f(p);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  CHECK(slurp(base + ".json") == slurp(base2 + ".json"));
  CHECK(slurp(base + ".txt") == slurp(base2 + ".txt"));

  SUBCASE("verbose report carries per-example selected indices") {
    bool found = false;
    for (const StrategyOutcome& o : back.outcomes) {
      for (const CellResult& cell : o.cells) {
        for (const ExampleResult& r : cell.examples) {
          if (r.selected_index) found = true;
          CHECK(!r.example_id.empty());
        }
        CHECK(cell.examples.size() == 5);
      }
    }
    CHECK(!found);  // greedy and ude never aggregate
  }
}

TEST_CASE("render_table marks the best accuracy row") {
  RunConfig config = small_config();
  config.strategies = {Strategy::greedy, Strategy::pedal};
  auto eval_set = load_svamp(config.eval_path);
  // Make greedy wrong on every example, pedal right: greedy answers a
  // constant wrong number, pedal's selection picks candidate 1 which the
  // direct rule answers correctly... instead, simplest split: wrong direct
  // answers mean both fail, so instead check marking on distinct summaries
  // built by hand.
  Report report;
  report.config = config;
  report.eval_size = 5;
  StrategyOutcome a, b;
  a.strategy = Strategy::greedy;
  a.summary = SummaryMetrics{60.0, 1.0, 100.0, 0.0, 30.0, 0.0, 2};
  b.strategy = Strategy::pedal;
  b.summary = SummaryMetrics{80.0, 2.0, 400.0, 0.0, 35.0, 0.0, 2};
  report.outcomes = {a, b};

  std::string table = render_table(report);
  CHECK(table.find("Approach") != std::string::npos);
  CHECK(table.find("Accuracy") != std::string::npos);
  CHECK(table.find("Input tokens") != std::string::npos);
  CHECK(table.find("Output tokens") != std::string::npos);
  CHECK(table.find("* pedal") != std::string::npos);
  CHECK(table.find("80.00 +/- 2.00") != std::string::npos);
  CHECK(table.find("* greedy") == std::string::npos);
}

TEST_CASE("sweep produces one row per num_prompts value") {
  RunConfig config = small_config();
  auto mock = full_mock(load_svamp(config.eval_path));
  Report report = sweep_num_prompts(config, {2, 3, 4}, mock);
  CHECK(report.sweep);
  REQUIRE(report.outcomes.size() == 3);
  CHECK(report.outcomes[0].num_prompts == 2);
  CHECK(report.outcomes[2].num_prompts == 4);
  for (const StrategyOutcome& o : report.outcomes) {
    CHECK(o.strategy == Strategy::pedal);
    REQUIRE(o.summary.has_value());
  }
  std::string table = render_table(report);
  CHECK(table.find("num_prompts=2") != std::string::npos);
  CHECK(table.find("num_prompts=3") != std::string::npos);
  CHECK(table.find("num_prompts=4") != std::string::npos);

  SUBCASE("out-of-range values are usage errors") {
    CHECK_THROWS_AS(sweep_num_prompts(config, {1}, mock), ConfigError);
    CHECK_THROWS_AS(sweep_num_prompts(config, {9}, mock), ConfigError);
  }
}

TEST_CASE("subsampled eval set is materialized once per run") {
  RunConfig config = small_config();
  config.eval_path = kFixtures + "/svamp_eval.json";
  config.strategies = {Strategy::greedy};
  config.subsample_fraction = 0.3;
  auto mock = full_mock(load_svamp(config.eval_path));
  Report report = execute_run(config, mock);
  CHECK(report.eval_size == 6);  // floor(0.3 * 20)
  for (const StrategyOutcome& o : report.outcomes) {
    for (const CellResult& cell : o.cells) {
      REQUIRE(cell.metrics.has_value());
      CHECK(cell.metrics->n_examples == 6);
    }
  }
}

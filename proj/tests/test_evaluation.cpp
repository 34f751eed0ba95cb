#include <algorithm>
#include <random>
#include <regex>
#include <string>

#include "doctest.h"
#include "pedal/evaluation.hpp"
#include "pedal/numeric.hpp"

using namespace pedal;

namespace {

/// Regex-based oracle for numeric extraction, independent of the hand-rolled
/// scanner: enumerate all number tokens with their positions, then apply the
/// sentinel-first / last-number rules over the enumeration.
std::optional<std::string> oracle_extract_numeric(const std::string& text) {
  static const std::regex number(R"((?:^|[^0-9])(-?[0-9]+(?:\.[0-9]+)?))");
  std::vector<std::pair<std::size_t, std::string>> tokens;
  auto begin = std::sregex_iterator(text.begin(), text.end(), number);
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    tokens.emplace_back(static_cast<std::size_t>(it->position(1)), (*it)[1].str());
  }
  std::size_t sentinel = text.rfind("Answer:");
  std::optional<std::string> raw;
  if (sentinel != std::string::npos) {
    for (const auto& [pos, tok] : tokens) {
      if (pos >= sentinel + 7) {
        raw = tok;
        break;
      }
    }
  } else if (!tokens.empty()) {
    raw = tokens.back().second;
  }
  if (!raw) return std::nullopt;
  return canonical_decimal(*raw);
}

std::vector<Choice> abcd() {
  return {{"A", "magnetism"}, {"B", "gravity"}, {"C", "friction"}, {"D", "inertia"}};
}

}  // namespace

TEST_CASE("extract_numeric sentinel and fallback rules") {
  CHECK(extract_numeric("First add 3 and 4. Answer: 42.") == "42");
  CHECK(extract_numeric("The total is 3.50") == "3.5");
  CHECK(!extract_numeric("no numbers here"));
  CHECK(extract_numeric("Answer: 1. Wait, Answer: 2") == "2");  // last sentinel wins
  CHECK(extract_numeric("I counted 5 then 7 then 9") == "9");   // last number, no sentinel
  CHECK(extract_numeric("Answer: -3.20") == "-3.2");
  CHECK(!extract_numeric(""));
}

TEST_CASE("extract_numeric agrees with the regex oracle on adversarial strings") {
  const char* cases[] = {
      "Answer: 42.",
      "The total is 3.50",
      "no numbers here",
      "Answer: none, but earlier I said 7",
      "3-4 equals -1. Answer: -1",
      "versions 1.2.3 and 4",
      "Answer:Answer: 08",
      "0.50 then Answer: 0.5",
      "trailing dot 5.",
      "-",
      "- 7",
      "Answer: ",
      "9",
      "a1b2c3",
      "Answer: x7x",
  };
  for (const char* c : cases) {
    CAPTURE(c);
    CHECK(extract_numeric(c) == oracle_extract_numeric(c));
  }
}

TEST_CASE("extract_numeric matches oracle on random strings") {
  std::mt19937_64 gen(7);
  const std::string alphabet = "0123456789Answer:. -ab\n";
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    std::size_t len = gen() % 40;
    for (std::size_t i = 0; i < len; ++i) text += alphabet[gen() % alphabet.size()];
    CAPTURE(text);
    CHECK(extract_numeric(text) == oracle_extract_numeric(text));
  }
}

TEST_CASE("extract_choice rules") {
  CHECK(extract_choice("Answer: B", abcd()) == "B");
  CHECK(extract_choice("the answer is gravity", abcd()) == "B");
  CHECK(extract_choice("Answer: A or B", abcd()) == "A");
  CHECK(extract_choice("Answer: b", abcd()) == "B");  // extract_answer canonicalizes later
  CHECK(!extract_choice("no clue", abcd()));
  CHECK(!extract_choice("Answer: E", abcd()));
  // Label match takes precedence over choice-text match.
  CHECK(extract_choice("Answer: C, even though gravity sounds right", abcd()) == "C");
}

TEST_CASE("is_exact_match") {
  CHECK(is_exact_match(std::string("3.5"), "3.5", DatasetKind::svamp));
  CHECK(is_exact_match(std::string("3.50"), "3.5", DatasetKind::svamp));
  CHECK(!is_exact_match(std::nullopt, "3.5", DatasetKind::svamp));
  CHECK(is_exact_match(std::string("b"), "B", DatasetKind::arc));
  CHECK(!is_exact_match(std::string("A"), "B", DatasetKind::arc));
  CHECK(!is_exact_match(std::string("7"), "8", DatasetKind::svamp));
}

TEST_CASE("compute_seed_metrics") {
  std::vector<ScoredExample> results = {
      {true, {100, 50}, 1}, {true, {100, 50}, 1}, {true, {120, 60}, 4}, {false, {80, 40}, 4}};
  auto m = compute_seed_metrics(results, 7);
  CHECK(m.seed == 7);
  CHECK(m.n_examples == 4);
  CHECK(m.n_correct == 3);
  CHECK(m.accuracy == doctest::Approx(0.75));
  CHECK(m.avg_input_tokens == doctest::Approx(100.0));
  CHECK(m.avg_output_tokens == doctest::Approx(50.0));
  CHECK(m.total_calls == 10);

  SUBCASE("empty results are an error") {
    CHECK_THROWS_AS(compute_seed_metrics({}, 0), ConfigError);
  }
  SUBCASE("scoring is order independent") {
    std::vector<ScoredExample> shuffled = {results[3], results[1], results[0], results[2]};
    auto p = compute_seed_metrics(shuffled, 7);
    CHECK(p.accuracy == m.accuracy);
    CHECK(p.avg_input_tokens == m.avg_input_tokens);
    CHECK(p.avg_output_tokens == m.avg_output_tokens);
    CHECK(p.total_calls == m.total_calls);
  }
}

TEST_CASE("compute_seed_metrics over a hand-summed 5-example script") {
  // Scripted usages: (100,30),(110,35),(90,25),(120,40),(80,20).
  // Hand sums: input 500/5 = 100, output 150/5 = 30.
  std::vector<ScoredExample> results = {{true, {100, 30}, 1},
                                        {true, {110, 35}, 1},
                                        {false, {90, 25}, 1},
                                        {true, {120, 40}, 1},
                                        {false, {80, 20}, 1}};
  auto m = compute_seed_metrics(results, 0);
  CHECK(m.avg_input_tokens == doctest::Approx(100.0));
  CHECK(m.avg_output_tokens == doctest::Approx(30.0));
  CHECK(m.accuracy == doctest::Approx(0.6));
}

TEST_CASE("summarize means and sample standard deviations") {
  SeedRunMetrics a, b, c;
  a.accuracy = 0.01;
  b.accuracy = 0.02;
  c.accuracy = 0.03;
  a.n_examples = b.n_examples = c.n_examples = 100;

  auto s = summarize({a, b, c});
  CHECK(s.n_seeds == 3);
  CHECK(s.accuracy_mean == doctest::Approx(2.0));  // percent
  CHECK(s.accuracy_std == doctest::Approx(1.0));

  SUBCASE("single seed yields zero std") {
    auto single = summarize({a});
    CHECK(single.accuracy_std == 0.0);
    CHECK(single.n_seeds == 1);
  }
  SUBCASE("identical seeds yield zero std") {
    auto same = summarize({b, b, b});
    CHECK(same.accuracy_std == doctest::Approx(0.0));
    CHECK(same.accuracy_mean == doctest::Approx(2.0));
  }
}

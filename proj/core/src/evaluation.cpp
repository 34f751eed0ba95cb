#include "pedal/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "pedal/numeric.hpp"

namespace pedal {

namespace {

constexpr const char* kSentinel = "Answer:";

bool is_number_start(const std::string& text, std::size_t i) {
  unsigned char c = text[i];
  if (std::isdigit(c)) return true;
  if ((c == '-') && i + 1 < text.size() &&
      std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
    // A '-' directly after a digit is treated as punctuation ("3-4"), not a sign.
    return i == 0 || !std::isdigit(static_cast<unsigned char>(text[i - 1]));
  }
  return false;
}

/// Longest number token starting at i: [-]digits[.digits]
std::string read_number(const std::string& text, std::size_t i, std::size_t* end) {
  std::size_t j = i;
  if (text[j] == '-') ++j;
  while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
  if (j < text.size() && text[j] == '.' && j + 1 < text.size() &&
      std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
    ++j;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
  }
  *end = j;
  return text.substr(i, j - i);
}

std::optional<std::string> first_number(const std::string& text, std::size_t from) {
  for (std::size_t i = from; i < text.size(); ++i) {
    if (is_number_start(text, i)) {
      std::size_t end;
      return read_number(text, i, &end);
    }
  }
  return std::nullopt;
}

std::optional<std::string> last_number(const std::string& text) {
  std::optional<std::string> found;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_number_start(text, i)) {
      std::size_t end;
      found = read_number(text, i, &end);
      i = end;
    } else {
      ++i;
    }
  }
  return found;
}

bool token_at(const std::string& haystack, std::size_t pos, const std::string& token) {
  if (pos + token.size() > haystack.size()) return false;
  for (std::size_t i = 0; i < token.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(haystack[pos + i])) !=
        std::tolower(static_cast<unsigned char>(token[i]))) {
      return false;
    }
  }
  auto boundary = [&](std::size_t p, bool before) {
    if (before ? p == 0 : p >= haystack.size()) return true;
    unsigned char c = haystack[before ? p - 1 : p];
    return !std::isalnum(c);
  };
  return boundary(pos, true) && boundary(pos + token.size(), false);
}

std::vector<std::size_t> token_positions(const std::string& text, std::size_t from,
                                         const std::string& token) {
  std::vector<std::size_t> out;
  for (std::size_t i = from; i + token.size() <= text.size(); ++i) {
    if (token_at(text, i, token)) out.push_back(i);
  }
  return out;
}

bool contains_ci(const std::string& haystack, std::size_t from, const std::string& needle) {
  if (needle.empty()) return false;
  for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < needle.size(); ++j) {
      if (std::tolower(static_cast<unsigned char>(haystack[i + j])) !=
          std::tolower(static_cast<unsigned char>(needle[j]))) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

std::optional<std::string> choice_in_region(const std::string& text, std::size_t from,
                                            const std::vector<Choice>& choices,
                                            bool prefer_last) {
  // Label token match takes precedence over full-text match.
  std::optional<std::string> best_label;
  std::size_t best_pos = 0;
  for (const Choice& c : choices) {
    auto positions = token_positions(text, from, c.label);
    if (positions.empty()) continue;
    std::size_t pos = prefer_last ? positions.back() : positions.front();
    if (!best_label || (prefer_last ? pos > best_pos : pos < best_pos)) {
      best_label = c.label;
      best_pos = pos;
    }
  }
  if (best_label) return best_label;

  std::optional<std::string> unique_text_label;
  for (const Choice& c : choices) {
    if (contains_ci(text, from, c.text)) {
      if (unique_text_label) return std::nullopt;  // ambiguous
      unique_text_label = c.label;
    }
  }
  return unique_text_label;
}

double mean(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs, double m) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::optional<std::string> extract_numeric(const std::string& text) {
  std::size_t sentinel = text.rfind(kSentinel);
  std::optional<std::string> raw;
  if (sentinel != std::string::npos) {
    raw = first_number(text, sentinel + std::char_traits<char>::length(kSentinel));
  } else {
    raw = last_number(text);
  }
  if (!raw) return std::nullopt;
  return canonical_decimal(*raw);
}

std::optional<std::string> extract_choice(const std::string& text,
                                          const std::vector<Choice>& choices) {
  if (choices.empty()) return std::nullopt;
  std::size_t sentinel = text.rfind(kSentinel);
  if (sentinel != std::string::npos) {
    return choice_in_region(text, sentinel + std::char_traits<char>::length(kSentinel), choices,
                            /*prefer_last=*/false);
  }
  return choice_in_region(text, 0, choices, /*prefer_last=*/true);
}

std::optional<std::string> extract_answer(const std::string& text, const Example& example) {
  if (example.kind == DatasetKind::svamp) return extract_numeric(text);
  auto label = extract_choice(text, example.choices);
  if (!label) return std::nullopt;
  // Canonicalize to the label as spelled in the choice list.
  for (const Choice& c : example.choices) {
    if (c.label.size() == label->size() &&
        std::equal(c.label.begin(), c.label.end(), label->begin(), [](char a, char b) {
          return std::tolower(static_cast<unsigned char>(a)) ==
                 std::tolower(static_cast<unsigned char>(b));
        })) {
      return c.label;
    }
  }
  return label;
}

bool is_exact_match(const std::optional<std::string>& pred, const std::string& gold,
                    DatasetKind kind) {
  if (!pred) return false;
  if (kind == DatasetKind::svamp) {
    auto p = canonical_decimal(*pred);
    auto g = canonical_decimal(gold);
    return p && g && *p == *g;
  }
  if (pred->size() != gold.size()) return false;
  return std::equal(pred->begin(), pred->end(), gold.begin(), [](char a, char b) {
    return std::tolower(static_cast<unsigned char>(a)) ==
           std::tolower(static_cast<unsigned char>(b));
  });
}

SeedRunMetrics compute_seed_metrics(const std::vector<ScoredExample>& results,
                                    std::uint64_t seed) {
  if (results.empty()) throw ConfigError("cannot compute metrics over zero results");
  SeedRunMetrics m;
  m.seed = seed;
  m.n_examples = static_cast<int>(results.size());
  long input = 0;
  long output = 0;
  for (const ScoredExample& r : results) {
    if (r.correct) ++m.n_correct;
    input += r.total_usage.prompt_tokens;
    output += r.total_usage.completion_tokens;
    m.total_calls += r.llm_calls;
  }
  const auto n = static_cast<double>(m.n_examples);
  m.accuracy = static_cast<double>(m.n_correct) / n;
  m.avg_input_tokens = static_cast<double>(input) / n;
  m.avg_output_tokens = static_cast<double>(output) / n;
  return m;
}

SummaryMetrics summarize(const std::vector<SeedRunMetrics>& per_seed) {
  if (per_seed.empty()) throw ConfigError("cannot summarize zero seed runs");
  std::vector<double> acc, in_tok, out_tok;
  for (const SeedRunMetrics& m : per_seed) {
    acc.push_back(m.accuracy * 100.0);
    in_tok.push_back(m.avg_input_tokens);
    out_tok.push_back(m.avg_output_tokens);
  }
  SummaryMetrics s;
  s.n_seeds = static_cast<int>(per_seed.size());
  s.accuracy_mean = mean(acc);
  s.accuracy_std = sample_std(acc, s.accuracy_mean);
  s.input_tokens_mean = mean(in_tok);
  s.input_tokens_std = sample_std(in_tok, s.input_tokens_mean);
  s.output_tokens_mean = mean(out_tok);
  s.output_tokens_std = sample_std(out_tok, s.output_tokens_mean);
  return s;
}

}  // namespace pedal

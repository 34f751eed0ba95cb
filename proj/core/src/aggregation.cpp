#include "pedal/aggregation.hpp"

#include <cctype>

namespace pedal {

namespace {

void replace_all(std::string& text, const std::string& placeholder, const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
}

/// First digit-run in text[from..] whose value lies in [1, n]; 0 if none.
int first_int_in_range(const std::string& text, std::size_t from, int n) {
  std::size_t i = from;
  while (i < text.size()) {
    if (std::isdigit(static_cast<unsigned char>(text[i]))) {
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i - start <= 6) {
        int value = std::stoi(text.substr(start, i - start));
        if (value >= 1 && value <= n) return value;
      }
    } else {
      ++i;
    }
  }
  return 0;
}

}  // namespace

RenderedPrompt render_selection_prompt(const Example& example,
                                       const std::vector<std::string>& candidates,
                                       const PromptTemplates& templates) {
  if (candidates.size() < 2) {
    throw ConfigError("selection prompt requires at least 2 candidates");
  }
  std::string block;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    block += "Response " + std::to_string(i + 1) + ": " + candidates[i] + "\n";
  }
  std::string choices;
  for (const Choice& c : example.choices) choices += c.label + ") " + c.text + "\n";

  std::string content = templates.selection;
  replace_all(content, "{question}", example.question);
  replace_all(content, "{choices}", choices);
  replace_all(content, "{candidates}", block);

  RenderedPrompt prompt;
  prompt.style = PromptStyle::selection;
  prompt.messages.push_back({Role::user, std::move(content)});
  return prompt;
}

std::pair<int, bool> parse_selection(const std::string& text, int n) {
  if (n >= 1) {
    std::size_t anchor = text.rfind("Response");
    if (anchor != std::string::npos) {
      int value = first_int_in_range(text, anchor + 8, n);
      if (value) return {value, false};
    }
    int value = first_int_in_range(text, 0, n);
    if (value) return {value, false};
  }
  return {1, true};
}

SelectionOutcome select_most_consistent(const Example& example,
                                        const std::vector<std::string>& candidates,
                                        LlmClient& client, const PromptTemplates& templates,
                                        const std::string& model, int max_tokens) {
  if (candidates.empty()) throw ConfigError("no candidates to select from");

  SelectionOutcome outcome;
  if (candidates.size() == 1) return outcome;  // index 1, no call, zero usage

  RenderedPrompt prompt = render_selection_prompt(example, candidates, templates);
  DecodingParams params;  // greedy regardless of the generation params
  params.max_tokens = max_tokens;
  auto responses = client.complete(prompt, params, model);
  outcome.raw_text = responses[0].text;
  outcome.usage = responses[0].usage;
  outcome.llm_calls = 1;
  auto [index, fallback] = parse_selection(outcome.raw_text, static_cast<int>(candidates.size()));
  outcome.index = index;
  outcome.fallback_used = fallback;
  return outcome;
}

}  // namespace pedal

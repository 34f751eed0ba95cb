#include "pedal/prompting.hpp"

#include <set>

#include "pedal/rng.hpp"

namespace pedal {

namespace {

void replace_all(std::string& text, const std::string& placeholder, const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
}

std::string choices_block(const Example& example) {
  std::string block;
  for (const Choice& c : example.choices) {
    block += c.label;
    block += ") ";
    block += c.text;
    block += '\n';
  }
  return block;
}

std::string render_exemplar(const Example& ex, PromptStyle style, const PromptTemplates& t) {
  const bool cot = style == PromptStyle::cot && !ex.rationale.empty();
  std::string block = cot ? t.exemplar_cot : t.exemplar_direct;
  replace_all(block, "{exemplar_question}", format_question(ex));
  replace_all(block, "{exemplar_rationale}", ex.rationale);
  replace_all(block, "{exemplar_answer}", ex.gold);
  return block;
}

std::string render_target(const Example& example, const PromptTemplates& t) {
  std::string block = t.target;
  replace_all(block, "{question}", example.question);
  replace_all(block, "{choices}", choices_block(example));
  return block;
}

RenderedPrompt assemble(const std::vector<Example>& exemplars, const Example& example,
                        PromptStyle style, const PromptTemplates& t) {
  std::string user;
  for (const Example& ex : exemplars) {
    user += render_exemplar(ex, style, t);
    user += "\n\n";
  }
  user += render_target(example, t);

  RenderedPrompt prompt;
  prompt.style = style;
  prompt.messages.push_back(
      {Role::system, style == PromptStyle::cot ? t.system_cot : t.system_direct});
  prompt.messages.push_back({Role::user, std::move(user)});
  return prompt;
}

}  // namespace

std::string format_question(const Example& example) {
  if (example.choices.empty()) return example.question;
  std::string text = example.question;
  text += '\n';
  std::string block = choices_block(example);
  while (!block.empty() && block.back() == '\n') block.pop_back();
  text += block;
  return text;
}

ExemplarSet sample_exemplars(const std::vector<Example>& pool, std::size_t k, std::uint64_t seed) {
  if (k < 1) throw ConfigError("exemplar count k must be >= 1");
  if (pool.size() < k) {
    throw ConfigError("exemplar pool has " + std::to_string(pool.size()) +
                      " examples, need at least " + std::to_string(k));
  }
  ExemplarSet set;
  set.seed = seed;
  for (std::size_t i : draw_indices(pool.size(), k, seed)) set.exemplars.push_back(pool[i]);
  return set;
}

RenderedPrompt render_answer_prompt(const ExemplarSet& exemplars, const Example& example,
                                    PromptStyle style, const PromptTemplates& templates) {
  if (style != PromptStyle::direct && style != PromptStyle::cot) {
    throw ConfigError("answer prompts support direct or cot style only");
  }
  if (exemplars.exemplars.empty()) throw ConfigError("exemplar set is empty");
  return assemble(exemplars.exemplars, example, style, templates);
}

RenderedPrompt render_unified_prompt(const std::vector<ExemplarSet>& sets, const Example& example,
                                     const PromptTemplates& templates) {
  if (sets.empty()) throw ConfigError("unified prompt requires at least one exemplar set");
  std::vector<Example> merged;
  std::set<std::string> seen;
  for (const ExemplarSet& set : sets) {
    for (const Example& ex : set.exemplars) {
      if (seen.insert(ex.id).second) merged.push_back(ex);
    }
  }
  RenderedPrompt prompt = assemble(merged, example, PromptStyle::direct, templates);
  prompt.style = PromptStyle::unified;
  return prompt;
}

}  // namespace pedal

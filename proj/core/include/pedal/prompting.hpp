#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pedal/templates.hpp"
#include "pedal/types.hpp"

namespace pedal {

enum class Role { system, user };

struct Message {
  Role role = Role::user;
  std::string content;

  bool operator==(const Message&) const = default;
};

enum class PromptStyle { direct, cot, unified, selection };

struct RenderedPrompt {
  std::vector<Message> messages;
  PromptStyle style = PromptStyle::direct;
};

/// Exemplars drawn for one prompt, plus the seed that drew them.
struct ExemplarSet {
  std::vector<Example> exemplars;
  std::uint64_t seed = 0;
};

/// Draw k exemplars uniformly without replacement from the pool, ordered by
/// draw order. Deterministic per seed. Throws ConfigError if |pool| < k.
ExemplarSet sample_exemplars(const std::vector<Example>& pool, std::size_t k, std::uint64_t seed);

/// Question text plus choice lines for ARC; bare question for SVAMP.
std::string format_question(const Example& example);

/// Render the answer-generation prompt: system instruction, exemplar blocks,
/// then the target question with the sentinel-format instruction. CoT style
/// includes each exemplar's rationale when present and instructs step-by-step
/// reasoning; exemplars without a rationale render direct-style.
RenderedPrompt render_answer_prompt(const ExemplarSet& exemplars, const Example& example,
                                    PromptStyle style, const PromptTemplates& templates);

/// Render a single direct-style prompt over the concatenation of all
/// exemplar sets (seed order), deduplicated by id keeping first occurrence.
RenderedPrompt render_unified_prompt(const std::vector<ExemplarSet>& sets, const Example& example,
                                     const PromptTemplates& templates);

/// Derived seed for diverse prompt i under a base run seed.
inline std::uint64_t derived_prompt_seed(std::uint64_t run_seed, std::size_t i) {
  return run_seed * 1000 + i;
}

}  // namespace pedal

#pragma once

#include <string>

#include "pedal/types.hpp"

namespace pedal {

/// Prompt template set. Placeholders: {exemplar_question}, {exemplar_answer},
/// {exemplar_rationale}, {question}, {choices}, {candidates}. The shipped
/// defaults are embedded; a plain-text file with [section] headers can
/// override them. The hash of the effective text goes into every report.
struct PromptTemplates {
  std::string system_direct;
  std::string system_cot;
  std::string exemplar_direct;
  std::string exemplar_cot;
  std::string target;
  std::string selection;

  static PromptTemplates defaults();

  /// Load from a sectioned plain-text file; sections not present fall back
  /// to the defaults. Throws ParseError on unknown section names.
  static PromptTemplates load(const std::string& path);

  /// SHA-256 over a canonical serialization of all sections.
  std::string hash() const;
};

}  // namespace pedal

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pedal {

enum class DatasetKind { svamp, arc };

std::string to_string(DatasetKind kind);
DatasetKind dataset_kind_from_string(const std::string& name);

struct Choice {
  std::string label;
  std::string text;
};

/// One QA instance in canonical form. For SVAMP the question is the
/// narrative body plus the question sentence and choices is empty; for ARC
/// the gold answer is a choice label. `rationale` is an optional worked
/// solution used only for CoT exemplar rendering.
struct Example {
  std::string id;
  DatasetKind kind = DatasetKind::svamp;
  std::string question;
  std::vector<Choice> choices;
  std::string gold;
  std::string rationale;
};

struct DatasetBundle {
  std::vector<Example> eval_set;
  std::vector<Example> exemplar_pool;
  DatasetKind kind = DatasetKind::svamp;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pedal

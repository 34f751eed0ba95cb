#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pedal/types.hpp"

namespace pedal {

/// Parse a SVAMP-format file: a JSON array of records with fields ID, Body,
/// Question, Answer (Equation is ignored). An optional Rationale field is
/// kept for CoT exemplar rendering. question = Body + " " + Question, gold
/// is the canonical decimal of Answer.
std::vector<Example> load_svamp(const std::string& path);

/// Parse an ARC-format file: one JSON record per line with fields id,
/// question{stem, choices[{text,label}]}, answerKey. Choice order is file
/// order; an optional rationale field is kept.
std::vector<Example> load_arc(const std::string& path);

/// Seeded uniform subsample without replacement of floor(fraction * n)
/// examples, preserving the original relative order.
std::vector<Example> subsample(const std::vector<Example>& examples, double fraction,
                               std::uint64_t seed);

/// Throws ConfigError listing the offending ids if any example id appears in
/// both the eval set and the exemplar pool.
void verify_disjoint(const DatasetBundle& bundle);

}  // namespace pedal

#include "pedal/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pedal/numeric.hpp"
#include "pedal/rng.hpp"

namespace pedal {

using nlohmann::json;

std::string to_string(DatasetKind kind) {
  return kind == DatasetKind::svamp ? "svamp" : "arc";
}

DatasetKind dataset_kind_from_string(const std::string& name) {
  if (name == "svamp") return DatasetKind::svamp;
  if (name == "arc") return DatasetKind::arc;
  throw ConfigError("unknown dataset kind: " + name);
}

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return doc;
}

std::string require_string(const json& rec, const char* field, std::size_t index,
                           const std::string& path) {
  if (!rec.contains(field)) {
    throw ParseError(path + ": record " + std::to_string(index) + " missing field \"" + field +
                     "\"");
  }
  const json& v = rec.at(field);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  throw ParseError(path + ": record " + std::to_string(index) + " field \"" + field +
                   "\" has unexpected type");
}

void check_unique_ids(const std::vector<Example>& examples, const std::string& path) {
  std::set<std::string> seen;
  for (const Example& ex : examples) {
    if (!seen.insert(ex.id).second) {
      throw ParseError(path + ": duplicate example id \"" + ex.id + "\"");
    }
  }
}

}  // namespace

std::vector<Example> load_svamp(const std::string& path) {
  json doc = load_json_file(path);
  if (!doc.is_array()) throw ParseError(path + ": expected a top-level array of records");

  std::vector<Example> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& rec = doc[i];
    Example ex;
    ex.kind = DatasetKind::svamp;
    ex.id = require_string(rec, "ID", i, path);
    std::string body = require_string(rec, "Body", i, path);
    std::string question = require_string(rec, "Question", i, path);
    ex.question = body + " " + question;
    std::string answer = require_string(rec, "Answer", i, path);
    auto canonical = canonical_decimal(answer);
    if (!canonical) {
      throw ParseError(path + ": record " + std::to_string(i) + " has non-numeric Answer \"" +
                       answer + "\"");
    }
    ex.gold = *canonical;
    if (rec.contains("Rationale") && rec.at("Rationale").is_string()) {
      ex.rationale = rec.at("Rationale").get<std::string>();
    }
    out.push_back(std::move(ex));
  }
  check_unique_ids(out, path);
  return out;
}

std::vector<Example> load_arc(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);

  std::vector<Example> out;
  std::string line;
  std::size_t index = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(path + ": record " + std::to_string(index) + ": " + e.what());
    }

    Example ex;
    ex.kind = DatasetKind::arc;
    ex.id = require_string(rec, "id", index, path);
    if (!rec.contains("question") || !rec.at("question").is_object()) {
      throw ParseError(path + ": record " + std::to_string(index) + " missing question object");
    }
    const json& q = rec.at("question");
    ex.question = require_string(q, "stem", index, path);
    if (!q.contains("choices") || !q.at("choices").is_array() || q.at("choices").empty()) {
      throw ParseError(path + ": record " + std::to_string(index) + " has no choices");
    }
    std::set<std::string> labels;
    for (const json& c : q.at("choices")) {
      Choice choice;
      choice.label = require_string(c, "label", index, path);
      choice.text = require_string(c, "text", index, path);
      if (!labels.insert(choice.label).second) {
        throw ParseError(path + ": record " + std::to_string(index) + " has duplicate label \"" +
                         choice.label + "\"");
      }
      ex.choices.push_back(std::move(choice));
    }
    ex.gold = require_string(rec, "answerKey", index, path);
    if (!labels.count(ex.gold)) {
      throw ParseError(path + ": record " + std::to_string(index) + " answerKey \"" + ex.gold +
                       "\" not among choice labels");
    }
    if (rec.contains("rationale") && rec.at("rationale").is_string()) {
      ex.rationale = rec.at("rationale").get<std::string>();
    }
    out.push_back(std::move(ex));
    ++index;
  }
  check_unique_ids(out, path);
  return out;
}

std::vector<Example> subsample(const std::vector<Example>& examples, double fraction,
                               std::uint64_t seed) {
  if (fraction <= 0.0 || fraction > 1.0) {
    throw ConfigError("subsample fraction must be in (0, 1], got " + std::to_string(fraction));
  }
  const std::size_t n = examples.size();
  const auto count =
      static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  auto indices = draw_indices(n, count, seed);
  std::sort(indices.begin(), indices.end());
  std::vector<Example> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(examples[i]);
  return out;
}

void verify_disjoint(const DatasetBundle& bundle) {
  std::set<std::string> eval_ids;
  for (const Example& ex : bundle.eval_set) eval_ids.insert(ex.id);
  std::vector<std::string> overlap;
  for (const Example& ex : bundle.exemplar_pool) {
    if (eval_ids.count(ex.id)) overlap.push_back(ex.id);
  }
  if (!overlap.empty()) {
    std::ostringstream msg;
    msg << "eval set and exemplar pool share ids:";
    for (const std::string& id : overlap) msg << " " << id;
    throw ConfigError(msg.str());
  }
}

}  // namespace pedal

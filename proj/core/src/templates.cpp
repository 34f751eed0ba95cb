#include "pedal/templates.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "pedal/digest.hpp"

namespace pedal {

PromptTemplates PromptTemplates::defaults() {
  PromptTemplates t;
  t.system_direct =
      "You are a careful problem solver. Study the worked examples, then answer "
      "the final question concisely. End your reply with a line of the form "
      "\"Answer: <value>\".";
  t.system_cot =
      "You are a careful problem solver. Study the worked examples, then answer "
      "the final question. Let's think step by step: write out your reasoning, "
      "then end your reply with a line of the form \"Answer: <value>\".";
  t.exemplar_direct =
      "Question: {exemplar_question}\n"
      "Answer: {exemplar_answer}";
  t.exemplar_cot =
      "Question: {exemplar_question}\n"
      "{exemplar_rationale}\n"
      "Answer: {exemplar_answer}";
  t.target =
      "Question: {question}\n"
      "{choices}"
      "End your reply with a line of the form \"Answer: <value>\".";
  t.selection =
      "I have generated the following responses to the question: {question}\n"
      "{choices}"
      "\n"
      "{candidates}"
      "\n"
      "Evaluate these responses. Select the most consistent response based on "
      "majority consensus. Reply with exactly \"The most consistent response is "
      "Response X\" (without quotes), where X is the response number.";
  return t;
}

PromptTemplates PromptTemplates::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open template file: " + path);

  PromptTemplates t = defaults();
  std::map<std::string, std::string*> sections = {
      {"system_direct", &t.system_direct}, {"system_cot", &t.system_cot},
      {"exemplar_direct", &t.exemplar_direct}, {"exemplar_cot", &t.exemplar_cot},
      {"target", &t.target}, {"selection", &t.selection},
  };

  std::string* current = nullptr;
  std::string content;
  std::string line;
  auto flush = [&]() {
    if (!current) return;
    while (!content.empty() && content.back() == '\n') content.pop_back();
    *current = content;
    content.clear();
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() > 2 && line.front() == '[' && line.back() == ']') {
      flush();
      std::string name = line.substr(1, line.size() - 2);
      auto it = sections.find(name);
      if (it == sections.end()) throw ParseError(path + ": unknown template section [" + name + "]");
      current = it->second;
    } else if (current) {
      content += line;
      content += '\n';
    }
  }
  flush();
  return t;
}

std::string PromptTemplates::hash() const {
  std::ostringstream canonical;
  canonical << "[system_direct]\n" << system_direct << "\n[system_cot]\n" << system_cot
            << "\n[exemplar_direct]\n" << exemplar_direct << "\n[exemplar_cot]\n" << exemplar_cot
            << "\n[target]\n" << target << "\n[selection]\n" << selection << "\n";
  return sha256_hex(canonical.str());
}

}  // namespace pedal

#include "pedal/llm_client.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "pedal/digest.hpp"

namespace pedal {

using nlohmann::json;

namespace {

const char* role_name(Role role) { return role == Role::system ? "system" : "user"; }

json messages_to_json(const std::vector<Message>& messages) {
  json arr = json::array();
  for (const Message& m : messages) {
    arr.push_back({{"role", role_name(m.role)}, {"content", m.content}});
  }
  return arr;
}

std::string user_content(const WireRequest& request) {
  std::string text;
  for (const Message& m : request.messages) {
    if (m.role == Role::user) text += m.content;
  }
  return text;
}

}  // namespace

// ---------------------------------------------------------------------------
// HttpBackend

HttpBackend::HttpBackend(std::string endpoint) {
  auto scheme_end = endpoint.find("://");
  std::size_t path_start =
      endpoint.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) {
    host_ = endpoint;
  } else {
    host_ = endpoint.substr(0, path_start);
    path_prefix_ = endpoint.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  }
}

std::vector<WireSample> HttpBackend::complete(const WireRequest& request) {
  json body = {
      {"model", request.model},   {"messages", messages_to_json(request.messages)},
      {"temperature", request.temperature}, {"top_p", request.top_p},
      {"n", request.n},           {"max_tokens", request.max_tokens},
  };

  httplib::Client client(host_);
  client.set_read_timeout(300, 0);
  httplib::Headers headers;
  if (const char* key = std::getenv("PEDAL_API_KEY")) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  auto res = client.Post(path_prefix_ + "/chat/completions", headers, body.dump(),
                         "application/json");
  if (!res) throw TransportError("request to " + host_ + " failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300) {
    throw ProtocolError("endpoint returned HTTP " + std::to_string(res->status) + ": " +
                        res->body);
  }

  json doc;
  try {
    doc = json::parse(res->body);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("unparseable response body: ") + e.what());
  }
  if (!doc.contains("choices") || !doc["choices"].is_array() ||
      doc["choices"].size() < static_cast<std::size_t>(request.n)) {
    throw ProtocolError("response has fewer choices than requested");
  }
  if (!doc.contains("usage") || !doc["usage"].contains("prompt_tokens") ||
      !doc["usage"].contains("completion_tokens")) {
    throw ProtocolError("response is missing usage fields");
  }

  // The wire protocol reports request-level usage only; attribute it to
  // sample 0 so run totals stay exact.
  Usage total{doc["usage"]["prompt_tokens"].get<long>(),
              doc["usage"]["completion_tokens"].get<long>()};
  std::vector<WireSample> samples;
  for (int i = 0; i < request.n; ++i) {
    WireSample s;
    const json& choice = doc["choices"][i];
    if (!choice.contains("message") || !choice["message"].contains("content")) {
      throw ProtocolError("choice " + std::to_string(i) + " has no message content");
    }
    if (!choice["message"]["content"].is_null()) {
      s.text = choice["message"]["content"].get<std::string>();
    }
    s.usage = i == 0 ? total : Usage{};
    samples.push_back(std::move(s));
  }
  return samples;
}

// ---------------------------------------------------------------------------
// MockBackend

std::unique_ptr<MockBackend> MockBackend::from_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mock script: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!doc.is_array()) throw ParseError(path + ": expected an array of rules");

  std::vector<Rule> rules;
  for (const json& r : doc) {
    Rule rule;
    if (r.contains("substring")) {
      const json& s = r["substring"];
      if (s.is_array()) {
        for (const json& part : s) rule.substrings.push_back(part.get<std::string>());
      } else {
        rule.substrings.push_back(s.get<std::string>());
      }
    }
    if (r.contains("ordinal")) rule.ordinal = r["ordinal"].get<int>();
    auto read_sample = [](const json& s) {
      WireSample ws;
      ws.text = s.at("text").get<std::string>();
      const json& u = s.contains("usage") ? s["usage"] : s;
      ws.usage.prompt_tokens = u.value("prompt_tokens", 0L);
      ws.usage.completion_tokens = u.value("completion_tokens", 0L);
      return ws;
    };
    if (r.contains("samples")) {
      for (const json& s : r["samples"]) rule.samples.push_back(read_sample(s));
    } else {
      rule.samples.push_back(read_sample(r));
    }
    if (rule.samples.empty()) throw ParseError(path + ": rule has no samples");
    rules.push_back(std::move(rule));
  }
  return std::make_unique<MockBackend>(std::move(rules));
}

std::vector<WireSample> MockBackend::complete(const WireRequest& request) {
  int ordinal;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    log_.push_back(request);
    ordinal = ++request_count_;
  }
  samples_served_ += request.n;

  const std::string content = user_content(request);
  for (const Rule& rule : rules_) {
    if (rule.substrings.empty() && !rule.ordinal) continue;
    bool matched = true;
    for (const std::string& needle : rule.substrings) {
      if (content.find(needle) == std::string::npos) {
        matched = false;
        break;
      }
    }
    if (!matched) continue;
    if (rule.ordinal && *rule.ordinal != ordinal) continue;
    std::vector<WireSample> out;
    for (int i = 0; i < request.n; ++i) {
      out.push_back(rule.samples[i % rule.samples.size()]);
    }
    return out;
  }
  throw ProtocolError("mock script has no rule matching request #" + std::to_string(ordinal));
}

std::vector<WireRequest> MockBackend::requests() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return log_;
}

void MockBackend::reset_log() {
  std::lock_guard<std::mutex> lock(mutex_);
  log_.clear();
  request_count_ = 0;
  samples_served_ = 0;
}

// ---------------------------------------------------------------------------
// Cache

std::string cache_key(const std::string& model, const std::vector<Message>& messages,
                      const DecodingParams& params, int sample_index) {
  json canonical = {
      {"model", model},
      {"messages", messages_to_json(messages)},
      {"temperature", params.temperature},
      {"top_p", params.top_p},
      {"max_tokens", params.max_tokens},
      {"sample_index", sample_index},
  };
  return sha256_hex(canonical.dump());
}

ReplayCache::ReplayCache(const std::string& dir) {
  std::filesystem::create_directories(dir);
  file_path_ = (std::filesystem::path(dir) / "cache.jsonl").string();
  std::ifstream in(file_path_);
  if (!in) return;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json rec = json::parse(line);
      WireSample sample;
      sample.text = rec.at("text").get<std::string>();
      sample.usage.prompt_tokens = rec.at("prompt_tokens").get<long>();
      sample.usage.completion_tokens = rec.at("completion_tokens").get<long>();
      entries_.emplace(rec.at("key").get<std::string>(), std::move(sample));
    } catch (const json::exception&) {
      std::cerr << "warning: skipping corrupt cache line " << line_no << " in " << file_path_
                << "\n";
    }
  }
}

std::optional<WireSample> ReplayCache::get(const std::string& key) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ReplayCache::put(const std::string& key, const std::string& model,
                      const WireSample& sample) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (entries_.count(key)) return;  // write-once
  entries_.emplace(key, sample);
  json rec = {{"key", key},
              {"model", model},
              {"text", sample.text},
              {"prompt_tokens", sample.usage.prompt_tokens},
              {"completion_tokens", sample.usage.completion_tokens}};
  std::ofstream out(file_path_, std::ios::app);
  out << rec.dump() << "\n";
}

std::size_t ReplayCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_.size();
}

// ---------------------------------------------------------------------------
// LlmClient

LlmClient::LlmClient(std::shared_ptr<Backend> backend, std::shared_ptr<ReplayCache> cache,
                     int max_in_flight, RetryPolicy retry)
    : backend_(std::move(backend)),
      cache_(std::move(cache)),
      retry_(retry),
      free_slots_(max_in_flight > 0 ? max_in_flight : 1) {}

std::vector<LlmResponse> LlmClient::complete(const RenderedPrompt& prompt,
                                             const DecodingParams& params,
                                             const std::string& model) {
  if (params.n_samples < 1) throw ConfigError("n_samples must be >= 1");
  if (params.max_tokens < 1) throw ConfigError("max_tokens must be >= 1");
  if (params.temperature < 0.0) throw ConfigError("temperature must be >= 0");

  std::vector<std::string> keys;
  for (int i = 0; i < params.n_samples; ++i) {
    keys.push_back(cache_key(model, prompt.messages, params, i));
  }

  if (cache_) {
    std::vector<LlmResponse> cached;
    for (const std::string& key : keys) {
      auto hit = cache_->get(key);
      if (!hit) break;
      cached.push_back({hit->text, hit->usage, true});
    }
    if (cached.size() == keys.size()) return cached;
  }

  WireRequest request;
  request.model = model;
  request.messages = prompt.messages;
  request.temperature = params.temperature;
  request.top_p = params.top_p;
  request.n = params.n_samples;
  request.max_tokens = params.max_tokens;

  std::vector<WireSample> samples;
  {
    std::unique_lock<std::mutex> lock(slots_mutex_);
    slots_cv_.wait(lock, [&] { return free_slots_ > 0; });
    --free_slots_;
    lock.unlock();

    auto backoff = retry_.initial_backoff;
    try {
      for (int attempt = 1;; ++attempt) {
        try {
          samples = backend_->complete(request);
          break;
        } catch (const TransportError&) {
          if (attempt >= retry_.max_attempts) throw;
          std::this_thread::sleep_for(backoff);
          backoff *= 2;
        }
      }
    } catch (...) {
      lock.lock();
      ++free_slots_;
      slots_cv_.notify_one();
      throw;
    }
    lock.lock();
    ++free_slots_;
    slots_cv_.notify_one();
  }

  if (samples.size() != static_cast<std::size_t>(params.n_samples)) {
    throw ProtocolError("backend returned " + std::to_string(samples.size()) + " samples, want " +
                        std::to_string(params.n_samples));
  }

  std::vector<LlmResponse> out;
  for (int i = 0; i < params.n_samples; ++i) {
    if (cache_) cache_->put(keys[i], model, samples[i]);
    out.push_back({samples[i].text, samples[i].usage, false});
  }
  return out;
}

}  // namespace pedal

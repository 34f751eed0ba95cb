#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pedal/prompting.hpp"
#include "pedal/types.hpp"

namespace pedal {

struct DecodingParams {
  double temperature = 0.0;
  double top_p = 1.0;
  int max_tokens = 1024;
  int n_samples = 1;

  bool greedy() const { return temperature == 0.0 && n_samples == 1; }
};

struct Usage {
  long prompt_tokens = 0;
  long completion_tokens = 0;

  Usage& operator+=(const Usage& other) {
    prompt_tokens += other.prompt_tokens;
    completion_tokens += other.completion_tokens;
    return *this;
  }
  bool operator==(const Usage&) const = default;
};

struct LlmResponse {
  std::string text;
  Usage usage;
  bool from_cache = false;
};

/// One chat-completion request as it goes over the wire.
struct WireRequest {
  std::string model;
  std::vector<Message> messages;
  double temperature = 0.0;
  double top_p = 1.0;
  int n = 1;
  int max_tokens = 1024;
};

struct WireSample {
  std::string text;
  Usage usage;
};

/// Transport abstraction: the HTTP client and the scripted mock implement
/// the same surface, so strategies are oblivious to which one is wired in.
class Backend {
 public:
  virtual ~Backend() = default;
  /// Returns exactly request.n samples or throws TransportError /
  /// ProtocolError.
  virtual std::vector<WireSample> complete(const WireRequest& request) = 0;
};

/// POSTs to {endpoint}/chat/completions. Reads choices[i].message.content
/// and the usage block; a response without usage is a protocol error, never
/// approximated. Authorization comes from PEDAL_API_KEY when set.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(std::string endpoint);
  std::vector<WireSample> complete(const WireRequest& request) override;

 private:
  std::string host_;
  std::string path_prefix_;
};

/// Scripted in-process backend. Rules match on a substring of the request's
/// user content or on the 1-based request ordinal; the first matching rule
/// wins. A rule supplies one sample (replicated per sample index for n > 1
/// requests unless per-sample entries are given). Unmatched requests throw.
class MockBackend : public Backend {
 public:
  struct Rule {
    std::vector<std::string> substrings;  // all must be present in the user content
    std::optional<int> ordinal;
    std::vector<WireSample> samples;  // at least one; cycled if n exceeds it
  };

  explicit MockBackend(std::vector<Rule> rules) : rules_(std::move(rules)) {}

  /// Load rules from a JSON script file (array of rule objects).
  static std::unique_ptr<MockBackend> from_script(const std::string& path);

  std::vector<WireSample> complete(const WireRequest& request) override;

  /// Number of wire requests received.
  int request_count() const { return request_count_.load(); }
  /// Total samples served across all requests (each n = k request counts k).
  int samples_served() const { return samples_served_.load(); }
  std::vector<WireRequest> requests() const;
  void reset_log();

 private:
  std::vector<Rule> rules_;
  mutable std::mutex mutex_;
  std::vector<WireRequest> log_;
  std::atomic<int> request_count_{0};
  std::atomic<int> samples_served_{0};
};

/// Stable fingerprint of one sample of one request: SHA-256 over the
/// canonical serialization of (model, messages, temperature, top_p,
/// max_tokens, sample_index). n is deliberately excluded so batched and
/// unbatched requests share entries.
std::string cache_key(const std::string& model, const std::vector<Message>& messages,
                      const DecodingParams& params, int sample_index);

/// Append-only record/replay store, one JSON record per line in
/// <dir>/cache.jsonl. Corrupt lines are skipped with a warning on load.
/// Writes are write-once per key.
class ReplayCache {
 public:
  explicit ReplayCache(const std::string& dir);

  std::optional<WireSample> get(const std::string& key) const;
  void put(const std::string& key, const std::string& model, const WireSample& sample);
  std::size_t size() const;

 private:
  std::string file_path_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, WireSample> entries_;
};

struct RetryPolicy {
  int max_attempts = 4;  // 1 initial + 3 retries
  std::chrono::milliseconds initial_backoff{250};
};

/// Front door for all completions: consults the cache per sample index, and
/// on any miss issues a single wire request with n = n_samples, bounded by
/// an in-flight semaphore and retried with exponential backoff.
class LlmClient {
 public:
  LlmClient(std::shared_ptr<Backend> backend, std::shared_ptr<ReplayCache> cache,
            int max_in_flight = 4, RetryPolicy retry = {});

  std::vector<LlmResponse> complete(const RenderedPrompt& prompt, const DecodingParams& params,
                                    const std::string& model);

 private:
  std::shared_ptr<Backend> backend_;
  std::shared_ptr<ReplayCache> cache_;
  RetryPolicy retry_;
  std::mutex slots_mutex_;
  std::condition_variable slots_cv_;
  int free_slots_;
};

}  // namespace pedal

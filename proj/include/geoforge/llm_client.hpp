#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "geoforge/errors.hpp"
#include "geoforge/scene.hpp"

namespace geoforge {

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string content;
};

struct ChatRequest {
  std::string model = "gpt-3.5-turbo-0613";
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  std::optional<int> max_tokens;
};

// Stable hex digest of the canonicalized request. Insensitive to field order
// and to whitespace runs inside message content.
std::string canonical_key(const ChatRequest& req);

class LlmError : public NetworkError {
public:
  using NetworkError::NetworkError;
};

class RateLimitedError : public LlmError {
public:
  explicit RateLimitedError(int attempts)
      : LlmError("rate limited after " + std::to_string(attempts) + " attempts") {}
};

class TransportError : public LlmError {
public:
  using LlmError::LlmError;
};

class BadStatusError : public LlmError {
public:
  BadStatusError(int status, const std::string& body)
      : LlmError("unexpected status " + std::to_string(status) + ": " + body.substr(0, 200)),
        status_(status) {}
  int status() const { return status_; }

private:
  int status_;
};

class CacheMissError : public LlmError {
public:
  explicit CacheMissError(const std::string& key)
      : LlmError("replay cache miss for key " + key), key_(key) {}
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

class EmptyResponseError : public LlmError {
public:
  EmptyResponseError() : LlmError("model returned an empty response") {}
};

// Content-addressed directory of one JSON file per response, safe to commit
// as test fixtures. Writes are atomic (temp file + rename).
class ResponseCache {
public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<std::string> lookup(const std::string& key) const;
  void store(const std::string& key, const std::string& model, const std::string& response) const;
  const std::filesystem::path& dir() const { return dir_; }

private:
  std::filesystem::path dir_;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_delay{250};
  std::chrono::milliseconds max_delay{8000};
  double jitter = 0.25;  // fraction of the deterministic delay added at random
};

// Deterministic part of the wait before attempt n (1-based retry index):
// min(base * 2^(n-1), max_delay). Jitter is added on top, never subtracted.
std::chrono::milliseconds backoff_delay(int retry_index, const RetryPolicy& policy);

struct RateLimitConfig {
  int max_inflight = 4;
  int requests_per_interval = 0;  // 0 = unlimited
  std::chrono::milliseconds interval{1000};
};

// Blocking limiter shared across worker threads.
class RateLimiter {
public:
  explicit RateLimiter(RateLimitConfig config);

  void acquire();
  void release();
  int inflight() const { return inflight_.load(); }

private:
  RateLimitConfig config_;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::atomic<int> inflight_{0};
  int window_count_ = 0;
  std::chrono::steady_clock::time_point window_start_;
};

// Anything that can answer a chat request. Tests inject fakes; the pipeline
// passes either a live client or nothing (offline rule-based fallbacks).
class CompletionClient {
public:
  virtual ~CompletionClient() = default;
  virtual std::string complete(const ChatRequest& req) = 0;
};

// Chat-completions client with response caching, bounded retry with
// exponential backoff, and a deterministic replay mode that never touches the
// network.
class LlmClient : public CompletionClient {
public:
  struct Config {
    std::string base_url;  // e.g. https://api.openai.com/v1
    std::string api_key;
    std::filesystem::path cache_dir;
    bool offline = false;
    RetryPolicy retry;
    RateLimitConfig rate_limit;
  };

  // Reads GEOFORGE_API_BASE / GEOFORGE_API_KEY. Throws ConfigError in live
  // mode when the key is missing.
  static Config config_from_env(const std::filesystem::path& cache_dir, bool offline);

  explicit LlmClient(Config config);

  std::string complete(const ChatRequest& req) override;

  // Number of HTTP calls issued; replay mode keeps this at zero.
  std::uint64_t network_calls() const { return network_calls_.load(); }

private:
  std::string post_once(const ChatRequest& req);

  Config config_;
  ResponseCache cache_;
  RateLimiter limiter_;
  std::atomic<std::uint64_t> network_calls_{0};
};

}  // namespace geoforge

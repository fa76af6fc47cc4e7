#include "geoforge/llm_client.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <random>
#include <thread>
#include <unistd.h>

#include "geoforge/hash.hpp"

namespace geoforge {

namespace {

std::string normalize_content(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool in_space = true;  // trims leading whitespace
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!in_space) out.push_back(' ');
      in_space = true;
    } else {
      out.push_back(c);
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

// origin ("scheme://host:port") and path prefix of a base URL
std::pair<std::string, std::string> split_base_url(const std::string& base) {
  auto scheme_end = base.find("://");
  std::size_t path_start =
      base.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) return {base, ""};
  std::string prefix = base.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {base.substr(0, path_start), prefix};
}

double jitter_fraction() {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace

std::string canonical_key(const ChatRequest& req) {
  // nlohmann::json objects serialize with sorted keys, which makes the dump
  // independent of construction order.
  nlohmann::json canon;
  canon["model"] = req.model;
  canon["temperature"] = req.temperature;
  if (req.max_tokens) canon["max_tokens"] = *req.max_tokens;
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : req.messages)
    messages.push_back({{"role", m.role}, {"content", normalize_content(m.content)}});
  canon["messages"] = std::move(messages);
  return sha256_hex(canon.dump());
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::optional<std::string> ResponseCache::lookup(const std::string& key) const {
  auto path = dir_ / (key + ".json");
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  Json entry = Json::parse(in, nullptr, false);
  if (entry.is_discarded() || !entry.contains("response")) return std::nullopt;
  return entry.at("response").get<std::string>();
}

void ResponseCache::store(const std::string& key, const std::string& model,
                          const std::string& response) const {
  Json entry;
  entry["key"] = key;
  entry["model"] = model;
  entry["response"] = response;
  entry["created_unix"] = static_cast<std::int64_t>(::time(nullptr));

  auto final_path = dir_ / (key + ".json");
  auto tmp_path = dir_ / (key + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write cache entry: " + tmp_path.string());
    out << entry.dump(2) << '\n';
  }
  std::filesystem::rename(tmp_path, final_path);
}

std::chrono::milliseconds backoff_delay(int retry_index, const RetryPolicy& policy) {
  auto delay = policy.base_delay;
  for (int i = 1; i < retry_index; ++i) {
    delay *= 2;
    if (delay >= policy.max_delay) return policy.max_delay;
  }
  return std::min(delay, policy.max_delay);
}

RateLimiter::RateLimiter(RateLimitConfig config)
    : config_(config), window_start_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
  std::unique_lock lock(mutex_);
  for (;;) {
    auto now = std::chrono::steady_clock::now();
    if (config_.requests_per_interval > 0 && now - window_start_ >= config_.interval) {
      window_start_ = now;
      window_count_ = 0;
    }
    bool inflight_ok = inflight_.load() < config_.max_inflight;
    bool budget_ok = config_.requests_per_interval == 0 ||
                     window_count_ < config_.requests_per_interval;
    if (inflight_ok && budget_ok) {
      ++inflight_;
      ++window_count_;
      return;
    }
    if (!budget_ok) {
      cv_.wait_until(lock, window_start_ + config_.interval);
    } else {
      cv_.wait(lock);
    }
  }
}

void RateLimiter::release() {
  {
    std::lock_guard lock(mutex_);
    --inflight_;
  }
  cv_.notify_all();
}

LlmClient::Config LlmClient::config_from_env(const std::filesystem::path& cache_dir,
                                             bool offline) {
  Config config;
  const char* base = std::getenv("GEOFORGE_API_BASE");
  const char* key = std::getenv("GEOFORGE_API_KEY");
  config.base_url = base ? base : "https://api.openai.com/v1";
  config.api_key = key ? key : "";
  config.cache_dir = cache_dir;
  config.offline = offline;
  if (!offline && config.api_key.empty())
    throw ConfigError("live mode requires GEOFORGE_API_KEY in the environment");
  return config;
}

LlmClient::LlmClient(Config config)
    : config_(std::move(config)), cache_(config_.cache_dir), limiter_(config_.rate_limit) {}

std::string LlmClient::complete(const ChatRequest& req) {
  if (req.messages.empty()) throw DataError("chat request has no messages");
  const std::string& first = req.messages.front().role;
  if (first != "system" && first != "user")
    throw DataError("first message role must be system or user");

  std::string key = canonical_key(req);
  if (auto cached = cache_.lookup(key)) return *cached;
  if (config_.offline) throw CacheMissError(key);

  limiter_.acquire();
  struct Release {
    RateLimiter& l;
    ~Release() { l.release(); }
  } release{limiter_};

  int attempt = 0;
  for (;;) {
    ++attempt;
    try {
      std::string response = post_once(req);
      cache_.store(key, req.model, response);
      return response;
    } catch (const RateLimitedError&) {
      if (attempt >= config_.retry.max_attempts) throw RateLimitedError(attempt);
    } catch (const TransportError&) {
      if (attempt >= config_.retry.max_attempts) throw;
    } catch (const BadStatusError& e) {
      if (e.status() < 500 || attempt >= config_.retry.max_attempts) throw;
    }
    auto delay = backoff_delay(attempt, config_.retry);
    auto with_jitter =
        delay + std::chrono::milliseconds(static_cast<long>(
                    static_cast<double>(delay.count()) * config_.retry.jitter * jitter_fraction()));
    std::this_thread::sleep_for(with_jitter);
  }
}

std::string LlmClient::post_once(const ChatRequest& req) {
  auto [origin, prefix] = split_base_url(config_.base_url);

  nlohmann::json body;
  body["model"] = req.model;
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : req.messages)
    messages.push_back({{"role", m.role}, {"content", m.content}});
  body["messages"] = std::move(messages);
  body["temperature"] = req.temperature;
  if (req.max_tokens) body["max_tokens"] = *req.max_tokens;

  httplib::Client client(origin);
  client.set_connection_timeout(15);
  client.set_read_timeout(120);
  httplib::Headers headers;
  if (!config_.api_key.empty())
    headers.emplace("Authorization", "Bearer " + config_.api_key);

  network_calls_.fetch_add(1);
  auto result = client.Post(prefix + "/chat/completions", headers, body.dump(),
                            "application/json");
  if (!result) throw TransportError("transport failure: " + httplib::to_string(result.error()));
  if (result->status == 429) throw RateLimitedError(1);
  if (result->status != 200) throw BadStatusError(result->status, result->body);

  nlohmann::json parsed = nlohmann::json::parse(result->body, nullptr, false);
  if (parsed.is_discarded()) throw BadStatusError(result->status, "unparseable response body");
  try {
    std::string content =
        parsed.at("choices").at(0).at("message").at("content").get<std::string>();
    if (content.empty()) throw EmptyResponseError();
    return content;
  } catch (const nlohmann::json::exception&) {
    throw BadStatusError(result->status, "response missing choices[0].message.content");
  }
}

}  // namespace geoforge

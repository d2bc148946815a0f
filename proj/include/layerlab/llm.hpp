#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "layerlab/prompts.hpp"

namespace layerlab {

struct ChatMessage {
  std::string role;  // "system" or "user"
  std::string content;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.0;
  int max_tokens = 2048;
  /// Spec id; mock backends key on it, the HTTP backend ignores it.
  std::string tag;

  /// One user message carrying the whole prompt, no system message.
  static ChatRequest for_prompt(const PromptSpec& spec, std::string model = "gpt-3.5-turbo");
  /// Throws InfeasibleError unless there is exactly one non-empty user
  /// message and the sampling parameters are in range.
  void validate() const;
};

struct Usage {
  long prompt_tokens = 0;
  long completion_tokens = 0;
  long total_tokens = 0;
};

struct ChatResponse {
  std::string content;
  std::string finish_reason = "stop";
  Usage usage;
  std::chrono::milliseconds latency{0};
  int attempts = 1;
  std::string model;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  /// Must be safe to call from several threads at once.
  virtual ChatResponse complete(const ChatRequest& request) = 0;
  virtual std::string name() const = 0;
};

/// Answers every bound spec with the layout engine's oracle.
class OracleResponder : public ChatBackend {
 public:
  explicit OracleResponder(const std::vector<PromptSpec>& specs);
  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "oracle"; }

 protected:
  const PromptSpec& spec_for(const ChatRequest& request) const;

 private:
  std::map<std::string, PromptSpec> specs_;
};

/// Oracle answers, perturbed with probability `error_rate`. The decision
/// and the perturbation are pure functions of (spec id, seed).
class NoisyResponder : public OracleResponder {
 public:
  NoisyResponder(const std::vector<PromptSpec>& specs, double error_rate, std::uint64_t seed);
  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "noisy"; }

 private:
  double error_rate_;
  std::uint64_t seed_;
};

/// Serves recorded responses from a JSONL transcript by spec id.
class ReplayResponder : public ChatBackend {
 public:
  explicit ReplayResponder(const std::string& transcript_path);
  explicit ReplayResponder(std::map<std::string, std::string> responses);
  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "replay"; }
  std::size_t size() const { return responses_.size(); }

 private:
  std::map<std::string, std::string> responses_;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_delay{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_delay{20'000};
  /// Wall-clock ceiling over all attempts and waits of one request.
  std::chrono::milliseconds ceiling{120'000};

  /// Delay before retry number `retry` (1-based), capped at max_delay.
  std::chrono::milliseconds delay_for(int retry) const;
};

struct HttpConfig {
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string api_key_env = "OPENAI_API_KEY";
  std::chrono::seconds timeout{120};
  RetryPolicy retry;
};

/// Reads base_url, path, api_key_env, timeout_s and retry settings from a
/// JSON object; missing keys keep their defaults.
HttpConfig load_http_config(const std::string& path);

/// Chat-completions over HTTP(S) with bounded exponential backoff.
/// 429 and 5xx/408/network failures are retried; other statuses fail at
/// once. A Retry-After header overrides the computed delay.
class HttpBackend : public ChatBackend {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  /// Throws InfeasibleError when the API key variable is unset.
  explicit HttpBackend(HttpConfig config);
  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "http"; }

  /// Called once per 429 response.
  void on_rate_limit(std::function<void()> callback) { rate_limit_callback_ = std::move(callback); }
  /// Replaces std::this_thread::sleep_for, for tests.
  void set_sleeper(Sleeper sleeper) { sleeper_ = std::move(sleeper); }

 private:
  HttpConfig config_;
  std::string api_key_;
  std::function<void()> rate_limit_callback_;
  Sleeper sleeper_;
};

/// Caps in-flight requests. A rate-limit signal lowers the cap by one
/// (never below 1); the cap then grows back by one per request that
/// finishes after the cool-down has elapsed.
class ConcurrencyGovernor {
 public:
  using Clock = std::chrono::steady_clock;

  ConcurrencyGovernor(int max_in_flight, std::chrono::milliseconds cool_down);

  void acquire();
  void release();
  void signal_rate_limit();

  int limit() const;
  int in_flight() const;

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  int max_;
  int limit_;
  int in_flight_ = 0;
  std::chrono::milliseconds cool_down_;
  Clock::time_point quiet_after_{};
};

/// Scoped acquire/release.
class GovernorSlot {
 public:
  explicit GovernorSlot(ConcurrencyGovernor& g) : g_(g) { g_.acquire(); }
  ~GovernorSlot() { g_.release(); }
  GovernorSlot(const GovernorSlot&) = delete;
  GovernorSlot& operator=(const GovernorSlot&) = delete;

 private:
  ConcurrencyGovernor& g_;
};

}  // namespace layerlab

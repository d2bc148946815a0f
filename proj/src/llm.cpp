#include "layerlab/llm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include <httplib.h>

#include "layerlab/answers.hpp"
#include "layerlab/errors.hpp"

namespace layerlab {

using nlohmann::json;
using std::chrono::milliseconds;

ChatRequest ChatRequest::for_prompt(const PromptSpec& spec, std::string model) {
  ChatRequest req;
  req.messages.push_back({"user", spec.text});
  req.model = std::move(model);
  req.tag = spec.id;
  return req;
}

void ChatRequest::validate() const {
  int users = 0;
  for (const auto& m : messages) {
    if (m.role != "user" && m.role != "system") {
      throw InfeasibleError(fmt::format("unsupported message role '{}'", m.role));
    }
    if (m.content.empty()) throw InfeasibleError("empty message content");
    users += m.role == "user";
  }
  if (users != 1) throw InfeasibleError(fmt::format("expected one user message, got {}", users));
  if (!(temperature >= 0.0)) throw InfeasibleError("temperature must be >= 0");
  if (max_tokens <= 0) throw InfeasibleError("max_tokens must be positive");
}

// ---------------------------------------------------------------- mocks

OracleResponder::OracleResponder(const std::vector<PromptSpec>& specs) {
  for (const auto& s : specs) specs_.emplace(s.id, s);
}

const PromptSpec& OracleResponder::spec_for(const ChatRequest& request) const {
  request.validate();
  auto it = specs_.find(request.tag);
  if (it == specs_.end()) {
    throw InfeasibleError(fmt::format("no spec bound for request '{}'", request.tag));
  }
  return it->second;
}

ChatResponse OracleResponder::complete(const ChatRequest& request) {
  const PromptSpec& spec = spec_for(request);
  ChatResponse out;
  out.content = oracle_answer(spec.instance, spec.strategy);
  out.model = name();
  return out;
}

NoisyResponder::NoisyResponder(const std::vector<PromptSpec>& specs, double error_rate,
                               std::uint64_t seed)
    : OracleResponder(specs), error_rate_(error_rate), seed_(seed) {
  if (!(error_rate >= 0.0 && error_rate <= 1.0)) {
    throw InfeasibleError("noise rate must lie in [0, 1]");
  }
}

ChatResponse NoisyResponder::complete(const ChatRequest& request) {
  const PromptSpec& spec = spec_for(request);
  const std::uint64_t draw = mix_seed(seed_, spec.id);
  const double u = static_cast<double>(draw >> 11) * 0x1.0p-53;
  std::optional<std::uint64_t> noise;
  if (u < error_rate_) noise = mix_seed(draw, "perturb");
  ChatResponse out;
  out.content = oracle_answer(spec.instance, spec.strategy, noise);
  out.model = name();
  return out;
}

ReplayResponder::ReplayResponder(std::map<std::string, std::string> responses)
    : responses_(std::move(responses)) {}

ReplayResponder::ReplayResponder(const std::string& transcript_path) {
  std::ifstream in(transcript_path);
  if (!in) throw ParseError(fmt::format("cannot open transcript {}", transcript_path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(fmt::format("{}: {}", transcript_path, e.what()), lineno);
    }
    if (!rec.contains("spec_id") || !rec.contains("response") || !rec["response"].is_string()) {
      continue;
    }
    responses_[rec["spec_id"].get<std::string>()] = rec["response"].get<std::string>();
  }
}

ChatResponse ReplayResponder::complete(const ChatRequest& request) {
  auto it = responses_.find(request.tag);
  if (it == responses_.end()) {
    throw ReplayMissError(fmt::format("transcript has no response for '{}'", request.tag));
  }
  ChatResponse out;
  out.content = it->second;
  out.model = name();
  return out;
}

// ---------------------------------------------------------------- http

milliseconds RetryPolicy::delay_for(int retry) const {
  const double raw = static_cast<double>(initial_delay.count()) * std::pow(multiplier, retry - 1);
  const double capped = std::min(raw, static_cast<double>(max_delay.count()));
  return milliseconds(static_cast<long>(capped));
}

HttpConfig load_http_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open config {}", path));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("{}: {}", path, e.what()));
  }
  HttpConfig c;
  c.base_url = doc.value("base_url", c.base_url);
  c.path = doc.value("path", c.path);
  c.api_key_env = doc.value("api_key_env", c.api_key_env);
  c.timeout = std::chrono::seconds(doc.value("timeout_s", static_cast<long>(c.timeout.count())));
  if (doc.contains("retry")) {
    const json& r = doc["retry"];
    c.retry.max_attempts = r.value("max_attempts", c.retry.max_attempts);
    c.retry.initial_delay = milliseconds(r.value("initial_delay_ms", static_cast<long>(c.retry.initial_delay.count())));
    c.retry.multiplier = r.value("multiplier", c.retry.multiplier);
    c.retry.max_delay = milliseconds(r.value("max_delay_ms", static_cast<long>(c.retry.max_delay.count())));
    c.retry.ceiling = milliseconds(r.value("ceiling_ms", static_cast<long>(c.retry.ceiling.count())));
  }
  return c;
}

HttpBackend::HttpBackend(HttpConfig config) : config_(std::move(config)) {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (!key || !*key) {
    throw InfeasibleError(fmt::format("environment variable {} is not set", config_.api_key_env));
  }
  api_key_ = key;
  sleeper_ = [](milliseconds d) { std::this_thread::sleep_for(d); };
  if (config_.retry.max_attempts < 1) throw InfeasibleError("max_attempts must be at least 1");
}

namespace {

std::optional<milliseconds> retry_after(const httplib::Result& res) {
  if (!res || !res->has_header("Retry-After")) return std::nullopt;
  const std::string v = res->get_header_value("Retry-After");
  char* end = nullptr;
  const double seconds = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || seconds < 0) return std::nullopt;
  return milliseconds(static_cast<long>(seconds * 1000));
}

ChatResponse decode(const std::string& body) {
  json doc = json::parse(body);
  const json& choice = doc.at("choices").at(0);
  ChatResponse out;
  const json& content = choice.at("message").at("content");
  out.content = content.is_string() ? content.get<std::string>() : std::string();
  if (choice.contains("finish_reason") && choice["finish_reason"].is_string()) {
    out.finish_reason = choice["finish_reason"].get<std::string>();
  }
  if (doc.contains("usage") && doc["usage"].is_object()) {
    const json& u = doc["usage"];
    out.usage.prompt_tokens = u.value("prompt_tokens", 0L);
    out.usage.completion_tokens = u.value("completion_tokens", 0L);
    out.usage.total_tokens = u.value("total_tokens", 0L);
  }
  if (doc.contains("model") && doc["model"].is_string()) out.model = doc["model"].get<std::string>();
  return out;
}

}  // namespace

ChatResponse HttpBackend::complete(const ChatRequest& request) {
  request.validate();
  json body;
  body["model"] = request.model;
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_tokens;
  body["messages"] = json::array();
  for (const auto& m : request.messages) {
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  }
  const std::string payload = body.dump();

  const auto start = std::chrono::steady_clock::now();
  // Time spent sleeping is charged at its nominal length, so an injected
  // sleeper sees the same ceiling arithmetic as the real one.
  milliseconds slept_real{0}, slept_nominal{0};
  const auto elapsed = [&] {
    return std::chrono::duration_cast<milliseconds>(std::chrono::steady_clock::now() - start) -
           slept_real + slept_nominal;
  };
  const RetryPolicy& policy = config_.retry;
  std::string last_error;
  int last_status = 0;
  bool rate_limited = false;

  for (int attempt = 1;; ++attempt) {
    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};
    auto res = client.Post(config_.path, headers, payload, "application/json");

    std::optional<milliseconds> hinted;
    if (!res) {
      last_error = fmt::format("request failed: {}", httplib::to_string(res.error()));
      last_status = 0;
      rate_limited = false;
    } else if (res->status == 200) {
      ChatResponse out;
      try {
        out = decode(res->body);
      } catch (const std::exception& e) {
        throw TransportError(fmt::format("unreadable completion: {}", e.what()), attempt, 200);
      }
      if (out.model.empty()) out.model = request.model;
      out.attempts = attempt;
      out.latency = elapsed();
      return out;
    } else {
      last_status = res->status;
      rate_limited = res->status == 429;
      last_error = fmt::format("HTTP {}", res->status);
      if (rate_limited) {
        if (rate_limit_callback_) rate_limit_callback_();
        hinted = retry_after(res);
      } else if (res->status != 408 && res->status < 500) {
        throw TransportError(fmt::format("{}: {}", last_error, res->body.substr(0, 200)), attempt,
                             res->status);
      }
    }

    const auto fail = [&](std::string why) {
      const auto msg = fmt::format("{} after {} attempt(s) ({})", last_error, attempt, why);
      if (rate_limited) throw RateLimitError(msg, attempt, last_status);
      throw TransportError(msg, attempt, last_status);
    };
    if (attempt >= policy.max_attempts) fail("retries exhausted");
    const milliseconds wait = hinted.value_or(policy.delay_for(attempt));
    if (elapsed() + wait > policy.ceiling) fail("wall-clock ceiling reached");
    const auto before = std::chrono::steady_clock::now();
    sleeper_(wait);
    slept_real += std::chrono::duration_cast<milliseconds>(std::chrono::steady_clock::now() - before);
    slept_nominal += wait;
  }
}

// ---------------------------------------------------------------- governor

ConcurrencyGovernor::ConcurrencyGovernor(int max_in_flight, milliseconds cool_down)
    : max_(std::max(1, max_in_flight)), limit_(max_), cool_down_(cool_down) {}

void ConcurrencyGovernor::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return in_flight_ < limit_; });
  ++in_flight_;
}

void ConcurrencyGovernor::release() {
  {
    std::lock_guard lock(mu_);
    --in_flight_;
    if (limit_ < max_ && Clock::now() >= quiet_after_) ++limit_;
  }
  cv_.notify_all();
}

void ConcurrencyGovernor::signal_rate_limit() {
  std::lock_guard lock(mu_);
  limit_ = std::max(1, limit_ - 1);
  quiet_after_ = Clock::now() + cool_down_;
}

int ConcurrencyGovernor::limit() const {
  std::lock_guard lock(mu_);
  return limit_;
}

int ConcurrencyGovernor::in_flight() const {
  std::lock_guard lock(mu_);
  return in_flight_;
}

}  // namespace layerlab

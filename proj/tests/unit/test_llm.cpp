#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "fixtures.hpp"
#include "layerlab/errors.hpp"

using namespace layerlab;
using namespace fixtures;
using namespace std::chrono_literals;
using nlohmann::json;

namespace {

struct Reply {
  int status = 200;
  std::string body;
  std::string retry_after;
};

std::string completion(const std::string& content) {
  return json{{"model", "mock-1"},
              {"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}, {"finish_reason", "stop"}}}},
              {"usage", {{"prompt_tokens", 11}, {"completion_tokens", 1}, {"total_tokens", 12}}}}
      .dump();
}

/// Local chat-completions endpoint that plays back scripted replies; the
/// last one repeats once the script runs out.
class MockServer {
 public:
  explicit MockServer(std::deque<Reply> script) : script_(std::move(script)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu_);
      requests_.push_back(req.body);
      auth_ = req.get_header_value("Authorization");
      Reply r = script_.front();
      if (script_.size() > 1) script_.pop_front();
      res.status = r.status;
      if (!r.retry_after.empty()) res.set_header("Retry-After", r.retry_after);
      res.set_content(r.body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockServer() {
    server_.stop();
    thread_.join();
  }

  HttpConfig config() const {
    HttpConfig c;
    c.base_url = "http://127.0.0.1:" + std::to_string(port_);
    c.api_key_env = "LAYERLAB_TEST_KEY";
    c.timeout = 5s;
    return c;
  }
  std::size_t hits() {
    std::lock_guard lock(mu_);
    return requests_.size();
  }
  json last_request() {
    std::lock_guard lock(mu_);
    return json::parse(requests_.back());
  }
  std::string auth() {
    std::lock_guard lock(mu_);
    return auth_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::mutex mu_;
  std::deque<Reply> script_;
  std::vector<std::string> requests_;
  std::string auth_;
};

ChatRequest user(const std::string& text) {
  ChatRequest r;
  r.messages = {{"user", text}};
  return r;
}

struct Harness {
  std::vector<std::chrono::milliseconds> sleeps;
  int rate_limits = 0;

  HttpBackend make(HttpConfig c) {
    HttpBackend b(std::move(c));
    b.set_sleeper([this](std::chrono::milliseconds d) { sleeps.push_back(d); });
    b.on_rate_limit([this] { ++rate_limits; });
    return b;
  }
};

class HttpTest : public ::testing::Test {
 protected:
  void SetUp() override { setenv("LAYERLAB_TEST_KEY", "sk-test", 1); }
  void TearDown() override { unsetenv("LAYERLAB_TEST_KEY"); }
};

std::vector<PromptSpec> crossing_specs() {
  std::vector<PromptSpec> out;
  const auto ex = crossing_examples();
  for (std::size_t i = 0; i < ex.size(); ++i) {
    for (auto s : {Strategy::standard(), Strategy::steps()}) {
      out.push_back(build_prompt({"ex" + std::to_string(i), ex[i]}, s, {}, 0));
    }
  }
  return out;
}

}  // namespace

TEST(ChatRequest, OneUserMessagePerPrompt) {
  const auto spec = crossing_specs()[0];
  const auto r = ChatRequest::for_prompt(spec);
  ASSERT_EQ(r.messages.size(), 1u);
  EXPECT_EQ(r.messages[0].role, "user");
  EXPECT_EQ(r.messages[0].content, spec.text);
  EXPECT_EQ(r.tag, spec.id);
  EXPECT_DOUBLE_EQ(r.temperature, 0.0);
  EXPECT_NO_THROW(r.validate());
  EXPECT_THROW(user("").validate(), InfeasibleError);
  ChatRequest two = user("a");
  two.messages.push_back({"user", "b"});
  EXPECT_THROW(two.validate(), InfeasibleError);
  ChatRequest hot = user("a");
  hot.temperature = -1;
  EXPECT_THROW(hot.validate(), InfeasibleError);
}

TEST(Mocks, OracleAnswersRecordedIclInstance) {
  const auto spec = build_prompt({"c", crossing_examples()[2]}, Strategy::icl(3),
                                 {{"p0", crossing_examples()[0]}, {"p1", crossing_examples()[1]},
                                  {"p3", crossing_examples()[3]}, {"p4", crossing_examples()[4]}},
                                 0);
  OracleResponder oracle({spec});
  EXPECT_EQ(oracle.complete(ChatRequest::for_prompt(spec)).content, "3");
  EXPECT_THROW(oracle.complete(user("x")), InfeasibleError);
}

TEST(Mocks, ZeroNoiseEqualsOracle) {
  const auto specs = crossing_specs();
  OracleResponder oracle(specs);
  for (std::uint64_t seed : {0ull, 1ull, 77ull}) {
    NoisyResponder noisy(specs, 0.0, seed);
    for (const auto& s : specs) {
      EXPECT_EQ(noisy.complete(ChatRequest::for_prompt(s)).content,
                oracle.complete(ChatRequest::for_prompt(s)).content);
    }
  }
}

TEST(Mocks, NoiseIsAPureFunctionOfSeed) {
  const auto specs = crossing_specs();
  NoisyResponder a(specs, 0.5, 9), b(specs, 0.5, 9), full(specs, 1.0, 9);
  OracleResponder oracle(specs);
  for (const auto& s : specs) {
    const auto req = ChatRequest::for_prompt(s);
    EXPECT_EQ(a.complete(req).content, b.complete(req).content);
    EXPECT_NE(full.complete(req).content, oracle.complete(req).content);
  }
  EXPECT_THROW(NoisyResponder(specs, 1.5, 0), InfeasibleError);
}

TEST(Mocks, ReplayIsVerbatimAndMissesThrow) {
  const auto dir = std::filesystem::temp_directory_path() / "layerlab_replay_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "t.jsonl").string();
  {
    std::ofstream out(path);
    out << json{{"spec_id", "a"}, {"response", "  two\nlines é\n"}}.dump() << "\n\n";
    out << json{{"spec_id", "b"}, {"response", ""}}.dump() << "\n";
  }
  ReplayResponder replay(path);
  EXPECT_EQ(replay.size(), 2u);
  ChatRequest r = user("anything");
  r.tag = "a";
  EXPECT_EQ(replay.complete(r).content, "  two\nlines é\n");
  r.tag = "zzz";
  EXPECT_THROW(replay.complete(r), ReplayMissError);
  EXPECT_THROW(ReplayResponder((dir / "missing.jsonl").string()), ParseError);
}

TEST(Retry, DelaysGrowAndCap) {
  RetryPolicy p;
  EXPECT_EQ(p.delay_for(1), 500ms);
  EXPECT_EQ(p.delay_for(2), 1000ms);
  EXPECT_EQ(p.delay_for(4), 4000ms);
  EXPECT_EQ(p.delay_for(10), 20000ms);
}

TEST_F(HttpTest, SendsChatCompletionBody) {
  MockServer server({{200, completion("42")}});
  Harness h;
  auto backend = h.make(server.config());
  ChatRequest req = user("How many?");
  req.model = "m";
  const auto res = backend.complete(req);
  EXPECT_EQ(res.content, "42");
  EXPECT_EQ(res.attempts, 1);
  EXPECT_EQ(res.usage.total_tokens, 12);
  EXPECT_EQ(res.model, "mock-1");
  const json body = server.last_request();
  EXPECT_EQ(body["model"], "m");
  EXPECT_EQ(body["messages"].size(), 1u);
  EXPECT_EQ(body["messages"][0]["role"], "user");
  EXPECT_EQ(body["messages"][0]["content"], "How many?");
  EXPECT_EQ(body["temperature"], 0.0);
  EXPECT_EQ(server.auth(), "Bearer sk-test");
}

TEST_F(HttpTest, RetriesRateLimitsWithBackoff) {
  MockServer server({{429, "slow down"}, {503, "busy"}, {200, completion("ok")}});
  Harness h;
  auto backend = h.make(server.config());
  const auto res = backend.complete(user("q"));
  EXPECT_EQ(res.content, "ok");
  EXPECT_EQ(res.attempts, 3);
  EXPECT_EQ(h.sleeps, (std::vector<std::chrono::milliseconds>{500ms, 1000ms}));
  EXPECT_EQ(h.rate_limits, 1);
}

TEST_F(HttpTest, HonoursRetryAfter) {
  MockServer server({{429, "", "3"}, {200, completion("ok")}});
  Harness h;
  auto backend = h.make(server.config());
  EXPECT_EQ(backend.complete(user("q")).content, "ok");
  EXPECT_EQ(h.sleeps, (std::vector<std::chrono::milliseconds>{3000ms}));
}

TEST_F(HttpTest, ClientErrorsFailImmediately) {
  MockServer server({{400, "bad request"}});
  Harness h;
  auto backend = h.make(server.config());
  try {
    backend.complete(user("q"));
    FAIL();
  } catch (const RateLimitError&) {
    FAIL() << "not a rate limit";
  } catch (const TransportError& e) {
    EXPECT_EQ(e.attempts(), 1);
    EXPECT_EQ(e.status(), 400);
  }
  EXPECT_EQ(server.hits(), 1u);
  EXPECT_TRUE(h.sleeps.empty());
}

TEST_F(HttpTest, PersistentRateLimitIsSignalledDistinctly) {
  MockServer server({{429, "no"}});
  Harness h;
  auto backend = h.make(server.config());
  try {
    backend.complete(user("q"));
    FAIL();
  } catch (const RateLimitError& e) {
    EXPECT_EQ(e.attempts(), 5);
    EXPECT_EQ(e.status(), 429);
  }
  EXPECT_EQ(server.hits(), 5u);
  EXPECT_EQ(h.rate_limits, 5);
}

TEST_F(HttpTest, ServerErrorsExhaustRetries) {
  MockServer server({{500, "oops"}});
  Harness h;
  auto backend = h.make(server.config());
  try {
    backend.complete(user("q"));
    FAIL();
  } catch (const RateLimitError&) {
    FAIL() << "not a rate limit";
  } catch (const TransportError& e) {
    EXPECT_EQ(e.attempts(), 5);
    EXPECT_EQ(e.status(), 500);
  }
  EXPECT_EQ(h.sleeps.size(), 4u);
}

TEST_F(HttpTest, BackoffStaysUnderCeiling) {
  MockServer server({{503, ""}});
  Harness h;
  HttpConfig c = server.config();
  c.retry.max_attempts = 50;
  c.retry.initial_delay = 1000ms;
  c.retry.ceiling = 10000ms;
  auto backend = h.make(c);
  EXPECT_THROW(backend.complete(user("q")), TransportError);
  std::chrono::milliseconds total{0};
  for (auto d : h.sleeps) total += d;
  EXPECT_LE(total, c.retry.ceiling);
  EXPECT_EQ(h.sleeps.size(), 3u);  // 1 + 2 + 4 s; the next 8 s would pass 10 s
}

TEST_F(HttpTest, UnreachableEndpointIsATransportError) {
  HttpConfig c;
  c.base_url = "http://127.0.0.1:1";
  c.api_key_env = "LAYERLAB_TEST_KEY";
  c.retry.max_attempts = 2;
  Harness h;
  auto backend = h.make(c);
  try {
    backend.complete(user("q"));
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_EQ(e.status(), 0);
    EXPECT_EQ(e.attempts(), 2);
  }
}

TEST_F(HttpTest, GarbageBodyIsATransportError) {
  MockServer server({{200, "not json"}});
  Harness h;
  auto backend = h.make(server.config());
  EXPECT_THROW(backend.complete(user("q")), TransportError);
}

TEST(Http, MissingKeyIsInfeasible) {
  HttpConfig c;
  c.api_key_env = "LAYERLAB_SURELY_UNSET_KEY";
  EXPECT_THROW(HttpBackend{c}, InfeasibleError);
}

TEST(Http, ConfigFileOverridesDefaults) {
  const auto path = (std::filesystem::temp_directory_path() / "layerlab_http.json").string();
  {
    std::ofstream out(path);
    out << R"({"base_url": "http://localhost:9", "timeout_s": 7, "retry": {"max_attempts": 2, "ceiling_ms": 900}})";
  }
  const auto c = load_http_config(path);
  EXPECT_EQ(c.base_url, "http://localhost:9");
  EXPECT_EQ(c.path, "/v1/chat/completions");
  EXPECT_EQ(c.timeout, 7s);
  EXPECT_EQ(c.retry.max_attempts, 2);
  EXPECT_EQ(c.retry.ceiling, 900ms);
  EXPECT_EQ(c.retry.initial_delay, 500ms);
  EXPECT_THROW(load_http_config(path + ".missing"), ParseError);
}

TEST(Governor, CapsInFlight) {
  ConcurrencyGovernor g(3, 0ms);
  std::atomic<int> peak{0}, now{0};
  std::vector<std::thread> ts;
  for (int i = 0; i < 12; ++i) {
    ts.emplace_back([&] {
      GovernorSlot slot(g);
      const int v = ++now;
      int p = peak.load();
      while (v > p && !peak.compare_exchange_weak(p, v)) {}
      std::this_thread::sleep_for(5ms);
      --now;
    });
  }
  for (auto& t : ts) t.join();
  EXPECT_LE(peak.load(), 3);
  EXPECT_EQ(g.in_flight(), 0);
}

TEST(Governor, RateLimitShrinksThenRecoversAfterCoolDown) {
  ConcurrencyGovernor g(4, 30ms);
  g.signal_rate_limit();
  g.signal_rate_limit();
  EXPECT_EQ(g.limit(), 2);
  for (int i = 0; i < 5; ++i) g.signal_rate_limit();
  EXPECT_EQ(g.limit(), 1);
  g.acquire();
  g.release();
  EXPECT_EQ(g.limit(), 1);  // still cooling down
  std::this_thread::sleep_for(40ms);
  g.acquire();
  g.release();
  EXPECT_EQ(g.limit(), 2);
  for (int i = 0; i < 5; ++i) {
    g.acquire();
    g.release();
  }
  EXPECT_EQ(g.limit(), 4);
}

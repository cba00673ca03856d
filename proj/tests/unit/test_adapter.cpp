#include <gtest/gtest.h>

#include <filesystem>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "gnt/adapter.hpp"
#include "gnt/error.hpp"

using namespace gnt;

namespace {

std::vector<TestInstance> three() {
  std::vector<TestInstance> out;
  const char* adjs[] = {"fit", "calm", "brave"};
  for (int i = 0; i < 3; ++i) {
    out.push_back(expand_template(TemplateFamily::T7_AdverbStereotype, {{"A", adjs[i]}},
                                  "T7-00000" + std::to_string(i + 1) + "d"));
  }
  return out;
}

AdapterConfig cmd(const std::string& command) {
  AdapterConfig c;
  c.kind = AdapterKind::ExternalCommand;
  c.target = command;
  c.system_id = "test";
  c.timeout_seconds = 5;
  c.max_retries = 1;
  c.backoff_seconds = 0.01;
  return c;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::StageError;
}

std::filesystem::path temp_file(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("gnt_adapter_" + std::to_string(::getpid()) + "_" + name);
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST(Adapter, EchoBackend) {
  auto suite = three();
  auto records = translate_suite(suite, cmd("cat"));
  ASSERT_EQ(records.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(records[i].instance_id, suite[i].id);
    EXPECT_EQ(records[i].target_text, suite[i].source_text);
    EXPECT_EQ(records[i].system_id, "test");
  }
}

TEST(Adapter, PairsByIdNotOrder) {
  auto suite = three();
  auto records = translate_suite(suite, cmd("tac"));
  ASSERT_EQ(records.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(records[i].target_text, suite[i].source_text);
}

TEST(Adapter, DroppedIdIsIncompleteBatch) {
  try {
    translate_suite(three(), cmd("sed 2d"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IncompleteBatch);
    EXPECT_NE(std::string(e.what()).find("T7-000002d"), std::string::npos);
  }
}

TEST(Adapter, ForeignIdIsProtocolViolation) {
  EXPECT_EQ(code_of([] { translate_suite(three(), cmd("sed 's/^/x/'")); }), ErrorCode::ProtocolViolation);
  EXPECT_EQ(code_of([] { translate_suite(three(), cmd("cut -f2")); }), ErrorCode::ProtocolViolation);
}

TEST(Adapter, TimeoutBecomesBackendUnavailable) {
  auto c = cmd("sleep 5");
  c.timeout_seconds = 0.2;
  c.max_retries = 2;
  auto start = std::chrono::steady_clock::now();
  EXPECT_EQ(code_of([&] { translate_suite(three(), c); }), ErrorCode::BackendUnavailable);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(4));
}

TEST(Adapter, RetriesTransientFailures) {
  auto marker = temp_file("flaky");
  // fails on the first call, echoes afterwards
  auto c = cmd("if [ -e " + marker.string() + " ]; then cat; else touch " + marker.string() + "; exit 3; fi");
  auto records = translate_suite(three(), c);
  EXPECT_EQ(records.size(), 3u);
  std::filesystem::remove(marker);
}

TEST(Adapter, ResumeOnlyRequestsMissingIds) {
  auto suite = three();
  auto partial = temp_file("partial.jsonl");
  auto log = temp_file("log");
  auto c = cmd("tee -a " + log.string());
  c.batch_size = 1;
  c.resume_path = partial;

  // First run dies on the third instance.
  auto failing = c;
  failing.target = "grep -v T7-000003d | tee -a " + log.string();
  EXPECT_EQ(code_of([&] { translate_suite(suite, failing); }), ErrorCode::IncompleteBatch);
  ASSERT_TRUE(std::filesystem::exists(partial));

  std::filesystem::remove(log);
  auto resumed = translate_suite(suite, c);
  auto sent = read_text_file(log);
  EXPECT_EQ(std::count(sent.begin(), sent.end(), '\n'), 1);
  EXPECT_NE(sent.find("T7-000003d"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(partial));

  auto clean = translate_suite(suite, cmd("cat"));
  EXPECT_EQ(resumed, clean);
  std::filesystem::remove(log);
}

TEST(Adapter, SourceBytesAreUnchanged) {
  std::vector<TestInstance> suite = three();
  suite[0].source_text = "\"Ég er  huglítil(l)\" «ok» \\ \"x\"";
  auto records = translate_suite(suite, cmd("cat"));
  EXPECT_EQ(records[0].target_text, suite[0].source_text);
}

TEST(Adapter, RejectsBadConfig) {
  auto c = cmd("cat");
  c.batch_size = 0;
  EXPECT_EQ(code_of([&] { translate_suite(three(), c); }), ErrorCode::InvalidConfig);
  c = cmd("cat");
  c.timeout_seconds = 0;
  EXPECT_EQ(code_of([&] { translate_suite(three(), c); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([&] { translate_suite({}, cmd("cat")); }), ErrorCode::InvalidConfig);
  auto suite = three();
  suite[1].source_text += "\tx";
  EXPECT_EQ(code_of([&] { translate_suite(suite, cmd("cat")); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { parse_adapter_spec("ftp:x"); }), ErrorCode::InvalidConfig);
}

TEST(Adapter, ParsesSpecs) {
  auto c = parse_adapter_spec("cmd:sed -e 's/a/b/'");
  EXPECT_EQ(c.kind, AdapterKind::ExternalCommand);
  EXPECT_EQ(c.target, "sed -e 's/a/b/'");
  auto h = parse_adapter_spec("http://localhost:8080/translate");
  EXPECT_EQ(h.kind, AdapterKind::HttpEndpoint);
  EXPECT_EQ(h.target, "http://localhost:8080/translate");
}

TEST(Adapter, HttpEndpoint) {
  using nlohmann::json;
  httplib::Server server;
  int calls = 0;
  std::string auth;
  server.Post("/translate", [&](const httplib::Request& req, httplib::Response& res) {
    ++calls;
    auth = req.get_header_value("Authorization");
    if (calls == 1) {
      res.status = 503;
      return;
    }
    auto body = json::parse(req.body);
    json out;
    out["items"] = json::array();
    auto items = body["items"];
    for (auto it = items.rbegin(); it != items.rend(); ++it) {
      out["items"].push_back({{"id", (*it)["id"]}, {"translation", "[" + body["lang"].get<std::string>() + "] " +
                                                                        (*it)["text"].get<std::string>()}});
    }
    res.set_content(out.dump(), "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  ::setenv("GNT_TEST_TOKEN", "secret", 1);
  AdapterConfig c;
  c.kind = AdapterKind::HttpEndpoint;
  c.target = "http://127.0.0.1:" + std::to_string(port) + "/translate";
  c.language = Language::IS;
  c.system_id = "http";
  c.batch_size = 2;
  c.timeout_seconds = 5;
  c.max_retries = 2;
  c.backoff_seconds = 0.01;
  c.token_env = "GNT_TEST_TOKEN";
  auto suite = three();
  auto records = translate_suite(suite, c);
  server.stop();
  t.join();

  ASSERT_EQ(records.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(records[i].target_text, "[is] " + suite[i].source_text);
  EXPECT_EQ(calls, 3);  // one 503, then two batches
  EXPECT_EQ(auth, "Bearer secret");
}

TEST(Adapter, HttpUnreachable) {
  AdapterConfig c;
  c.kind = AdapterKind::HttpEndpoint;
  c.target = "http://127.0.0.1:1/translate";
  c.timeout_seconds = 0.5;
  c.max_retries = 1;
  c.backoff_seconds = 0.01;
  EXPECT_EQ(code_of([&] { translate_suite(three(), c); }), ErrorCode::BackendUnavailable);
}

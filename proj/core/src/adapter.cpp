#include "gnt/adapter.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "gnt/error.hpp"
#include "subprocess.hpp"

namespace gnt {

namespace {

using nlohmann::json;

class CommandBackend : public TranslationBackend {
 public:
  explicit CommandBackend(const AdapterConfig& c) : config_(c) {}

  std::vector<IdText> translate_batch(const std::vector<IdText>& batch) override {
    std::string input;
    for (const auto& [id, text] : batch) input += id + "\t" + text + "\n";
    auto r = subprocess::run(config_.target, input, config_.timeout_seconds);
    if (r.timed_out) throw TransientFailure("command timed out");
    if (r.exit_status != 0) {
      throw TransientFailure("command exited with status " + std::to_string(r.exit_status) +
                             (r.err.empty() ? "" : ": " + r.err.substr(0, 200)));
    }
    std::vector<IdText> out;
    std::size_t start = 0;
    while (start < r.out.size()) {
      auto end = r.out.find('\n', start);
      if (end == std::string::npos) end = r.out.size();
      std::string line = r.out.substr(start, end - start);
      start = end + 1;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw Error(ErrorCode::ProtocolViolation, "reply line without a tab: '" + line.substr(0, 80) + "'");
      }
      out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return out;
  }

 private:
  AdapterConfig config_;
};

class HttpBackend : public TranslationBackend {
 public:
  explicit HttpBackend(const AdapterConfig& c) : config_(c) {
    const std::string& url = c.target;
    if (url.rfind("http://", 0) != 0) {
      throw Error(ErrorCode::InvalidConfig, "only plain http:// endpoints are supported, got '" + url + "'");
    }
    auto slash = url.find('/', 7);
    host_ = url.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : url.substr(slash);
  }

  std::vector<IdText> translate_batch(const std::vector<IdText>& batch) override {
    httplib::Client client(host_);
    auto secs = std::chrono::duration<double>(config_.timeout_seconds);
    auto us = std::chrono::duration_cast<std::chrono::microseconds>(secs);
    client.set_connection_timeout(us);
    client.set_read_timeout(us);
    client.set_write_timeout(us);
    httplib::Headers headers;
    if (!config_.token_env.empty()) {
      if (const char* tok = std::getenv(config_.token_env.c_str())) {
        headers.emplace("Authorization", std::string("Bearer ") + tok);
      }
    }
    json body;
    body["lang"] = to_string(config_.language);
    body["system"] = config_.system_id;
    body["items"] = json::array();
    for (const auto& [id, text] : batch) body["items"].push_back({{"id", id}, {"text", text}});
    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) throw TransientFailure("request failed: " + httplib::to_string(res.error()));
    if (res->status >= 500 || res->status == 429) throw TransientFailure("server replied " + std::to_string(res->status));
    if (res->status != 200) {
      throw Error(ErrorCode::ProtocolViolation, "server replied " + std::to_string(res->status));
    }
    std::vector<IdText> out;
    try {
      auto j = json::parse(res->body);
      for (const auto& item : j.at("items")) {
        out.emplace_back(item.at("id").get<std::string>(), item.at("translation").get<std::string>());
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ProtocolViolation, std::string("malformed reply: ") + e.what());
    }
    return out;
  }

 private:
  AdapterConfig config_;
  std::string host_;
  std::string path_;
};

std::map<std::string, std::string> load_partial(const AdapterConfig& config) {
  std::map<std::string, std::string> done;
  if (config.resume_path.empty() || !std::filesystem::exists(config.resume_path)) return done;
  auto set = parse_translations(read_text_file(config.resume_path), nullptr, config.resume_path.string());
  for (auto& r : set.records) {
    if (r.system_id == config.system_id && r.language == config.language) done[r.instance_id] = r.target_text;
  }
  return done;
}

void append_partial(const AdapterConfig& config, const std::vector<TranslationRecord>& records) {
  if (config.resume_path.empty()) return;
  std::ofstream out(config.resume_path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::IoError, "cannot append to '" + config.resume_path.string() + "'");
  out << write_translations(records);
}

}  // namespace

AdapterConfig parse_adapter_spec(std::string_view spec) {
  AdapterConfig c;
  if (spec.rfind("cmd:", 0) == 0) {
    c.kind = AdapterKind::ExternalCommand;
    c.target = std::string(spec.substr(4));
  } else if (spec.rfind("http:", 0) == 0) {
    c.kind = AdapterKind::HttpEndpoint;
    c.target = std::string(spec.substr(5));
    if (c.target.rfind("http://", 0) != 0) c.target = "http:" + c.target;
  } else {
    throw Error(ErrorCode::InvalidConfig, "adapter must be cmd:<command> or http:<url>, got '" + std::string(spec) + "'");
  }
  if (c.target.empty()) throw Error(ErrorCode::InvalidConfig, "adapter target is empty");
  return c;
}

std::unique_ptr<TranslationBackend> make_backend(const AdapterConfig& config) {
  if (config.kind == AdapterKind::ExternalCommand) return std::make_unique<CommandBackend>(config);
  return std::make_unique<HttpBackend>(config);
}

std::vector<TranslationRecord> translate_suite(std::span<const TestInstance> suite, const AdapterConfig& config) {
  auto backend = make_backend(config);
  return translate_suite(suite, config, *backend);
}

std::vector<TranslationRecord> translate_suite(std::span<const TestInstance> suite, const AdapterConfig& config,
                                               TranslationBackend& backend) {
  if (config.batch_size < 1) throw Error(ErrorCode::InvalidConfig, "batch_size must be at least 1");
  if (!(config.timeout_seconds > 0)) throw Error(ErrorCode::InvalidConfig, "timeout must be positive");
  if (suite.empty()) throw Error(ErrorCode::InvalidConfig, "nothing to translate: the suite is empty");

  std::set<std::string> ids;
  for (const auto& inst : suite) {
    if (!ids.insert(inst.id).second) throw Error(ErrorCode::InvalidConfig, "duplicate instance id " + inst.id);
    if (config.kind == AdapterKind::ExternalCommand &&
        (inst.source_text.find_first_of("\t\n\r") != std::string::npos || inst.id.find_first_of("\t\n\r") != std::string::npos)) {
      throw Error(ErrorCode::InvalidConfig, "instance " + inst.id + " contains a tab or line break");
    }
  }

  auto done = load_partial(config);
  std::vector<IdText> pending;
  for (const auto& inst : suite) {
    if (!done.count(inst.id)) pending.emplace_back(inst.id, inst.source_text);
  }

  std::mt19937_64 rng(std::random_device{}());
  std::uniform_real_distribution<double> jitter(0.5, 1.5);

  for (std::size_t start = 0; start < pending.size(); start += config.batch_size) {
    std::vector<IdText> batch(pending.begin() + static_cast<std::ptrdiff_t>(start),
                              pending.begin() + static_cast<std::ptrdiff_t>(std::min(pending.size(), start + config.batch_size)));
    std::vector<IdText> reply;
    for (unsigned attempt = 0;; ++attempt) {
      try {
        reply = backend.translate_batch(batch);
        break;
      } catch (const TransientFailure& e) {
        if (attempt >= config.max_retries) {
          throw Error(ErrorCode::BackendUnavailable, "batch starting at " + batch.front().first + " failed after " +
                                                         std::to_string(attempt + 1) + " attempts: " + e.what());
        }
        double delay = config.backoff_seconds * static_cast<double>(1u << std::min(attempt, 16u)) * jitter(rng);
        std::this_thread::sleep_for(std::chrono::duration<double>(delay));
      }
    }

    std::map<std::string, std::string> got;
    std::set<std::string> in_batch;
    for (const auto& [id, text] : batch) in_batch.insert(id);
    for (auto& [id, text] : reply) {
      if (!in_batch.count(id)) throw Error(ErrorCode::ProtocolViolation, "reply names id '" + id + "' not in the batch");
      if (!got.emplace(id, std::move(text)).second) {
        throw Error(ErrorCode::ProtocolViolation, "reply repeats id '" + id + "'");
      }
    }
    std::vector<TranslationRecord> fresh;
    std::string missing;
    for (const auto& [id, text] : batch) {
      auto it = got.find(id);
      if (it == got.end()) {
        missing += (missing.empty() ? "" : ", ") + id;
        continue;
      }
      fresh.push_back({config.system_id, config.language, id, it->second});
    }
    append_partial(config, fresh);
    for (auto& r : fresh) done[r.instance_id] = std::move(r.target_text);
    if (!missing.empty()) throw Error(ErrorCode::IncompleteBatch, "missing ids: [" + missing + "]");
  }

  std::vector<TranslationRecord> out;
  out.reserve(suite.size());
  for (auto& [id, text] : done) {
    if (ids.count(id)) out.push_back({config.system_id, config.language, id, text});
  }
  if (!config.resume_path.empty()) {
    std::error_code ec;
    std::filesystem::remove(config.resume_path, ec);
  }
  return out;
}

}  // namespace gnt

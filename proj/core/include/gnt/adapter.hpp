#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gnt/io.hpp"
#include "gnt/suite.hpp"

namespace gnt {

enum class AdapterKind { ExternalCommand, HttpEndpoint };

struct AdapterConfig {
  AdapterKind kind = AdapterKind::ExternalCommand;
  std::string target;  // shell command line, or http://host[:port]/path
  Language language = Language::ES;
  std::string system_id;
  std::size_t batch_size = 32;
  double timeout_seconds = 30.0;
  unsigned max_retries = 2;
  double backoff_seconds = 0.5;  // first retry delay; doubles each retry, with jitter
  std::filesystem::path resume_path;  // partial results; empty disables resume
  std::string token_env;              // HTTP: env var whose value is sent as a bearer token
};

// "cmd:<command line>" or "http:<url>".
AdapterConfig parse_adapter_spec(std::string_view spec);

// Throw from a backend to signal a failure worth retrying.
class TransientFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using IdText = std::pair<std::string, std::string>;

class TranslationBackend {
 public:
  virtual ~TranslationBackend() = default;
  // Replies may come in any order; pairing happens by id.
  virtual std::vector<IdText> translate_batch(const std::vector<IdText>& batch) = 0;
};

std::unique_ptr<TranslationBackend> make_backend(const AdapterConfig& config);

// One record per instance, sorted by id. Throws IncompleteBatch,
// ProtocolViolation, BackendUnavailable or InvalidConfig.
std::vector<TranslationRecord> translate_suite(std::span<const TestInstance> suite, const AdapterConfig& config);
std::vector<TranslationRecord> translate_suite(std::span<const TestInstance> suite, const AdapterConfig& config,
                                               TranslationBackend& backend);

}  // namespace gnt

#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "advisor/common/errors.h"

namespace advisor::llm {

inline constexpr std::string_view kFallbackToken = "INSUFFICIENT_CONTEXT";
inline constexpr std::string_view kOpeningPhrase = "As your academic advisor, I recommend";
inline constexpr std::string_view kDirectiveVersion = "v1";

// The fixed system directive shipped in assets/system_directive.v1.txt.
const std::string& system_directive();

// A generation that did not finish inside the request timeout. Not retried.
class GenerationTimeout : public TransportError {
 public:
  using TransportError::TransportError;
};

struct DecodingParams {
  int beam_count = 4;
  double temperature = 0.1;
  int max_new_tokens = 1024;
};

struct GenerationRequest {
  std::string system_directive;
  std::string prompt_body;
  DecodingParams decoding;
  std::chrono::milliseconds timeout{60000};
};

// Throws ConfigError on beam_count < 1, negative temperature or
// non-positive max_new_tokens / timeout.
void check_request(const GenerationRequest& request);

GenerationRequest make_request(std::string prompt_body, DecodingParams decoding = {},
                               std::chrono::milliseconds timeout = std::chrono::milliseconds{60000});

struct GenerationResult {
  std::string think;
  std::string response;
  bool fallback = false;
  std::string raw;
  std::chrono::duration<double> latency{0};
};

// Backend contract: turn a request into raw model text. Implementations throw
// TransportError (or GenerationTimeout) when the model cannot be reached.
class GeneratorBackend {
 public:
  virtual ~GeneratorBackend() = default;
  virtual std::string generate(const GenerationRequest& request) = 0;
  virtual std::string identity() const = 0;
};

struct TwoBlockOutput {
  std::string think;
  std::string response;
};
struct FallbackOutput {};

using ParsedOutput = std::variant<TwoBlockOutput, FallbackOutput>;

// Trimmed raw equal to the fallback token -> FallbackOutput. Otherwise exactly
// one <think> block followed by exactly one <response> block, both non-empty;
// anything else throws ContractViolation.
ParsedOutput parse_output(std::string_view raw);

// Calls the backend (one retry on a transport failure, none on timeout),
// measures wall-clock latency, parses the contract and checks that a
// non-fallback response opens with the mandated phrase.
GenerationResult generate(const GenerationRequest& request, GeneratorBackend& backend);

// Deterministic offline generator. Emits the fallback token when the body has
// no COURSE_FACT entries, otherwise recommends every fact in body order.
std::string stub_generate(std::string_view prompt_body);

class StubBackend : public GeneratorBackend {
 public:
  std::string generate(const GenerationRequest& request) override;
  std::string identity() const override { return "stub/v1"; }
};

// Stands in for an ungrounded model: answers every prompt with confident
// recommendations of course codes derived from a hash of the prompt, never
// the fallback token.
class DegradedStubBackend : public GeneratorBackend {
 public:
  std::string generate(const GenerationRequest& request) override;
  std::string identity() const override { return "degraded-stub/v1"; }
};

struct RemoteBackendConfig {
  std::string endpoint;  // e.g. http://localhost:8000/v1/chat/completions
  std::string model;
  std::string credential_env;  // name of the variable holding the bearer token
};

// Chat-completion style backend: system + user messages in, the first
// choice's message content out.
class RemoteBackend : public GeneratorBackend {
 public:
  explicit RemoteBackend(RemoteBackendConfig config);
  std::string generate(const GenerationRequest& request) override;
  std::string identity() const override;

 private:
  RemoteBackendConfig config_;
};

nlohmann::json to_json(const DecodingParams& d);
nlohmann::json to_json(const GenerationResult& r);

}  // namespace advisor::llm

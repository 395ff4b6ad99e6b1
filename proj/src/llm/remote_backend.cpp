#include <cstdlib>

#include <httplib.h>

#include "advisor/common/endpoint.h"
#include "advisor/llm/gateway.h"

namespace advisor::llm {

RemoteBackend::RemoteBackend(RemoteBackendConfig config) : config_(std::move(config)) {
  split_endpoint(config_.endpoint);
}

std::string RemoteBackend::identity() const { return "remote/" + config_.model; }

std::string RemoteBackend::generate(const GenerationRequest& request) {
  const auto ep = split_endpoint(config_.endpoint);
  httplib::Client client(ep.origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!config_.credential_env.empty()) {
    if (const char* token = std::getenv(config_.credential_env.c_str()); token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }

  const nlohmann::json payload = {
      {"model", config_.model},
      {"messages",
       {{{"role", "system"}, {"content", request.system_directive}},
        {{"role", "user"}, {"content", request.prompt_body}}}},
      {"temperature", request.decoding.temperature},
      {"n", 1},
      {"best_of", request.decoding.beam_count},
      {"use_beam_search", request.decoding.beam_count > 1},
      {"max_tokens", request.decoding.max_new_tokens},
  };

  const auto start = std::chrono::steady_clock::now();
  auto res = client.Post(ep.path, headers, payload.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::ConnectionTimeout ||
        (err == httplib::Error::Read && std::chrono::steady_clock::now() - start >= request.timeout)) {
      throw GenerationTimeout("generation timed out after " + std::to_string(request.timeout.count()) + " ms");
    }
    throw TransportError("request to " + ep.origin + " failed: " + httplib::to_string(err));
  }
  if (res->status != 200) {
    throw TransportError("backend answered HTTP " + std::to_string(res->status));
  }
  try {
    const auto body = nlohmann::json::parse(res->body);
    return body.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed completion payload: ") + e.what());
  }
}

}  // namespace advisor::llm

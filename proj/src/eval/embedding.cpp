#include "advisor/eval/embedding.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "advisor/common/endpoint.h"
#include "advisor/common/errors.h"
#include "advisor/common/text.h"

namespace advisor::eval {

double Embedding::norm() const {
  double sq = 0.0;
  for (const auto& [_, v] : values) sq += v * v;
  return std::sqrt(sq);
}

Embedding TermFrequencyProvider::embed(std::string_view text) {
  Embedding e;
  e.dimension = kDimension;
  for (const auto& w : text::words(text)) e.values[text::fnv1a64(w) % kDimension] += 1.0;
  const double n = e.norm();
  if (n > 0.0) {
    for (auto& [_, v] : e.values) v /= n;
  }
  return e;
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(RemoteEmbeddingConfig config) : config_(std::move(config)) {
  split_endpoint(config_.endpoint);
}

Embedding RemoteEmbeddingProvider::embed(std::string_view text) {
  const auto ep = split_endpoint(config_.endpoint);
  httplib::Client client(ep.origin);
  const auto secs = config_.timeout_ms / 1000;
  const auto usecs = (config_.timeout_ms % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);

  httplib::Headers headers;
  if (!config_.credential_env.empty()) {
    if (const char* token = std::getenv(config_.credential_env.c_str()); token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }
  const nlohmann::json payload = {{"model", config_.model}, {"input", std::string(text)}};
  auto res = client.Post(ep.path, headers, payload.dump(), "application/json");
  if (!res) throw ProviderError("embedding request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw ProviderError("embedding service answered HTTP " + std::to_string(res->status));

  Embedding e;
  try {
    const auto vec = nlohmann::json::parse(res->body).at("data").at(0).at("embedding");
    e.dimension = vec.size();
    for (std::size_t i = 0; i < vec.size(); ++i) {
      const double v = vec[i].get<double>();
      if (v != 0.0) e.values[i] = v;
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ProviderError(std::string("malformed embedding payload: ") + ex.what());
  }
  if (e.dimension == 0) throw ProviderError("embedding service returned an empty vector");
  return e;
}

Embedding embed(std::string_view text, EmbeddingProvider& provider) { return provider.embed(text); }

Embedding embed(std::string_view text) {
  TermFrequencyProvider tf;
  return tf.embed(text);
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
  if (a.dimension != b.dimension) {
    throw DimensionMismatch("cosine over dimensions " + std::to_string(a.dimension) + " and " +
                            std::to_string(b.dimension));
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  const auto& small = a.values.size() <= b.values.size() ? a.values : b.values;
  const auto& large = a.values.size() <= b.values.size() ? b.values : a.values;
  double dot = 0.0;
  for (const auto& [i, v] : small) {
    if (auto it = large.find(i); it != large.end()) dot += v * it->second;
  }
  const double c = dot / (na * nb);
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace advisor::eval

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

namespace advisor::eval {

// Sparse real vector. Absent indices are zero.
struct Embedding {
  std::size_t dimension = 0;
  std::map<std::size_t, double> values;

  double norm() const;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual Embedding embed(std::string_view text) = 0;
  virtual std::string identity() const = 0;
};

// Term frequencies over lowercased maximal alphanumeric runs, hashed into a
// 2^24-slot space and L2-normalized. Empty text maps to the zero vector.
class TermFrequencyProvider : public EmbeddingProvider {
 public:
  static constexpr std::size_t kDimension = std::size_t{1} << 24;

  Embedding embed(std::string_view text) override;
  std::string identity() const override { return "tf-hash/v1"; }
};

struct RemoteEmbeddingConfig {
  std::string endpoint;  // e.g. http://localhost:8000/v1/embeddings
  std::string model;
  std::string credential_env;
  int timeout_ms = 30000;
};

// Embeddings-API style provider: {"model", "input"} in, data[0].embedding out.
// Throws ProviderError on any transport or payload failure.
class RemoteEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit RemoteEmbeddingProvider(RemoteEmbeddingConfig config);
  Embedding embed(std::string_view text) override;
  std::string identity() const override { return "remote/" + config_.model; }

 private:
  RemoteEmbeddingConfig config_;
};

Embedding embed(std::string_view text, EmbeddingProvider& provider);
Embedding embed(std::string_view text);  // TermFrequencyProvider

// dot(a, b) / (|a| |b|), 0.0 when either norm is zero. Throws
// DimensionMismatch.
double cosine_similarity(const Embedding& a, const Embedding& b);

}  // namespace advisor::eval

#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

namespace advisor::service {

struct ProvenanceRecord {
  std::string query_id;
  std::string timestamp;  // UTC, ISO 8601
  std::string student_id;
  std::string query_text;
  std::optional<nlohmann::json> parsed_query;
  std::optional<nlohmann::json> filter_spec;
  std::optional<nlohmann::json> rule_trace;
  std::optional<nlohmann::json> plan;
  std::optional<nlohmann::json> prompt;
  std::optional<nlohmann::json> generation;  // backend identity, decoding, latency
  std::optional<nlohmann::json> grounding;
  std::optional<nlohmann::json> error;
  std::map<std::string, double> stage_latencies;  // seconds
};

nlohmann::json to_json(const ProvenanceRecord& record);

// Append-only store keyed by a content hash of each record. With a path, every
// record is written through as one JSON line and earlier lines are reloaded
// on construction.
class ProvenanceStore {
 public:
  ProvenanceStore() = default;
  explicit ProvenanceStore(std::filesystem::path path);

  // Returns the ref. Appending identical content twice yields the same ref
  // and a single stored record.
  std::string append(const ProvenanceRecord& record);
  std::optional<nlohmann::json> get(const std::string& ref) const;
  std::size_t size() const;

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<std::string, nlohmann::json> records_;
};

std::string utc_timestamp();

}  // namespace advisor::service

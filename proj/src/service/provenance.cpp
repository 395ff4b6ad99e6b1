#include "advisor/service/provenance.h"

#include <ctime>
#include <fstream>

#include "advisor/common/errors.h"
#include "advisor/common/text.h"

namespace advisor::service {

using nlohmann::json;

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json to_json(const ProvenanceRecord& r) {
  json j = {{"query_id", r.query_id},
            {"timestamp", r.timestamp},
            {"student_id", r.student_id},
            {"query_text", r.query_text},
            {"stage_latencies", r.stage_latencies}};
  auto put = [&](const char* key, const std::optional<json>& v) {
    if (v) j[key] = *v;
  };
  put("parsed_query", r.parsed_query);
  put("filter_spec", r.filter_spec);
  put("rule_trace", r.rule_trace);
  put("plan", r.plan);
  put("prompt", r.prompt);
  put("generation", r.generation);
  put("grounding", r.grounding);
  put("error", r.error);
  return j;
}

ProvenanceStore::ProvenanceStore(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    try {
      auto entry = json::parse(line);
      records_[entry.at("ref").get<std::string>()] = std::move(entry.at("record"));
    } catch (const json::exception& e) {
      throw ParseError(path_.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

std::string ProvenanceStore::append(const ProvenanceRecord& record) {
  auto body = to_json(record);
  const auto ref = text::hex64(text::fnv1a64(body.dump()));
  std::lock_guard<std::mutex> lock(mu_);
  if (records_.count(ref)) return ref;
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::app);
    if (!out) throw ConfigError("cannot append to provenance log " + path_.string());
    out << json{{"ref", ref}, {"record", body}}.dump() << "\n";
  }
  records_.emplace(ref, std::move(body));
  return ref;
}

std::optional<json> ProvenanceStore::get(const std::string& ref) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = records_.find(ref);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

std::size_t ProvenanceStore::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_.size();
}

}  // namespace advisor::service

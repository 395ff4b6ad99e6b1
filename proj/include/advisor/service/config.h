#pragma once

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "advisor/catalog/term.h"
#include "advisor/llm/gateway.h"
#include "advisor/planner/planner.h"

namespace advisor::service {

struct ServiceConfig {
  std::filesystem::path catalog_path = "fixtures/catalog";
  std::filesystem::path students_path;  // empty: next to the catalog
  std::string host = "127.0.0.1";
  int port = 8080;

  std::string backend = "stub";  // stub | degraded-stub | remote
  llm::RemoteBackendConfig remote;
  llm::DecodingParams decoding;
  int generation_timeout_ms = 60000;

  std::filesystem::path provenance_path;  // empty: in-memory only
  std::filesystem::path footprint_log_path;
  std::filesystem::path lexicon_path;  // empty: built-in
  std::filesystem::path skills_path;   // empty: built-in

  // Term that "next semester" is resolved against. When absent, the term
  // after the student's last completed term, else the student's start term.
  std::optional<catalog::TermLabel> current_term;

  int default_credit_cap = 15;
  int min_courses_per_term = 3;
  int max_terms = 24;
};

using EnvLookup = std::function<const char*(const char*)>;

// Unknown keys are rejected so typos surface. Throws ConfigError.
ServiceConfig parse_config(const nlohmann::json& doc);
// Relative paths in the document resolve against its directory.
ServiceConfig load_config(const std::filesystem::path& path);

// ADVISOR_PORT, ADVISOR_CATALOG, ADVISOR_BACKEND, ADVISOR_CREDENTIAL_ENV.
void apply_env_overrides(ServiceConfig& config, const EnvLookup& env = [](const char* k) { return std::getenv(k); });

std::unique_ptr<llm::GeneratorBackend> make_backend(const ServiceConfig& config);
planner::PlannerConfig planner_config(const ServiceConfig& config);

// The credential value itself never appears; only the variable name.
nlohmann::json to_json(const ServiceConfig& config);

}  // namespace advisor::service

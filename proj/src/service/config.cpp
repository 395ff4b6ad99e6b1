#include "advisor/service/config.h"

#include <fstream>
#include <set>

#include "advisor/common/errors.h"

namespace advisor::service {

using nlohmann::json;

namespace {

const std::set<std::string> kKeys = {
    "catalog_path", "students_path", "host", "port", "backend", "remote", "decoding", "generation_timeout_ms",
    "provenance_path", "footprint_log_path", "lexicon_path", "skills_path", "current_term", "default_credit_cap",
    "min_courses_per_term", "max_terms"};

template <typename T>
T get(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key `") + key + "` has the wrong type");
  }
}

int parse_port(std::string_view s) {
  try {
    std::size_t used = 0;
    const int p = std::stoi(std::string(s), &used);
    if (used == s.size() && p > 0 && p < 65536) return p;
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid port `" + std::string(s) + "`");
}

}  // namespace

ServiceConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [k, _] : doc.items()) {
    if (!kKeys.count(k)) throw ConfigError("unknown config key `" + k + "`");
  }
  ServiceConfig c;
  c.catalog_path = get<std::string>(doc, "catalog_path", c.catalog_path.string());
  c.students_path = get<std::string>(doc, "students_path", "");
  c.host = get<std::string>(doc, "host", c.host);
  c.port = get<int>(doc, "port", c.port);
  c.backend = get<std::string>(doc, "backend", c.backend);
  if (doc.contains("remote")) {
    const auto& r = doc["remote"];
    c.remote.endpoint = get<std::string>(r, "endpoint", "");
    c.remote.model = get<std::string>(r, "model", "");
    c.remote.credential_env = get<std::string>(r, "credential_env", "");
  }
  if (doc.contains("decoding")) {
    const auto& d = doc["decoding"];
    c.decoding.beam_count = get<int>(d, "beam_count", c.decoding.beam_count);
    c.decoding.temperature = get<double>(d, "temperature", c.decoding.temperature);
    c.decoding.max_new_tokens = get<int>(d, "max_new_tokens", c.decoding.max_new_tokens);
  }
  c.generation_timeout_ms = get<int>(doc, "generation_timeout_ms", c.generation_timeout_ms);
  c.provenance_path = get<std::string>(doc, "provenance_path", "");
  c.footprint_log_path = get<std::string>(doc, "footprint_log_path", "");
  c.lexicon_path = get<std::string>(doc, "lexicon_path", "");
  c.skills_path = get<std::string>(doc, "skills_path", "");
  if (doc.contains("current_term") && !doc["current_term"].is_null()) {
    try {
      c.current_term = catalog::parse_term(get<std::string>(doc, "current_term", ""));
    } catch (const ParseError& e) {
      throw ConfigError(std::string("current_term: ") + e.what());
    }
  }
  c.default_credit_cap = get<int>(doc, "default_credit_cap", c.default_credit_cap);
  c.min_courses_per_term = get<int>(doc, "min_courses_per_term", c.min_courses_per_term);
  c.max_terms = get<int>(doc, "max_terms", c.max_terms);

  if (c.port <= 0 || c.port >= 65536) throw ConfigError("port out of range");
  if (c.default_credit_cap <= 0) throw ConfigError("default_credit_cap must be positive");
  if (c.min_courses_per_term < 1) throw ConfigError("min_courses_per_term must be >= 1");
  if (c.max_terms <= 0) throw ConfigError("max_terms must be positive");
  if (c.backend != "stub" && c.backend != "degraded-stub" && c.backend != "remote") {
    throw ConfigError("backend must be one of stub, degraded-stub, remote");
  }
  return c;
}

ServiceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  auto c = parse_config(doc);
  const auto base = path.parent_path();
  for (auto* p : {&c.catalog_path, &c.students_path, &c.provenance_path, &c.footprint_log_path, &c.lexicon_path,
                  &c.skills_path}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  return c;
}

void apply_env_overrides(ServiceConfig& c, const EnvLookup& env) {
  if (const char* v = env("ADVISOR_PORT"); v && *v) c.port = parse_port(v);
  if (const char* v = env("ADVISOR_CATALOG"); v && *v) c.catalog_path = v;
  if (const char* v = env("ADVISOR_BACKEND"); v && *v) {
    const std::string b = v;
    if (b != "stub" && b != "degraded-stub" && b != "remote") throw ConfigError("ADVISOR_BACKEND: unknown backend " + b);
    c.backend = b;
  }
  if (const char* v = env("ADVISOR_CREDENTIAL_ENV"); v && *v) c.remote.credential_env = v;
}

std::unique_ptr<llm::GeneratorBackend> make_backend(const ServiceConfig& c) {
  if (c.backend == "stub") return std::make_unique<llm::StubBackend>();
  if (c.backend == "degraded-stub") return std::make_unique<llm::DegradedStubBackend>();
  if (c.backend == "remote") {
    if (c.remote.endpoint.empty()) throw ConfigError("remote backend needs remote.endpoint");
    return std::make_unique<llm::RemoteBackend>(c.remote);
  }
  throw ConfigError("unknown backend " + c.backend);
}

planner::PlannerConfig planner_config(const ServiceConfig& c) {
  planner::PlannerConfig p;
  p.credit_cap = c.default_credit_cap;
  p.min_courses_per_term = c.min_courses_per_term;
  p.max_terms = c.max_terms;
  return p;
}

json to_json(const ServiceConfig& c) {
  json j = {{"catalog_path", c.catalog_path.string()},
            {"students_path", c.students_path.string()},
            {"host", c.host},
            {"port", c.port},
            {"backend", c.backend},
            {"remote",
             {{"endpoint", c.remote.endpoint}, {"model", c.remote.model}, {"credential_env", c.remote.credential_env}}},
            {"decoding", llm::to_json(c.decoding)},
            {"generation_timeout_ms", c.generation_timeout_ms},
            {"provenance_path", c.provenance_path.string()},
            {"footprint_log_path", c.footprint_log_path.string()},
            {"lexicon_path", c.lexicon_path.string()},
            {"skills_path", c.skills_path.string()},
            {"default_credit_cap", c.default_credit_cap},
            {"min_courses_per_term", c.min_courses_per_term},
            {"max_terms", c.max_terms}};
  j["current_term"] = c.current_term ? json(catalog::to_string(*c.current_term)) : json(nullptr);
  return j;
}

}  // namespace advisor::service

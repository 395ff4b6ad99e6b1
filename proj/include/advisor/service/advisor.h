#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <json.hpp>

#include "advisor/catalog/catalog.h"
#include "advisor/catalog/catalog_io.h"
#include "advisor/eval/bench.h"
#include "advisor/llm/gateway.h"
#include "advisor/nlu/nlu.h"
#include "advisor/planner/planner.h"
#include "advisor/prompt/prompt_forge.h"
#include "advisor/service/config.h"
#include "advisor/service/provenance.h"

namespace advisor::service {

struct AdvisingResponse {
  std::string query_id;
  nlu::AdvisingIntent intent = nlu::AdvisingIntent::OutOfScope;
  std::string think;
  std::string response;
  bool fallback = false;
  std::optional<planner::Roadmap> plan;
  catalog::CourseSet certified;
  std::string provenance_ref;

  std::size_t prompt_tokens = 0;
  std::size_t n_retrieved = 0;
  std::map<std::string, double> stage_latencies;  // seconds
  double engine_seconds = 0.0;                    // all stages but generation
  double generation_seconds = 0.0;
};

nlohmann::json to_json(const AdvisingResponse& r);

struct PlanRequest {
  std::optional<std::string> student_id;
  std::optional<std::string> program_id;
  std::optional<catalog::CourseSet> taken;  // overrides the student's history
  std::optional<int> credit_cap;
  std::optional<catalog::TermLabel> start;
  std::optional<int> min_courses_per_term;
};

// The advising pipeline over one immutable catalog. advise() and plan() may
// be called from several threads at once.
class Advisor {
 public:
  Advisor(catalog::Catalog catalog, catalog::StudentDirectory students, ServiceConfig config,
          std::unique_ptr<llm::GeneratorBackend> backend, std::shared_ptr<ProvenanceStore> provenance);

  // Loads catalog, students, tables and backend as the config says.
  static std::unique_ptr<Advisor> from_config(const ServiceConfig& config);

  // Throws UnknownStudent, or PipelineError after persisting the partial
  // provenance record.
  AdvisingResponse advise(std::string_view query_text, std::string_view student_id,
                          std::string query_id = {});

  // The ungrounded comparison path: the raw query alone goes to `backend`.
  eval::PipelineOutcome advise_baseline(std::string_view query_text, llm::GeneratorBackend& backend) const;

  // Throws UnknownStudent, UnknownProgram, InfeasiblePlan or ConfigError.
  planner::Roadmap plan(const PlanRequest& request) const;

  catalog::TermLabel reference_term(const catalog::StudentProfile& student) const;
  const catalog::StudentProfile& student(std::string_view id) const;  // throws UnknownStudent

  const catalog::Catalog& catalog() const { return catalog_; }
  const catalog::StudentDirectory& students() const { return students_; }
  const ServiceConfig& config() const { return config_; }
  llm::GeneratorBackend& backend() { return *backend_; }
  ProvenanceStore& provenance() { return *provenance_; }
  prompt::FootprintLog& footprint_log() { return footprint_; }

 private:
  catalog::Catalog catalog_;
  catalog::StudentDirectory students_;
  ServiceConfig config_;
  nlu::IntentLexicon lexicon_;
  nlu::SkillTable skills_;
  std::unique_ptr<llm::GeneratorBackend> backend_;
  std::shared_ptr<ProvenanceStore> provenance_;
  prompt::FootprintLog footprint_;
  std::regex code_pattern_;
};

// Bench adapters. The grounded pipeline runs advise(); the baseline sends the
// bare query to its own backend.
class GroundedPipeline : public eval::BenchPipeline {
 public:
  explicit GroundedPipeline(Advisor& advisor) : advisor_(advisor) {}
  eval::PipelineOutcome run(const eval::BenchmarkQuery& query) override;
  std::string identity() const override;

 private:
  Advisor& advisor_;
};

class BaselinePipeline : public eval::BenchPipeline {
 public:
  BaselinePipeline(Advisor& advisor, llm::GeneratorBackend& backend) : advisor_(advisor), backend_(backend) {}
  eval::PipelineOutcome run(const eval::BenchmarkQuery& query) override;
  std::string identity() const override;

 private:
  Advisor& advisor_;
  llm::GeneratorBackend& backend_;
};

}  // namespace advisor::service

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "advisor/catalog/catalog.h"
#include "advisor/nlu/nlu.h"
#include "advisor/rules/rule_engine.h"

namespace advisor::prompt {

using catalog::CourseId;

struct CourseFact {
  CourseId id;
  std::string name;
  int credits = 0;
  std::string description;
};

struct PrereqChain {
  CourseId course;
  std::vector<CourseId> prerequisites;  // most advanced first
};

struct EvidenceBundle {
  std::string student_query;
  std::vector<CourseId> history;
  std::vector<CourseFact> course_facts;
  std::vector<PrereqChain> prereq_chain;
};

struct FiveWOneH {
  std::string who;
  std::string what;
  std::string when;
  std::string where;
  std::string why;
  std::string how;
};

struct PromptBundle {
  std::string body;
  std::size_t token_count = 0;
  std::size_t n_retrieved = 0;
  std::string query_id;
};

inline constexpr std::string_view kHowStatement = "using the vetted courses above";
inline constexpr std::string_view kNotApplicable = "n/a";

using Tokenizer = std::function<std::size_t(std::string_view)>;

// Maximal runs of non-whitespace characters. All reported footprints use it.
std::size_t count_tokens(std::string_view text);

// Facts for `certified` ordered by descending unlock weight over the student's
// remaining program courses, then by the earliest requested skill each course
// carries, then by id. Throws EmptyEvidence when `certified` is empty.
EvidenceBundle build_evidence(const catalog::CourseSet& certified, const catalog::Catalog& catalog,
                              const catalog::StudentProfile& profile, const nlu::ParsedQuery& query);
EvidenceBundle build_evidence(const rules::Verdict& certified, const catalog::Catalog& catalog,
                              const catalog::StudentProfile& profile, const nlu::ParsedQuery& query);

FiveWOneH build_frame(const nlu::ParsedQuery& query, const catalog::StudentProfile& profile,
                      const catalog::Program& program);

// Sections in order: STUDENT_QUERY, STUDENT_HISTORY, COURSE_FACT,
// PREREQ_CHAIN (omitted when empty), 5W1H FRAME; one line each.
PromptBundle render_prompt(const EvidenceBundle& evidence, const FiveWOneH& frame,
                           std::string query_id = {}, const Tokenizer& tokenizer = count_tokens);

// The bundle logged for early exits.
PromptBundle empty_prompt(std::string query_id);

// Every course rendered as COURSE_FACT entries plus every prerequisite chain:
// what an ungrounded prompt would have to carry.
std::string serialize_full_catalog(const catalog::Catalog& catalog);

// Throws std::domain_error when full_catalog_tokens is not positive.
double footprint_ratio(std::size_t prompt_tokens, std::size_t full_catalog_tokens);
std::string format_ratio(double ratio);  // two decimals

// Append-only <query_id, n_retrieved, token_count> lines, one JSON object per
// line. Thread-safe; writes through to `path` when one is given.
class FootprintLog {
 public:
  struct Entry {
    std::string query_id;
    std::size_t n_retrieved = 0;
    std::size_t token_count = 0;
  };

  FootprintLog() = default;
  explicit FootprintLog(std::filesystem::path path);

  void record(const PromptBundle& bundle);
  std::vector<Entry> entries() const;

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::vector<Entry> entries_;
};

nlohmann::json to_json(const PromptBundle& bundle);
nlohmann::json to_json(const FiveWOneH& frame);

}  // namespace advisor::prompt

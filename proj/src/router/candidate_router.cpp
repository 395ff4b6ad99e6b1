#include "advisor/router/candidate_router.h"

#include <algorithm>

#include "advisor/common/errors.h"

namespace advisor::router {

void check_filter_spec(const catalog::Catalog& catalog, const FilterSpec& spec) {
  catalog.program(spec.program_id);
  if (spec.skill_filter && spec.skill_filter->empty()) {
    throw ConfigError("skill_filter must be non-empty when present");
  }
  if (spec.max_course_credits && *spec.max_course_credits < 1) {
    throw ConfigError("max_course_credits must be positive");
  }
  for (const auto& id : spec.exclude) {
    if (!catalog.matches_course_code(id)) throw ConfigError("malformed course code in exclude: " + id);
  }
}

bool passes_filter(const catalog::Course& course, const FilterSpec& spec) {
  if (spec.exclude.count(course.id)) return false;
  if (spec.skill_filter) {
    const auto& wanted = *spec.skill_filter;
    auto has = [&](const std::string& s) { return course.skills.count(s) > 0; };
    const bool match = spec.conjunctive_skills ? std::all_of(wanted.begin(), wanted.end(), has)
                                               : std::any_of(wanted.begin(), wanted.end(), has);
    if (!match) return false;
  }
  if (spec.term_filter && !course.terms_offered.count(*spec.term_filter)) return false;
  if (spec.max_course_credits && course.credits > *spec.max_course_credits) return false;
  return true;
}

CandidateSet filter_candidates(const catalog::Catalog& catalog, const FilterSpec& spec) {
  check_filter_spec(catalog, spec);
  CandidateSet out{{}, spec};
  for (const auto& row : catalog.program_courses(spec.program_id)) {
    if (passes_filter(catalog.course(row.course_id), spec)) out.course_ids.insert(row.course_id);
  }
  return out;
}

nlohmann::json to_json(const FilterSpec& spec) {
  using nlohmann::json;
  json doc{{"program_id", spec.program_id},
           {"skill_filter", nullptr},
           {"term_filter", nullptr},
           {"max_course_credits", nullptr},
           {"exclude", std::vector<std::string>(spec.exclude.begin(), spec.exclude.end())},
           {"conjunctive_skills", spec.conjunctive_skills}};
  if (spec.skill_filter) {
    doc["skill_filter"] = std::vector<std::string>(spec.skill_filter->begin(), spec.skill_filter->end());
  }
  if (spec.term_filter) doc["term_filter"] = std::string(catalog::season_name(*spec.term_filter));
  if (spec.max_course_credits) doc["max_course_credits"] = *spec.max_course_credits;
  return doc;
}

}  // namespace advisor::router

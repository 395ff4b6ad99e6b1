#pragma once

#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "advisor/catalog/catalog.h"

namespace advisor::router {

using catalog::CourseSet;

// Each optional filter is disabled when absent, mirroring the
// `(param IS NULL OR predicate)` guard shape of the relational filter.
struct FilterSpec {
  std::string program_id;
  std::optional<std::set<std::string>> skill_filter;  // non-empty when present
  std::optional<catalog::Season> term_filter;
  std::optional<int> max_course_credits;  // per-course ceiling
  CourseSet exclude;                       // taken list
  bool conjunctive_skills = false;         // require every skill instead of any

  bool operator==(const FilterSpec&) const = default;
};

struct CandidateSet {
  CourseSet course_ids;
  FilterSpec spec;
};

// Throws UnknownProgram, or ConfigError for an empty skill filter, a
// non-positive credit ceiling or a malformed course code in `exclude`.
void check_filter_spec(const catalog::Catalog& catalog, const FilterSpec& spec);

// Program members that pass every enabled filter and are not excluded.
CandidateSet filter_candidates(const catalog::Catalog& catalog, const FilterSpec& spec);

// Single-course form of the filter predicate.
bool passes_filter(const catalog::Course& course, const FilterSpec& spec);

nlohmann::json to_json(const FilterSpec& spec);

}  // namespace advisor::router

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "advisor/catalog/catalog.h"

namespace advisor::planner {

using catalog::Catalog;
using catalog::CourseId;
using catalog::CourseSet;
using catalog::TermLabel;

enum class WeightMode {
  Direct,      // dependents inside need that require the course directly
  Transitive,  // every descendant inside need
};

struct PlannerConfig {
  int credit_cap = 15;
  std::map<catalog::Season, int> season_caps;  // overrides credit_cap per season
  std::map<TermLabel, int> term_caps;          // overrides both for one term
  int min_courses_per_term = 3;
  catalog::Calendar calendar = catalog::default_calendar();
  TermLabel start{catalog::Season::Fall, 2025};
  int max_terms = 24;
  WeightMode weight_mode = WeightMode::Direct;

  int cap_for(const TermLabel& term) const;
};

struct SemesterBlock {
  TermLabel term;
  CourseSet courses;
  int credits = 0;
  // The block holds a single course (plus its co-requisite partners) that
  // exceeds the term cap because nothing else was schedulable.
  bool overflow = false;
  // Fewer than min_courses_per_term courses; the minimum was waived.
  bool below_minimum = false;
};

struct Roadmap {
  std::vector<SemesterBlock> blocks;
  CourseSet covered;
};

struct PackResult {
  CourseSet courses;
  bool overflow = false;
};

// Number of courses in `need` that the course unlocks. Throws UnknownCourse.
int unlock_weight(const Catalog& catalog, std::string_view course, const CourseSet& need,
                  WeightMode mode = WeightMode::Direct);

// Members of `need` whose prerequisites are met by `taken`.
CourseSet eligible_set(const Catalog& catalog, const CourseSet& need, const CourseSet& taken);

// `courses` ordered by descending unlock weight, then ascending id.
std::vector<CourseId> priority_order(const Catalog& catalog, const CourseSet& courses,
                                     const CourseSet& need, WeightMode mode = WeightMode::Direct);

// Walks `elig` in priority order and keeps each course that still fits under
// `cap`. When nothing fits, returns the first course in that order with
// `overflow` set.
PackResult greedy_pack(const Catalog& catalog, const CourseSet& elig, const CourseSet& need, int cap,
                       WeightMode mode = WeightMode::Direct);

// Greedy multi-term roadmap covering every program course not in `taken`.
// Throws UnknownProgram, or InfeasiblePlan naming the unscheduled courses when
// the catalog has a prerequisite cycle, a term cap is below the smallest
// remaining credit value, no progress is possible, or max_terms is exceeded.
Roadmap plan_roadmap(const Catalog& catalog, std::string_view program, const CourseSet& taken,
                     const PlannerConfig& config);

nlohmann::json to_json(const SemesterBlock& block);
nlohmann::json to_json(const Roadmap& roadmap);
std::string serialize_roadmap(const Roadmap& roadmap);
// Plain-text timeline for terminals.
std::string render_roadmap(const Roadmap& roadmap);

}  // namespace advisor::planner

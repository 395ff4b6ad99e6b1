#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "advisor/catalog/catalog.h"
#include "advisor/router/candidate_router.h"

namespace advisor::rules {

using catalog::Catalog;
using catalog::CourseId;
using catalog::CourseSet;
using catalog::TermLabel;

// Rule family names as they appear in traces.
inline constexpr std::string_view kPrerequisite = "prerequisite";
inline constexpr std::string_view kCorequisite = "corequisite";
inline constexpr std::string_view kCreditCap = "credit-cap";
inline constexpr std::string_view kTermAvailability = "term-availability";

enum class RuleVerdict { Pass, Fail };

struct TraceEntry {
  std::string rule;
  CourseId subject;
  RuleVerdict verdict = RuleVerdict::Pass;
  std::vector<std::string> cited_facts;  // non-empty on Fail
};

struct RuleTrace {
  std::vector<TraceEntry> entries;

  bool has_failures() const;
  void append(const RuleTrace& other);
};

struct Verdict {
  bool ok = true;
  RuleTrace trace;
  CourseSet certified;
};

struct PrereqCheck {
  bool met = false;
  RuleTrace trace;
};

// A prerequisite P is met when P is taken, or when a direct Alternative of P
// is taken. Alternatives do not chain. Throws UnknownCourse.
PrereqCheck prereqs_met(const Catalog& catalog, std::string_view course, const CourseSet& taken);

// Keeps candidates whose prerequisites are met and which are offered in
// `term`. Missing co-requisite partners are annotated, not rejected.
Verdict certify_candidates(const Catalog& catalog, const router::CandidateSet& candidates,
                           const CourseSet& taken, const TermLabel& term);

// Checks a concrete term selection against all four rule families:
// prerequisites against `taken`, co-requisite partners in pick or taken,
// total pick credits against `cap`, and term availability.
// Throws UnknownCourse, or std::invalid_argument for an empty pick.
Verdict validate_selection(const Catalog& catalog, const CourseSet& pick, const CourseSet& taken,
                           int cap, const TermLabel& term);

std::vector<std::vector<CourseId>> detect_cycles(const Catalog& catalog);

std::string_view to_string(RuleVerdict v);
nlohmann::json to_json(const RuleTrace& trace);
nlohmann::json to_json(const Verdict& verdict);

}  // namespace advisor::rules

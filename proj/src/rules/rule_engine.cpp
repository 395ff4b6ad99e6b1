#include "advisor/rules/rule_engine.h"

#include <numeric>
#include <stdexcept>

#include "advisor/common/errors.h"
#include "advisor/common/text.h"

namespace advisor::rules {

namespace {

std::string offered_list(const catalog::Course& c) {
  std::vector<std::string> names;
  for (auto s : c.terms_offered) names.emplace_back(catalog::season_name(s));
  return text::join(names, ", ");
}

TraceEntry term_entry(const catalog::Course& c, const TermLabel& term) {
  const bool offered = c.terms_offered.count(term.season) > 0;
  return TraceEntry{std::string(kTermAvailability), c.id,
                    offered ? RuleVerdict::Pass : RuleVerdict::Fail,
                    {c.id + " offered in " + offered_list(c) + "; requested " + catalog::to_string(term)}};
}

}  // namespace

bool RuleTrace::has_failures() const {
  for (const auto& e : entries) {
    if (e.verdict == RuleVerdict::Fail) return true;
  }
  return false;
}

void RuleTrace::append(const RuleTrace& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

std::string_view to_string(RuleVerdict v) { return v == RuleVerdict::Pass ? "Pass" : "Fail"; }

PrereqCheck prereqs_met(const Catalog& catalog, std::string_view course, const CourseSet& taken) {
  catalog.course(course);
  const auto& prereqs = catalog.prerequisites(course);
  TraceEntry entry{std::string(kPrerequisite), std::string(course), RuleVerdict::Pass, {}};
  if (prereqs.empty()) entry.cited_facts.push_back(std::string(course) + " has no prerequisites");
  bool met = true;
  for (const auto& p : prereqs) {
    if (taken.count(p)) {
      entry.cited_facts.push_back(p + " completed");
      continue;
    }
    bool substituted = false;
    for (const auto& alt : catalog.alternatives(p)) {
      if (taken.count(alt)) {
        entry.cited_facts.push_back(p + " satisfied by alternative " + alt);
        substituted = true;
        break;
      }
    }
    if (!substituted) {
      entry.cited_facts.push_back(p + " missing");
      met = false;
    }
  }
  entry.verdict = met ? RuleVerdict::Pass : RuleVerdict::Fail;
  return PrereqCheck{met, RuleTrace{{std::move(entry)}}};
}

Verdict certify_candidates(const Catalog& catalog, const router::CandidateSet& candidates,
                           const CourseSet& taken, const TermLabel& term) {
  Verdict v;
  for (const auto& id : candidates.course_ids) {
    const auto* course = catalog.find_course(id);
    if (!course) {
      v.trace.entries.push_back({std::string(kPrerequisite), id, RuleVerdict::Fail, {id + " is not in the catalog"}});
      continue;
    }
    auto prereq = prereqs_met(catalog, id, taken);
    v.trace.append(prereq.trace);
    auto term_check = term_entry(*course, term);
    const bool offered = term_check.verdict == RuleVerdict::Pass;
    v.trace.entries.push_back(std::move(term_check));
    for (const auto& partner : catalog.corequisites(id)) {
      if (taken.count(partner)) continue;
      v.trace.entries.push_back({std::string(kCorequisite), id, RuleVerdict::Pass,
                                 {"requires co-enrollment with " + partner + " at selection time"}});
    }
    if (prereq.met && offered) v.certified.insert(id);
  }
  v.ok = !v.trace.has_failures();
  return v;
}

Verdict validate_selection(const Catalog& catalog, const CourseSet& pick, const CourseSet& taken,
                           int cap, const TermLabel& term) {
  if (pick.empty()) throw std::invalid_argument("validate_selection: pick is empty");
  for (const auto& id : pick) catalog.course(id);

  const int total = std::accumulate(pick.begin(), pick.end(), 0, [&](int acc, const CourseId& id) {
    return acc + catalog.course(id).credits;
  });
  const bool within_cap = total <= cap;

  Verdict v;
  for (const auto& id : pick) {
    const auto& course = catalog.course(id);
    bool course_ok = true;

    auto prereq = prereqs_met(catalog, id, taken);
    course_ok &= prereq.met;
    v.trace.append(prereq.trace);

    TraceEntry coreq{std::string(kCorequisite), id, RuleVerdict::Pass, {}};
    const auto& partners = catalog.corequisites(id);
    if (partners.empty()) coreq.cited_facts.push_back(id + " has no co-requisites");
    for (const auto& partner : partners) {
      if (pick.count(partner)) {
        coreq.cited_facts.push_back(partner + " in the same selection");
      } else if (taken.count(partner)) {
        coreq.cited_facts.push_back(partner + " completed");
      } else {
        coreq.cited_facts.push_back(partner + " missing from selection");
        coreq.verdict = RuleVerdict::Fail;
      }
    }
    course_ok &= coreq.verdict == RuleVerdict::Pass;
    v.trace.entries.push_back(std::move(coreq));

    v.trace.entries.push_back(
        {std::string(kCreditCap), id, within_cap ? RuleVerdict::Pass : RuleVerdict::Fail,
         {"selection totals " + std::to_string(total) + " credits against cap " + std::to_string(cap)}});
    course_ok &= within_cap;

    auto term_check = term_entry(course, term);
    course_ok &= term_check.verdict == RuleVerdict::Pass;
    v.trace.entries.push_back(std::move(term_check));

    if (course_ok) v.certified.insert(id);
  }
  v.ok = !v.trace.has_failures();
  return v;
}

std::vector<std::vector<CourseId>> detect_cycles(const Catalog& catalog) {
  return catalog::prerequisite_cycles(catalog.records());
}

nlohmann::json to_json(const RuleTrace& trace) {
  auto out = nlohmann::json::array();
  for (const auto& e : trace.entries) {
    out.push_back({{"rule", e.rule},
                   {"subject", e.subject},
                   {"verdict", std::string(to_string(e.verdict))},
                   {"cited_facts", e.cited_facts}});
  }
  return out;
}

nlohmann::json to_json(const Verdict& verdict) {
  return {{"ok", verdict.ok},
          {"certified", std::vector<std::string>(verdict.certified.begin(), verdict.certified.end())},
          {"trace", to_json(verdict.trace)}};
}

}  // namespace advisor::rules

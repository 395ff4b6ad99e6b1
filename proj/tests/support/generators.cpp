#include "generators.h"

#include <algorithm>
#include <cstdio>

namespace advisor::testkit {

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string course_code(Rng& rng, std::set<std::string>& used) {
  static const char* const kDepts[] = {"AB", "CDE", "FGHI", "JK", "LMN", "OPQR"};
  for (;;) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%s%04d", kDepts[uniform(rng, 0, 5)], uniform(rng, 1000, 4999));
    if (used.insert(buf).second) return buf;
  }
}

}  // namespace

catalog::CatalogRecords random_catalog(Rng& rng, const CatalogShape& shape) {
  using namespace catalog;
  CatalogRecords r;
  const int n = uniform(rng, shape.min_courses, shape.max_courses);
  std::set<std::string> used;
  std::vector<std::string> order;
  for (int i = 0; i < n; ++i) order.push_back(course_code(rng, used));

  for (const auto& id : order) {
    Course c;
    c.id = id;
    c.title = "Course " + id;
    c.credits = uniform(rng, shape.min_credits, shape.max_credits);
    c.level = (id[id.size() - 4] - '0') * 1000;
    c.description = "Generated course " + id;
    if (chance(rng, shape.single_season_chance)) {
      c.terms_offered = {chance(rng, 0.5) ? Season::Fall : Season::Spring};
    } else {
      c.terms_offered = {Season::Fall, Season::Spring};
    }
    for (const auto& s : shape.skills) {
      if (chance(rng, 0.3)) c.skills.insert(s);
    }
    r.courses.push_back(std::move(c));
  }

  std::vector<std::set<int>> ancestors(n);
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      if (chance(rng, shape.prereq_density)) {
        r.prereq_edges.push_back({order[j], order[i], EdgeKind::Prerequisite});
        ancestors[j].insert(i);
        ancestors[j].insert(ancestors[i].begin(), ancestors[i].end());
      }
    }
  }
  auto related = [&](int a, int b) { return ancestors[a].count(b) || ancestors[b].count(a); };

  const int coreqs = n >= 2 ? uniform(rng, 0, shape.max_coreq_pairs) : 0;
  std::set<std::pair<int, int>> paired;
  for (int k = 0, tries = 0; k < coreqs && tries < 50; ++tries) {
    int a = uniform(rng, 0, n - 1), b = uniform(rng, 0, n - 1);
    if (a == b || related(a, b)) continue;
    if (a > b) std::swap(a, b);
    if (!paired.insert({a, b}).second) continue;
    const auto& sa = r.courses[a].terms_offered;
    const auto& sb = r.courses[b].terms_offered;
    std::set<Season> common;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(common, common.begin()));
    if (common.empty()) continue;
    r.prereq_edges.push_back({order[a], order[b], EdgeKind::Corequisite});
    ++k;
  }

  const int alts = n >= 2 ? uniform(rng, 0, shape.max_alternatives) : 0;
  std::set<std::pair<int, int>> alt_pairs;
  for (int k = 0, tries = 0; k < alts && tries < 50; ++tries) {
    const int a = uniform(rng, 0, n - 1), b = uniform(rng, 0, n - 1);
    if (a == b || !alt_pairs.insert({a, b}).second) continue;
    r.prereq_edges.push_back({order[a], order[b], EdgeKind::Alternative});
    ++k;
  }

  for (int p = 0; p < shape.programs; ++p) {
    const std::string pid = "P" + std::to_string(p + 1);
    r.programs.push_back({pid, "Program " + std::to_string(p + 1), DegreeType::Major});
    // A random ancestor-closed subset, so the program is completable alone.
    std::set<int> members;
    for (int i = 0; i < n; ++i) {
      if (p == 0 || chance(rng, 0.6)) {
        members.insert(i);
        members.insert(ancestors[i].begin(), ancestors[i].end());
      }
    }
    for (int i : members) r.program_courses.push_back({pid, order[i], chance(rng, 0.8), uniform(rng, 1, 4)});
  }
  return r;
}

catalog::CourseSet random_subset(Rng& rng, const catalog::CatalogRecords& records, double p) {
  catalog::CourseSet out;
  for (const auto& c : records.courses) {
    if (chance(rng, p)) out.insert(c.id);
  }
  return out;
}

router::FilterSpec random_filter_spec(Rng& rng, const catalog::CatalogRecords& records) {
  router::FilterSpec spec;
  spec.program_id = records.programs[uniform(rng, 0, static_cast<int>(records.programs.size()) - 1)].id;
  if (chance(rng, 0.5)) {
    std::set<std::string> skills;
    for (const auto* s : {"ml", "data", "security", "web", "systems", "unused"}) {
      if (chance(rng, 0.35)) skills.insert(s);
    }
    if (skills.empty()) skills.insert("ml");
    spec.skill_filter = std::move(skills);
    spec.conjunctive_skills = chance(rng, 0.3);
  }
  if (chance(rng, 0.5)) spec.term_filter = chance(rng, 0.5) ? catalog::Season::Fall : catalog::Season::Spring;
  if (chance(rng, 0.4)) spec.max_course_credits = uniform(rng, 1, 4);
  spec.exclude = random_subset(rng, records, 0.3);
  return spec;
}

catalog::TermLabel random_term(Rng& rng) {
  return {chance(rng, 0.5) ? catalog::Season::Fall : catalog::Season::Spring, uniform(rng, 2024, 2030)};
}

}  // namespace advisor::testkit

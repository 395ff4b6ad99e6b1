#include "advisor/catalog/catalog.h"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <tuple>

#include "advisor/catalog/catalog_io.h"
#include "advisor/common/errors.h"
#include "advisor/common/text.h"

namespace advisor::catalog {

namespace {

const CourseSet kEmptySet;
const std::vector<ProgramCourse> kNoMembers;

template <typename Map>
const CourseSet& lookup_set(const Map& m, std::string_view key) {
  auto it = m.find(key);
  return it == m.end() ? kEmptySet : it->second;
}

void normalize(CatalogRecords& r) {
  std::stable_sort(r.courses.begin(), r.courses.end(),
                   [](const Course& a, const Course& b) { return a.id < b.id; });
  std::stable_sort(r.programs.begin(), r.programs.end(),
                   [](const Program& a, const Program& b) { return a.id < b.id; });
  std::stable_sort(r.program_courses.begin(), r.program_courses.end(),
                   [](const ProgramCourse& a, const ProgramCourse& b) {
                     return std::tie(a.program_id, a.course_id) < std::tie(b.program_id, b.course_id);
                   });
  std::stable_sort(r.prereq_edges.begin(), r.prereq_edges.end(),
                   [](const PrereqEdge& a, const PrereqEdge& b) {
                     return std::tie(a.course_id, a.related_id, a.kind) <
                            std::tie(b.course_id, b.related_id, b.kind);
                   });
}

std::regex compile_pattern(const std::string& pattern) {
  try {
    return std::regex(pattern, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw IntegrityError("invalid course_code_pattern '" + pattern + "': " + e.what(), {pattern});
  }
}

std::string edge_key(const PrereqEdge& e) {
  return e.course_id + "<-" + e.related_id + ":" + std::string(to_string(e.kind));
}

}  // namespace

std::string_view to_string(DegreeType t) {
  switch (t) {
    case DegreeType::Major:
      return "Major";
    case DegreeType::Minor:
      return "Minor";
    case DegreeType::Certificate:
      return "Certificate";
  }
  return "Major";
}

std::string_view to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Prerequisite:
      return "Prerequisite";
    case EdgeKind::Corequisite:
      return "Corequisite";
    case EdgeKind::Alternative:
      return "Alternative";
  }
  return "Prerequisite";
}

std::optional<DegreeType> parse_degree_type(std::string_view s) {
  if (s == "Major") return DegreeType::Major;
  if (s == "Minor") return DegreeType::Minor;
  if (s == "Certificate") return DegreeType::Certificate;
  return std::nullopt;
}

std::optional<EdgeKind> parse_edge_kind(std::string_view s) {
  if (s == "Prerequisite") return EdgeKind::Prerequisite;
  if (s == "Corequisite") return EdgeKind::Corequisite;
  if (s == "Alternative") return EdgeKind::Alternative;
  return std::nullopt;
}

Catalog Catalog::build(CatalogRecords records) {
  const auto report = validate_integrity(records);
  if (!report.ok()) {
    const auto& f = report.findings.front();
    throw IntegrityError(f.rule + ": " + f.message, f.keys);
  }
  return index_unchecked(std::move(records));
}

Catalog Catalog::index_unchecked(CatalogRecords records) {
  Catalog c;
  normalize(records);
  c.code_pattern_ = compile_pattern(records.header.course_code_pattern);
  for (const auto& course : records.courses) c.courses_.emplace(course.id, course);
  for (const auto& program : records.programs) c.programs_.emplace(program.id, program);
  for (const auto& pc : records.program_courses) {
    auto& rows = c.memberships_[pc.program_id];
    if (rows.empty() || rows.back().course_id != pc.course_id) rows.push_back(pc);
  }
  for (const auto& e : records.prereq_edges) {
    switch (e.kind) {
      case EdgeKind::Prerequisite:
        c.prereqs_[e.course_id].insert(e.related_id);
        c.dependents_[e.related_id].insert(e.course_id);
        break;
      case EdgeKind::Corequisite:
        c.coreqs_[e.course_id].insert(e.related_id);
        c.coreqs_[e.related_id].insert(e.course_id);
        break;
      case EdgeKind::Alternative:
        c.alternatives_[e.course_id].insert(e.related_id);
        break;
    }
  }
  c.records_ = std::move(records);
  return c;
}

bool Catalog::has_course(std::string_view id) const { return find_course(id) != nullptr; }

const Course* Catalog::find_course(std::string_view id) const {
  auto it = courses_.find(std::string(id));
  return it == courses_.end() ? nullptr : &it->second;
}

const Course& Catalog::course(std::string_view id) const {
  if (const auto* c = find_course(id)) return *c;
  throw UnknownCourse("unknown course '" + std::string(id) + "'");
}

bool Catalog::has_program(std::string_view id) const {
  return programs_.find(std::string(id)) != programs_.end();
}

const Program& Catalog::program(std::string_view id) const {
  auto it = programs_.find(std::string(id));
  if (it == programs_.end()) throw UnknownProgram("unknown program '" + std::string(id) + "'");
  return it->second;
}

const std::vector<ProgramCourse>& Catalog::program_courses(std::string_view program_id) const {
  program(program_id);
  auto it = memberships_.find(program_id);
  return it == memberships_.end() ? kNoMembers : it->second;
}

CourseSet Catalog::program_course_ids(std::string_view program_id) const {
  CourseSet out;
  for (const auto& row : program_courses(program_id)) out.insert(row.course_id);
  return out;
}

const ProgramCourse* Catalog::membership(std::string_view program_id,
                                         std::string_view course_id) const {
  auto it = memberships_.find(program_id);
  if (it == memberships_.end()) return nullptr;
  for (const auto& row : it->second) {
    if (row.course_id == course_id) return &row;
  }
  return nullptr;
}

const CourseSet& Catalog::prerequisites(std::string_view id) const { return lookup_set(prereqs_, id); }
const CourseSet& Catalog::dependents(std::string_view id) const { return lookup_set(dependents_, id); }
const CourseSet& Catalog::corequisites(std::string_view id) const { return lookup_set(coreqs_, id); }
const CourseSet& Catalog::alternatives(std::string_view id) const {
  return lookup_set(alternatives_, id);
}

std::set<std::string> Catalog::skill_vocabulary() const {
  std::set<std::string> out;
  for (const auto& [id, c] : courses_) out.insert(c.skills.begin(), c.skills.end());
  return out;
}

int Catalog::min_credits() const {
  int m = std::numeric_limits<int>::max();
  for (const auto& [id, c] : courses_) m = std::min(m, c.credits);
  return courses_.empty() ? 0 : m;
}

bool Catalog::matches_course_code(std::string_view code) const {
  return std::regex_match(code.begin(), code.end(), code_pattern_);
}

std::string Catalog::checksum() const { return text::hex64(text::fnv1a64(serialize_catalog(records_))); }

ValidationReport validate_integrity(const Catalog& catalog) {
  return validate_integrity(catalog.records());
}

ValidationReport validate_integrity(const CatalogRecords& records) {
  ValidationReport report;
  auto add = [&](std::string rule, std::vector<std::string> keys, std::string message) {
    report.findings.push_back({std::move(rule), std::move(keys), std::move(message)});
  };

  std::optional<std::regex> pattern;
  try {
    pattern = std::regex(records.header.course_code_pattern, std::regex::ECMAScript);
  } catch (const std::regex_error&) {
    add("bad-header", {"course_code_pattern"},
        "course_code_pattern does not compile: " + records.header.course_code_pattern);
  }
  if (records.header.calendar.empty()) add("bad-header", {"calendar"}, "calendar is empty");

  std::map<std::string, int> course_count;
  for (const auto& c : records.courses) {
    ++course_count[c.id];
    if (pattern && !std::regex_match(c.id, *pattern)) {
      add("bad-course-code", {c.id}, "course id does not match the course-code pattern");
    }
    if (c.credits < 1) add("non-positive-credits", {c.id}, "credits must be >= 1");
    if (c.terms_offered.empty()) add("empty-terms-offered", {c.id}, "terms_offered is empty");
  }
  for (const auto& [id, n] : course_count) {
    if (n > 1) add("duplicate-key", {id}, "course id appears " + std::to_string(n) + " times");
  }

  std::map<std::string, int> program_count;
  for (const auto& p : records.programs) ++program_count[p.id];
  for (const auto& [id, n] : program_count) {
    if (n > 1) add("duplicate-key", {id}, "program id appears " + std::to_string(n) + " times");
  }

  std::map<std::pair<std::string, std::string>, int> membership_count;
  for (const auto& pc : records.program_courses) {
    ++membership_count[{pc.program_id, pc.course_id}];
    if (!program_count.count(pc.program_id)) {
      add("dangling-reference", {pc.program_id}, "program_courses row references unknown program");
    }
    if (!course_count.count(pc.course_id)) {
      add("dangling-reference", {pc.course_id}, "program_courses row references unknown course");
    }
    if (pc.recommended_year < 1 || pc.recommended_year > 5) {
      add("recommended-year-range", {pc.program_id + "/" + pc.course_id},
          "recommended_year must be within 1..5");
    }
  }
  for (const auto& [key, n] : membership_count) {
    if (n > 1) {
      add("duplicate-key", {key.first + "/" + key.second},
          "(program_id, course_id) appears " + std::to_string(n) + " times");
    }
  }

  std::map<std::string, int> edge_count;
  for (const auto& e : records.prereq_edges) {
    ++edge_count[edge_key(e)];
    for (const auto* ref : {&e.course_id, &e.related_id}) {
      if (!course_count.count(*ref)) {
        add("dangling-reference", {*ref}, "edge " + edge_key(e) + " references unknown course");
      }
    }
    if (e.course_id == e.related_id) add("self-edge", {e.course_id}, "edge relates a course to itself");
  }
  for (const auto& [key, n] : edge_count) {
    if (n > 1) add("duplicate-key", {key}, "edge appears " + std::to_string(n) + " times");
  }

  for (const auto& cycle : prerequisite_cycles(records)) {
    std::vector<std::string> keys(cycle.begin(), cycle.end());
    std::sort(keys.begin(), keys.end());
    add("prerequisite-cycle", keys, "prerequisite cycle: " + text::join(cycle, " <- "));
  }
  return report;
}

std::vector<std::vector<CourseId>> prerequisite_cycles(const CatalogRecords& records) {
  // Adjacency X -> Y when Y is a prerequisite of X.
  std::map<CourseId, CourseSet> adj;
  for (const auto& e : records.prereq_edges) {
    if (e.kind != EdgeKind::Prerequisite) continue;
    adj[e.course_id].insert(e.related_id);
    adj[e.related_id];
  }

  // Tarjan's strongly connected components.
  std::map<CourseId, int> index, low;
  std::set<CourseId> on_stack;
  std::vector<CourseId> stack;
  std::vector<std::vector<CourseId>> components;
  int counter = 0;

  std::function<void(const CourseId&)> strongconnect = [&](const CourseId& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& w : adj[v]) {
      if (!index.count(w)) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<CourseId> comp;
      CourseId w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
      } while (w != v);
      const bool self_loop = adj[v].count(v) > 0;
      if (comp.size() > 1 || self_loop) components.push_back(std::move(comp));
    }
  };
  for (const auto& [v, _] : adj) {
    if (!index.count(v)) strongconnect(v);
  }

  std::vector<std::vector<CourseId>> cycles;
  for (auto& comp : components) {
    const std::set<CourseId> members(comp.begin(), comp.end());
    const CourseId start = *members.begin();
    // Shortest path start -> ... -> start inside the component.
    std::map<CourseId, CourseId> parent;
    std::deque<CourseId> queue{start};
    std::optional<CourseId> closing;
    while (!queue.empty() && !closing) {
      const auto v = queue.front();
      queue.pop_front();
      for (const auto& w : adj[v]) {
        if (!members.count(w)) continue;
        if (w == start) {
          closing = v;
          break;
        }
        if (!parent.count(w)) {
          parent[w] = v;
          queue.push_back(w);
        }
      }
    }
    std::vector<CourseId> cycle;
    for (auto v = *closing; v != start; v = parent[v]) cycle.push_back(v);
    cycle.push_back(start);
    std::reverse(cycle.begin(), cycle.end());
    cycles.push_back(std::move(cycle));
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

CourseSet prereq_closure(const Catalog& catalog, std::string_view course) {
  catalog.course(course);
  CourseSet seen;
  std::vector<CourseId> frontier(catalog.prerequisites(course).begin(),
                                 catalog.prerequisites(course).end());
  while (!frontier.empty()) {
    auto next = std::move(frontier.back());
    frontier.pop_back();
    if (next == course || !seen.insert(next).second) continue;
    for (const auto& p : catalog.prerequisites(next)) frontier.push_back(p);
  }
  return seen;
}

CourseSet direct_dependents(const Catalog& catalog, std::string_view course, const CourseSet& scope) {
  catalog.course(course);
  CourseSet out;
  for (const auto& d : catalog.dependents(course)) {
    if (scope.count(d)) out.insert(d);
  }
  return out;
}

std::optional<std::vector<CourseId>> topological_order(const Catalog& catalog) {
  std::map<CourseId, int> missing;
  for (const auto& [id, _] : catalog.courses()) missing[id] = 0;
  for (const auto& [id, _] : catalog.courses()) {
    for (const auto& p : catalog.prerequisites(id)) {
      (void)p;
      ++missing[id];
    }
  }
  std::set<CourseId> ready;
  for (const auto& [id, n] : missing) {
    if (n == 0) ready.insert(id);
  }
  std::vector<CourseId> order;
  while (!ready.empty()) {
    auto id = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(id);
    for (const auto& d : catalog.dependents(id)) {
      if (--missing[d] == 0) ready.insert(d);
    }
  }
  if (order.size() != catalog.courses().size()) return std::nullopt;
  return order;
}

void validate_student(const Catalog& catalog, const StudentProfile& student) {
  if (!catalog.has_program(student.program_id)) {
    throw IntegrityError("student " + student.id + " references unknown program " + student.program_id,
                         {student.id, student.program_id});
  }
  for (const auto& c : student.taken) {
    if (!catalog.has_course(c)) {
      throw IntegrityError("student " + student.id + " references unknown course " + c, {student.id, c});
    }
  }
}

}  // namespace advisor::catalog

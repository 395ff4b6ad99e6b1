#pragma once

#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "advisor/catalog/term.h"

namespace advisor::catalog {

using CourseId = std::string;
using CourseSet = std::set<CourseId>;

enum class DegreeType { Major, Minor, Certificate };
enum class EdgeKind { Prerequisite, Corequisite, Alternative };

std::string_view to_string(DegreeType t);
std::string_view to_string(EdgeKind k);
std::optional<DegreeType> parse_degree_type(std::string_view s);
std::optional<EdgeKind> parse_edge_kind(std::string_view s);

struct Course {
  CourseId id;
  std::string title;
  int credits = 0;
  std::string department;
  int level = 0;
  std::string description;
  std::set<Season> terms_offered;
  std::set<std::string> skills;

  bool operator==(const Course&) const = default;
};

struct Program {
  std::string id;
  std::string name;
  DegreeType degree_type = DegreeType::Major;

  bool operator==(const Program&) const = default;
};

struct ProgramCourse {
  std::string program_id;
  CourseId course_id;
  bool is_core = true;
  int recommended_year = 1;

  bool operator==(const ProgramCourse&) const = default;
};

// Prerequisite: related_id must be completed before course_id.
// Corequisite: the two courses are co-enrolled (stored directed, read symmetrically).
// Alternative: related_id may substitute course_id wherever course_id is required.
struct PrereqEdge {
  CourseId course_id;
  CourseId related_id;
  EdgeKind kind = EdgeKind::Prerequisite;

  bool operator==(const PrereqEdge&) const = default;
};

struct StudentProfile {
  std::string id;
  std::string program_id;
  CourseSet taken;
  TermLabel start_term;
  std::optional<TermLabel> last_completed_term;

  bool operator==(const StudentProfile&) const = default;
};

inline constexpr std::string_view kDefaultCourseCodePattern = "[A-Z]{2,4}[0-9]{4}";

struct CatalogHeader {
  std::string course_code_pattern{kDefaultCourseCodePattern};
  Calendar calendar = default_calendar();

  bool operator==(const CatalogHeader&) const = default;
};

// Rows exactly as they appear in a catalog document. Duplicates and dangling
// references are representable here; `Catalog` is the validated, keyed view.
struct CatalogRecords {
  CatalogHeader header;
  std::vector<Course> courses;
  std::vector<Program> programs;
  std::vector<ProgramCourse> program_courses;
  std::vector<PrereqEdge> prereq_edges;

  bool operator==(const CatalogRecords&) const = default;
};

struct Finding {
  std::string rule;               // e.g. "duplicate-key", "prerequisite-cycle"
  std::vector<std::string> keys;  // offending record keys
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;
  bool ok() const { return findings.empty(); }
};

// Immutable keyed store. Iteration over every collection is in sorted key
// order, so two catalogs built from the same records behave identically.
class Catalog {
 public:
  Catalog() = default;

  // Validates and indexes. Throws IntegrityError naming the first finding.
  static Catalog build(CatalogRecords records);

  // Indexes without enforcing invariants, for diagnostics over broken input.
  // Duplicate keys keep the first row.
  static Catalog index_unchecked(CatalogRecords records);

  const CatalogHeader& header() const { return records_.header; }
  // Records normalized to sorted key order.
  const CatalogRecords& records() const { return records_; }

  const std::map<CourseId, Course>& courses() const { return courses_; }
  const std::map<std::string, Program>& programs() const { return programs_; }

  bool has_course(std::string_view id) const;
  const Course* find_course(std::string_view id) const;
  const Course& course(std::string_view id) const;  // throws UnknownCourse
  const Program& program(std::string_view id) const;  // throws UnknownProgram
  bool has_program(std::string_view id) const;

  // Membership rows of a program, sorted by course id. Throws UnknownProgram.
  const std::vector<ProgramCourse>& program_courses(std::string_view program_id) const;
  CourseSet program_course_ids(std::string_view program_id) const;
  const ProgramCourse* membership(std::string_view program_id, std::string_view course_id) const;

  // Direct neighbourhoods; unknown ids yield an empty set.
  const CourseSet& prerequisites(std::string_view course_id) const;
  const CourseSet& dependents(std::string_view course_id) const;
  const CourseSet& corequisites(std::string_view course_id) const;  // symmetric
  const CourseSet& alternatives(std::string_view course_id) const;  // courses substituting course_id

  std::set<std::string> skill_vocabulary() const;
  int min_credits() const;

  bool matches_course_code(std::string_view code) const;

  // Content hash of the normalized records.
  std::string checksum() const;

 private:
  CatalogRecords records_;
  std::map<CourseId, Course> courses_;
  std::map<std::string, Program> programs_;
  std::map<std::string, std::vector<ProgramCourse>, std::less<>> memberships_;
  std::map<CourseId, CourseSet, std::less<>> prereqs_;
  std::map<CourseId, CourseSet, std::less<>> dependents_;
  std::map<CourseId, CourseSet, std::less<>> coreqs_;
  std::map<CourseId, CourseSet, std::less<>> alternatives_;
  std::regex code_pattern_;
};

ValidationReport validate_integrity(const CatalogRecords& records);
ValidationReport validate_integrity(const Catalog& catalog);

// Cycles of the Prerequisite subgraph, one per strongly connected component,
// each as an ordered sequence where every course requires the next and the
// last requires the first. Empty iff acyclic.
std::vector<std::vector<CourseId>> prerequisite_cycles(const CatalogRecords& records);

// Transitive prerequisites of `course`, excluding itself. Throws UnknownCourse.
CourseSet prereq_closure(const Catalog& catalog, std::string_view course);

// { d in scope | d requires `course` directly }. Throws UnknownCourse.
CourseSet direct_dependents(const Catalog& catalog, std::string_view course,
                            const CourseSet& scope);

// Kahn order of the Prerequisite subgraph (prerequisites first, ties by id).
// Returns nullopt when a cycle prevents a full ordering.
std::optional<std::vector<CourseId>> topological_order(const Catalog& catalog);

void validate_student(const Catalog& catalog, const StudentProfile& student);

}  // namespace advisor::catalog

#include "advisor/catalog/catalog_io.h"

#include <fstream>
#include <sstream>

#include "advisor/common/errors.h"

namespace advisor::catalog {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& document, const std::string& origin) {
  try {
    return json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

template <typename T>
T required(const json& obj, const char* field, const std::string& where) {
  if (!obj.is_object() || !obj.contains(field)) {
    throw ParseError(where + ": missing field '" + field + "'");
  }
  try {
    return obj.at(field).get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + ": field '" + field + "' has the wrong type");
  }
}

template <typename T>
T optional_field(const json& obj, const char* field, T fallback, const std::string& where) {
  if (!obj.contains(field) || obj.at(field).is_null()) return fallback;
  try {
    return obj.at(field).get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + ": field '" + field + "' has the wrong type");
  }
}

const json& required_array(const json& doc, const char* field) {
  if (!doc.is_object() || !doc.contains(field) || !doc.at(field).is_array()) {
    throw ParseError(std::string("catalog: top-level array '") + field + "' missing");
  }
  return doc.at(field);
}

Season season_or_throw(const std::string& s, const std::string& where) {
  auto season = parse_season(s);
  if (!season) throw ParseError(where + ": unknown season '" + s + "'");
  return *season;
}

int level_from_code(const std::string& id) {
  for (char c : id) {
    if (c >= '0' && c <= '9') return (c - '0') * 1000;
  }
  return 0;
}

json season_array(const std::set<Season>& seasons) {
  json out = json::array();
  for (auto s : seasons) out.push_back(std::string(season_name(s)));
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& path, const char* filename) {
  return std::filesystem::is_directory(path) ? path / filename : path;
}

}  // namespace

CatalogRecords parse_catalog_records(const json& doc) {
  CatalogRecords r;
  if (doc.contains("header")) {
    const auto& h = doc.at("header");
    r.header.course_code_pattern = optional_field<std::string>(
        h, "course_code_pattern", std::string(kDefaultCourseCodePattern), "header");
    if (h.contains("calendar")) {
      r.header.calendar.clear();
      for (const auto& s : h.at("calendar")) {
        r.header.calendar.push_back(season_or_throw(s.get<std::string>(), "header.calendar"));
      }
    }
  }

  for (const auto& c : required_array(doc, "courses")) {
    const std::string where = "course " + (c.is_object() ? c.value("id", std::string("?")) : "?");
    Course course;
    course.id = required<std::string>(c, "id", where);
    course.title = required<std::string>(c, "title", where);
    course.credits = required<int>(c, "credits", where);
    course.department = optional_field<std::string>(c, "department", "", where);
    course.level = optional_field<int>(c, "level", level_from_code(course.id), where);
    course.description = optional_field<std::string>(c, "description", "", where);
    if (c.contains("terms_offered")) {
      for (const auto& s : c.at("terms_offered")) {
        if (!s.is_string()) throw ParseError(where + ": terms_offered entries must be strings");
        course.terms_offered.insert(season_or_throw(s.get<std::string>(), where));
      }
    } else {
      course.terms_offered = {Season::Fall, Season::Spring};
    }
    for (const auto& s : optional_field<std::vector<std::string>>(c, "skills", {}, where)) {
      course.skills.insert(s);
    }
    r.courses.push_back(std::move(course));
  }

  for (const auto& p : required_array(doc, "programs")) {
    Program program;
    program.id = required<std::string>(p, "id", "program");
    program.name = required<std::string>(p, "name", "program " + program.id);
    const auto type = optional_field<std::string>(p, "degree_type", "Major", "program " + program.id);
    auto parsed = parse_degree_type(type);
    if (!parsed) throw ParseError("program " + program.id + ": unknown degree_type '" + type + "'");
    program.degree_type = *parsed;
    r.programs.push_back(std::move(program));
  }

  for (const auto& pc : required_array(doc, "program_courses")) {
    ProgramCourse row;
    row.program_id = required<std::string>(pc, "program_id", "program_courses");
    row.course_id = required<std::string>(pc, "course_id", "program_courses");
    row.is_core = optional_field<bool>(pc, "is_core", true, "program_courses");
    row.recommended_year = optional_field<int>(pc, "recommended_year", 1, "program_courses");
    r.program_courses.push_back(std::move(row));
  }

  for (const auto& e : required_array(doc, "prereq_edges")) {
    PrereqEdge edge;
    edge.course_id = required<std::string>(e, "course_id", "prereq_edges");
    edge.related_id = required<std::string>(e, "related_id", "prereq_edges");
    const auto kind = optional_field<std::string>(e, "kind", "Prerequisite", "prereq_edges");
    auto parsed = parse_edge_kind(kind);
    if (!parsed) throw ParseError("prereq_edges: unknown kind '" + kind + "'");
    edge.kind = *parsed;
    r.prereq_edges.push_back(std::move(edge));
  }
  return r;
}

CatalogRecords parse_catalog_records(const std::string& document) {
  return parse_catalog_records(parse_json(document, "catalog"));
}

CatalogRecords load_catalog_records(const std::filesystem::path& path) {
  const auto file = resolve(path, "catalog.json");
  return parse_catalog_records(parse_json(read_file(file), file.string()));
}

Catalog load_catalog(const std::filesystem::path& path) {
  return Catalog::build(load_catalog_records(path));
}

json to_json(const Course& c) {
  json skills = json::array();
  for (const auto& s : c.skills) skills.push_back(s);
  return json{{"id", c.id},
              {"title", c.title},
              {"credits", c.credits},
              {"department", c.department},
              {"level", c.level},
              {"description", c.description},
              {"terms_offered", season_array(c.terms_offered)},
              {"skills", skills}};
}

json to_json(const Program& p) {
  return json{{"id", p.id}, {"name", p.name}, {"degree_type", std::string(to_string(p.degree_type))}};
}

json to_json(const CatalogRecords& r) {
  json calendar = json::array();
  for (auto s : r.header.calendar) calendar.push_back(std::string(season_name(s)));
  json doc;
  doc["header"] = {{"course_code_pattern", r.header.course_code_pattern}, {"calendar", calendar}};
  doc["courses"] = json::array();
  for (const auto& c : r.courses) doc["courses"].push_back(to_json(c));
  doc["programs"] = json::array();
  for (const auto& p : r.programs) doc["programs"].push_back(to_json(p));
  doc["program_courses"] = json::array();
  for (const auto& pc : r.program_courses) {
    doc["program_courses"].push_back({{"program_id", pc.program_id},
                                      {"course_id", pc.course_id},
                                      {"is_core", pc.is_core},
                                      {"recommended_year", pc.recommended_year}});
  }
  doc["prereq_edges"] = json::array();
  for (const auto& e : r.prereq_edges) {
    doc["prereq_edges"].push_back(
        {{"course_id", e.course_id}, {"related_id", e.related_id}, {"kind", std::string(to_string(e.kind))}});
  }
  return doc;
}

std::string serialize_catalog(const CatalogRecords& records) { return to_json(records).dump(2) + "\n"; }

json to_json(const StudentProfile& s) {
  json doc{{"id", s.id},
           {"program_id", s.program_id},
           {"taken", json(std::vector<std::string>(s.taken.begin(), s.taken.end()))},
           {"start_term", to_string(s.start_term)}};
  if (s.last_completed_term) doc["last_completed_term"] = to_string(*s.last_completed_term);
  return doc;
}

StudentDirectory parse_students(const json& doc, const Catalog& catalog) {
  if (!doc.is_object() || !doc.contains("students") || !doc.at("students").is_array()) {
    throw ParseError("students: top-level array 'students' missing");
  }
  StudentDirectory out;
  for (const auto& s : doc.at("students")) {
    StudentProfile p;
    p.id = required<std::string>(s, "id", "student");
    const std::string where = "student " + p.id;
    p.program_id = required<std::string>(s, "program_id", where);
    for (const auto& c : optional_field<std::vector<std::string>>(s, "taken", {}, where)) p.taken.insert(c);
    p.start_term = parse_term(required<std::string>(s, "start_term", where));
    if (s.contains("last_completed_term")) {
      p.last_completed_term = parse_term(required<std::string>(s, "last_completed_term", where));
    }
    validate_student(catalog, p);
    if (!out.emplace(p.id, p).second) {
      throw IntegrityError("duplicate student id " + p.id, {p.id});
    }
  }
  return out;
}

StudentDirectory load_students(const std::filesystem::path& path, const Catalog& catalog) {
  std::filesystem::path file = path;
  if (std::filesystem::is_directory(path)) {
    file = path / "students.json";
  } else if (path.filename() != "students.json" && std::filesystem::exists(path.parent_path() / "students.json")) {
    file = path.parent_path() / "students.json";
  }
  return parse_students(parse_json(read_file(file), file.string()), catalog);
}

}  // namespace advisor::catalog

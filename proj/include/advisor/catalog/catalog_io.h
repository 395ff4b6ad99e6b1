#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "advisor/catalog/catalog.h"

namespace advisor::catalog {

// Catalog documents are JSON with top-level arrays `courses`, `programs`,
// `program_courses` and `prereq_edges`, plus an optional `header` object
// ({"course_code_pattern": ..., "calendar": [...]}). `path` may name the
// document itself or a directory holding `catalog.json`.
//
// Throws ParseError on malformed input and IntegrityError when the parsed
// records violate a catalog invariant.
Catalog load_catalog(const std::filesystem::path& path);

// Parses without validating; feeds `catalog validate`.
CatalogRecords load_catalog_records(const std::filesystem::path& path);
CatalogRecords parse_catalog_records(const nlohmann::json& doc);
CatalogRecords parse_catalog_records(const std::string& document);

nlohmann::json to_json(const CatalogRecords& records);
// Canonical pretty-printed document; load(serialize(c)) == c.
std::string serialize_catalog(const CatalogRecords& records);

using StudentDirectory = std::map<std::string, StudentProfile>;

// Sibling document `students.json` with array `students`. `path` may be the
// document, a directory containing it, or the catalog document next to it.
// Every profile is checked against `catalog`.
StudentDirectory load_students(const std::filesystem::path& path, const Catalog& catalog);
StudentDirectory parse_students(const nlohmann::json& doc, const Catalog& catalog);

nlohmann::json to_json(const StudentProfile& s);
nlohmann::json to_json(const Course& c);
nlohmann::json to_json(const Program& p);

}  // namespace advisor::catalog

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "advisor/catalog/catalog.h"
#include "advisor/nlu/nlu.h"

namespace advisor::eval {

struct BenchmarkQuery {
  std::string id;
  nlu::AdvisingIntent category = nlu::AdvisingIntent::ShortTerm;
  std::string persona;
  std::string student_id;
  std::string text;
  catalog::CourseSet expected_courses;
  std::string expert_answer;
};

using Suite = std::vector<BenchmarkQuery>;

// Document shape: {"queries": [{id, category, persona, student_id, text,
// expected_courses, expert_answer}, ...]}. Throws ParseError.
Suite parse_suite(const nlohmann::json& doc);
Suite load_suite(const std::filesystem::path& path);

nlohmann::json to_json(const BenchmarkQuery& q);
nlohmann::json to_json(const Suite& suite);

}  // namespace advisor::eval

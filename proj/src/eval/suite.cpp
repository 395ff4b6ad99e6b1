#include "advisor/eval/suite.h"

#include <fstream>

#include "advisor/common/errors.h"

namespace advisor::eval {

using nlohmann::json;

Suite parse_suite(const json& doc) {
  if (!doc.is_object() || !doc.contains("queries") || !doc["queries"].is_array()) {
    throw ParseError("suite document needs a `queries` array");
  }
  Suite suite;
  for (const auto& q : doc["queries"]) {
    BenchmarkQuery b;
    try {
      b.id = q.at("id").get<std::string>();
      const auto cat = q.at("category").get<std::string>();
      const auto intent = nlu::parse_intent(cat);
      if (!intent) throw ParseError("query " + b.id + ": unknown category `" + cat + "`");
      b.category = *intent;
      b.persona = q.value("persona", "");
      b.student_id = q.at("student_id").get<std::string>();
      b.text = q.at("text").get<std::string>();
      for (const auto& c : q.value("expected_courses", json::array())) b.expected_courses.insert(c.get<std::string>());
      b.expert_answer = q.at("expert_answer").get<std::string>();
    } catch (const json::exception& e) {
      throw ParseError("suite query " + (b.id.empty() ? std::string("?") : b.id) + ": " + e.what());
    }
    suite.push_back(std::move(b));
  }
  return suite;
}

Suite load_suite(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open suite " + path.string());
  try {
    return parse_suite(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

json to_json(const BenchmarkQuery& q) {
  return {{"id", q.id},
          {"category", nlu::to_string(q.category)},
          {"persona", q.persona},
          {"student_id", q.student_id},
          {"text", q.text},
          {"expected_courses", q.expected_courses},
          {"expert_answer", q.expert_answer}};
}

json to_json(const Suite& suite) {
  json qs = json::array();
  for (const auto& q : suite) qs.push_back(to_json(q));
  return {{"queries", qs}};
}

}  // namespace advisor::eval

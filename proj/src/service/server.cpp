#include "advisor/service/server.h"

#include <httplib.h>

#include "advisor/common/errors.h"
#include "advisor/common/text.h"

namespace advisor::service {

using nlohmann::json;

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void error_reply(httplib::Response& res, int status, const std::string& kind, const std::string& message,
                 json extra = json::object()) {
  json err = {{"kind", kind}, {"message", message}};
  err.update(extra);
  reply(res, status, {{"error", err}});
}

// Field validation failure surfaced as 400 with the field name.
struct BadField {
  std::string field;
  std::string message;
};

json parse_body(const httplib::Request& req) {
  try {
    auto j = json::parse(req.body);
    if (!j.is_object()) throw BadField{"", "payload must be a JSON object"};
    return j;
  } catch (const json::parse_error&) {
    throw BadField{"", "payload is not valid JSON"};
  }
}

std::string required_string(const json& j, const char* field) {
  if (!j.contains(field)) throw BadField{field, std::string("missing field `") + field + "`"};
  if (!j[field].is_string()) throw BadField{field, std::string("field `") + field + "` must be a string"};
  auto s = j[field].get<std::string>();
  if (text::trim(s).empty()) throw BadField{field, std::string("field `") + field + "` must not be blank"};
  return s;
}

std::optional<std::string> optional_string(const json& j, const char* field) {
  if (!j.contains(field) || j[field].is_null()) return std::nullopt;
  if (!j[field].is_string()) throw BadField{field, std::string("field `") + field + "` must be a string"};
  return j[field].get<std::string>();
}

std::optional<int> optional_int(const json& j, const char* field) {
  if (!j.contains(field) || j[field].is_null()) return std::nullopt;
  if (!j[field].is_number_integer()) throw BadField{field, std::string("field `") + field + "` must be an integer"};
  return j[field].get<int>();
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const BadField& b) {
    json extra = json::object();
    if (!b.field.empty()) extra["field"] = b.field;
    error_reply(res, 400, "ValidationError", b.message, extra);
  } catch (const UnknownStudent& e) {
    error_reply(res, 404, e.kind(), e.what());
  } catch (const UnknownProgram& e) {
    error_reply(res, 404, e.kind(), e.what());
  } catch (const UnknownCourse& e) {
    error_reply(res, 404, e.kind(), e.what());
  } catch (const InfeasiblePlan& e) {
    error_reply(res, 422, e.kind(), e.what(), {{"stuck", e.stuck()}});
  } catch (const PipelineError& e) {
    error_reply(res, 500, e.kind(), e.what(), {{"stage", e.stage()}, {"provenance_ref", e.provenance_ref()}});
  } catch (const ConfigError& e) {
    error_reply(res, 400, "ValidationError", e.what());
  } catch (const ParseError& e) {
    error_reply(res, 400, "ValidationError", e.what());
  } catch (const Error& e) {
    error_reply(res, 500, e.kind(), e.what());
  } catch (const std::exception& e) {
    error_reply(res, 500, "InternalError", e.what());
  }
}

}  // namespace

AdvisorServer::AdvisorServer(Advisor& advisor) : advisor_(advisor), server_(std::make_unique<httplib::Server>()) {
  auto& srv = *server_;

  srv.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
    reply(res, 200,
          {{"status", "ok"},
           {"catalog_checksum", advisor_.catalog().checksum()},
           {"courses", advisor_.catalog().courses().size()},
           {"programs", advisor_.catalog().programs().size()},
           {"backend", advisor_.backend().identity()},
           {"api_version", "v1"}});
  });

  srv.Post("/v1/advise", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = parse_body(req);
      const auto query = required_string(body, "query");
      const auto student = required_string(body, "student_id");
      const auto query_id = optional_string(body, "query_id").value_or("");
      reply(res, 200, to_json(advisor_.advise(query, student, query_id)));
    });
  });

  srv.Get(R"(/v1/provenance/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string ref = req.matches[1];
    if (auto rec = advisor_.provenance().get(ref)) {
      reply(res, 200, {{"ref", ref}, {"record", *rec}});
    } else {
      error_reply(res, 404, "NotFound", "no provenance record `" + ref + "`");
    }
  });

  srv.Get("/v1/courses", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      json out = json::array();
      if (req.has_param("program")) {
        for (const auto& id : advisor_.catalog().program_course_ids(req.get_param_value("program"))) {
          out.push_back(catalog::to_json(advisor_.catalog().course(id)));
        }
      } else {
        for (const auto& [_, c] : advisor_.catalog().courses()) out.push_back(catalog::to_json(c));
      }
      reply(res, 200, {{"courses", out}});
    });
  });

  srv.Get("/v1/programs", [this](const httplib::Request&, httplib::Response& res) {
    json out = json::array();
    for (const auto& [_, p] : advisor_.catalog().programs()) out.push_back(catalog::to_json(p));
    reply(res, 200, {{"programs", out}});
  });

  srv.Post("/v1/plan", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = parse_body(req);
      PlanRequest pr;
      pr.student_id = optional_string(body, "student_id");
      pr.program_id = optional_string(body, "program_id");
      if (!pr.student_id && !pr.program_id) throw BadField{"program_id", "need `student_id` or `program_id`"};
      if (body.contains("taken") && !body["taken"].is_null()) {
        if (!body["taken"].is_array()) throw BadField{"taken", "field `taken` must be an array of course ids"};
        catalog::CourseSet taken;
        for (const auto& c : body["taken"]) {
          if (!c.is_string()) throw BadField{"taken", "field `taken` must be an array of course ids"};
          taken.insert(c.get<std::string>());
        }
        pr.taken = std::move(taken);
      }
      pr.credit_cap = optional_int(body, "credit_cap");
      pr.min_courses_per_term = optional_int(body, "min_courses_per_term");
      if (auto s = optional_string(body, "start_term")) {
        try {
          pr.start = catalog::parse_term(*s);
        } catch (const ParseError& e) {
          throw BadField{"start_term", e.what()};
        }
      }
      reply(res, 200, planner::to_json(advisor_.plan(pr)));
    });
  });
}

AdvisorServer::~AdvisorServer() = default;

bool AdvisorServer::listen(const std::string& host, int port) { return server_->listen(host, port); }

int AdvisorServer::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool AdvisorServer::listen_after_bind() { return server_->listen_after_bind(); }

void AdvisorServer::stop() { server_->stop(); }

bool AdvisorServer::is_running() const { return server_->is_running(); }

}  // namespace advisor::service

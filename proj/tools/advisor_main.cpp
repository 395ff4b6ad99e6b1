#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "advisor/catalog/catalog_io.h"
#include "advisor/common/errors.h"
#include "advisor/eval/bench.h"
#include "advisor/service/advisor.h"
#include "advisor/service/server.h"

namespace {

using namespace advisor;
using nlohmann::json;

struct Common {
  std::string config_path;
  std::string catalog_path;
  std::string backend;
  bool json_out = false;
};

service::ServiceConfig make_config(const Common& c) {
  auto cfg = c.config_path.empty() ? service::ServiceConfig{} : service::load_config(c.config_path);
  service::apply_env_overrides(cfg);
  if (!c.catalog_path.empty()) cfg.catalog_path = c.catalog_path;
  if (!c.backend.empty()) cfg.backend = c.backend;
  return cfg;
}

void print_error(const std::exception& e, bool as_json) {
  const auto* err = dynamic_cast<const Error*>(&e);
  const std::string kind = err ? err->kind() : "Error";
  if (as_json) {
    json j = {{"error", {{"kind", kind}, {"message", e.what()}}}};
    if (const auto* p = dynamic_cast<const PipelineError*>(&e)) {
      j["error"]["stage"] = p->stage();
      j["error"]["provenance_ref"] = p->provenance_ref();
    }
    if (const auto* i = dynamic_cast<const InfeasiblePlan*>(&e)) j["error"]["stuck"] = i->stuck();
    if (const auto* g = dynamic_cast<const IntegrityError*>(&e)) j["error"]["keys"] = g->keys();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cerr << kind << ": " << e.what() << "\n";
    if (const auto* i = dynamic_cast<const InfeasiblePlan*>(&e); i && !i->stuck().empty()) {
      std::cerr << "unscheduled: ";
      for (std::size_t k = 0; k < i->stuck().size(); ++k) std::cerr << (k ? ", " : "") << i->stuck()[k];
      std::cerr << "\n";
    }
  }
}

int cmd_catalog_validate(const std::string& path, bool as_json) {
  const auto records = catalog::load_catalog_records(path);
  const auto report = catalog::validate_integrity(records);
  if (as_json) {
    json findings = json::array();
    for (const auto& f : report.findings) findings.push_back({{"rule", f.rule}, {"keys", f.keys}, {"message", f.message}});
    std::cout << json{{"ok", report.ok()}, {"findings", findings}}.dump(2) << "\n";
  } else if (report.ok()) {
    std::cout << "catalog ok: " << records.courses.size() << " courses, " << records.programs.size() << " programs\n";
  } else {
    for (const auto& f : report.findings) std::cout << f.rule << ": " << f.message << "\n";
  }
  return report.ok() ? 0 : 1;
}

int cmd_advise(const Common& c, const std::string& student, const std::string& query) {
  auto advisor = service::Advisor::from_config(make_config(c));
  const auto r = advisor->advise(query, student);
  if (c.json_out) {
    std::cout << service::to_json(r).dump(2) << "\n";
    return 0;
  }
  std::cout << "intent: " << nlu::to_string(r.intent) << "\n";
  if (r.fallback) {
    std::cout << "fallback: " << r.response << "\n";
  } else {
    std::cout << r.response << "\n";
    if (r.plan) std::cout << "\n" << planner::render_roadmap(*r.plan);
  }
  std::cout << "provenance: " << r.provenance_ref << "\n";
  return 0;
}

int cmd_plan(const Common& c, const service::PlanRequest& req) {
  auto advisor = service::Advisor::from_config(make_config(c));
  const auto roadmap = advisor->plan(req);
  if (c.json_out) {
    std::cout << planner::to_json(roadmap).dump(2) << "\n";
  } else {
    std::cout << planner::render_roadmap(roadmap);
  }
  return 0;
}

struct BenchArgs {
  std::string suite;
  std::string mode = "grounded";
  int runs = 5;
  int parallelism = 1;
  bool timing = false;
  std::string out;
};

int cmd_bench(const Common& c, const BenchArgs& b) {
  auto cfg = make_config(c);
  auto advisor = service::Advisor::from_config(cfg);
  const auto suite = eval::load_suite(b.suite);
  eval::TermFrequencyProvider embedder;
  eval::BenchConfig bc;
  bc.runs = b.runs;
  bc.parallelism = b.parallelism;
  for (const auto& [id, _] : advisor->catalog().courses()) bc.known_ids.insert(id);

  eval::MetricsSummary summary;
  if (b.mode == "grounded") {
    service::GroundedPipeline pipeline(*advisor);
    summary = eval::run_benchmark(suite, pipeline, embedder, bc);
  } else {
    // The offline stand-in for an ungrounded model is the degraded stub.
    std::unique_ptr<llm::GeneratorBackend> backend;
    if (cfg.backend == "stub") {
      backend = std::make_unique<llm::DegradedStubBackend>();
    } else {
      backend = service::make_backend(cfg);
    }
    service::BaselinePipeline pipeline(*advisor, *backend);
    summary = eval::run_benchmark(suite, pipeline, embedder, bc);
  }

  const auto text = c.json_out ? eval::report_json(summary, b.timing).dump(2) + "\n"
                               : eval::render_table(summary, b.timing);
  if (b.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(b.out);
    if (!out) throw ConfigError("cannot write " + b.out);
    out << text;
  }
  return 0;
}

service::AdvisorServer* g_server = nullptr;

int cmd_serve(const Common& c, int port) {
  auto cfg = make_config(c);
  if (port > 0) cfg.port = port;
  auto advisor = service::Advisor::from_config(cfg);
  service::AdvisorServer server(*advisor);
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  std::cerr << "listening on " << cfg.host << ":" << cfg.port << " (catalog " << advisor->catalog().checksum()
            << ")\n";
  const bool ok = server.listen(cfg.host, cfg.port);
  g_server = nullptr;
  if (!ok && !c.json_out) std::cerr << "could not listen on " << cfg.host << ":" << cfg.port << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Course advising pipeline: catalog checks, grounded advice, roadmaps and benchmarks"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_flag("--json", common.json_out, "Machine-readable output");
  app.add_option("--config", common.config_path, "Service config file")->check(CLI::ExistingFile);

  auto* catalog_cmd = app.add_subcommand("catalog", "Catalog utilities");
  catalog_cmd->require_subcommand(1);
  catalog_cmd->fallthrough();
  auto* validate = catalog_cmd->add_subcommand("validate", "Check catalog integrity");
  std::string validate_path;
  validate->add_option("path", validate_path, "Catalog document or directory")->required();

  auto* advise = app.add_subcommand("advise", "Answer one advising query");
  std::string student, query;
  advise->add_option("--student", student, "Student id")->required();
  advise->add_option("--query", query, "Query text")->required();
  advise->add_option("--catalog", common.catalog_path, "Catalog document or directory");
  advise->add_option("--backend", common.backend, "Generator backend")
      ->check(CLI::IsMember({"stub", "degraded-stub", "remote"}));

  auto* plan = app.add_subcommand("plan", "Build a multi-term roadmap");
  std::string plan_student, plan_program, plan_start;
  int plan_cap = 0, plan_min = -1;
  plan->add_option("--student", plan_student, "Student id");
  plan->add_option("--program", plan_program, "Program id");
  plan->add_option("--cap", plan_cap, "Credit cap per term")->check(CLI::PositiveNumber);
  plan->add_option("--min-courses", plan_min, "Per-term course minimum")->check(CLI::PositiveNumber);
  plan->add_option("--start", plan_start, "First term, e.g. Fall-2025");
  plan->add_option("--catalog", common.catalog_path, "Catalog document or directory");

  auto* bench = app.add_subcommand("bench", "Benchmark harness");
  bench->require_subcommand(1);
  bench->fallthrough();
  auto* bench_run = bench->add_subcommand("run", "Run a query suite");
  BenchArgs bargs;
  bench_run->add_option("--suite", bargs.suite, "Suite file")->required()->check(CLI::ExistingFile);
  bench_run->add_option("--backend", common.backend, "Generator backend")->check(CLI::IsMember({"stub", "remote"}));
  bench_run->add_option("--mode", bargs.mode, "grounded or baseline")->check(CLI::IsMember({"grounded", "baseline"}));
  bench_run->add_option("--runs", bargs.runs, "Runs per query")->check(CLI::PositiveNumber);
  bench_run->add_option("--parallel", bargs.parallelism, "Concurrent queries")->check(CLI::PositiveNumber);
  bench_run->add_flag("--timing", bargs.timing, "Include wall-clock timing in the report");
  bench_run->add_option("--out", bargs.out, "Write the report here instead of stdout");
  bench_run->add_option("--catalog", common.catalog_path, "Catalog document or directory");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  int serve_port = 0;
  serve->add_option("--port", serve_port, "Listen port")->check(CLI::Range(1, 65535));
  serve->add_option("--catalog", common.catalog_path, "Catalog document or directory");
  serve->add_option("--backend", common.backend, "Generator backend")
      ->check(CLI::IsMember({"stub", "degraded-stub", "remote"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) return cmd_catalog_validate(validate_path, common.json_out);
    if (*advise) return cmd_advise(common, student, query);
    if (*plan) {
      if (plan_student.empty() && plan_program.empty()) {
        std::cerr << "plan: need --student or --program\n";
        return 2;
      }
      service::PlanRequest req;
      if (!plan_student.empty()) req.student_id = plan_student;
      if (!plan_program.empty()) req.program_id = plan_program;
      if (plan_cap > 0) req.credit_cap = plan_cap;
      if (plan_min > 0) req.min_courses_per_term = plan_min;
      if (!plan_start.empty()) {
        try {
          req.start = catalog::parse_term(plan_start);
        } catch (const ParseError& e) {
          std::cerr << "plan: " << e.what() << "\n";
          return 2;
        }
      }
      return cmd_plan(common, req);
    }
    if (*bench_run) return cmd_bench(common, bargs);
    if (*serve) return cmd_serve(common, serve_port);
  } catch (const std::exception& e) {
    print_error(e, common.json_out);
    return 1;
  }
  return 2;
}

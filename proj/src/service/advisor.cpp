#include "advisor/service/advisor.h"

#include "advisor/common/errors.h"
#include "advisor/common/text.h"
#include "advisor/eval/metrics.h"
#include "advisor/router/candidate_router.h"
#include "advisor/rules/rule_engine.h"

namespace advisor::service {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

catalog::CourseSet remaining(const catalog::Catalog& catalog, const std::string& program, const catalog::CourseSet& taken) {
  catalog::CourseSet need;
  for (const auto& c : catalog.program_course_ids(program)) {
    if (!taken.count(c)) need.insert(c);
  }
  return need;
}

}  // namespace

json to_json(const AdvisingResponse& r) {
  json j = {{"query_id", r.query_id},
            {"intent", nlu::to_string(r.intent)},
            {"think", r.think},
            {"response", r.response},
            {"fallback", r.fallback},
            {"certified", r.certified},
            {"provenance_ref", r.provenance_ref},
            {"prompt_tokens", r.prompt_tokens},
            {"n_retrieved", r.n_retrieved},
            {"stage_latencies", r.stage_latencies}};
  j["plan"] = r.plan ? planner::to_json(*r.plan) : json(nullptr);
  return j;
}

Advisor::Advisor(catalog::Catalog catalog, catalog::StudentDirectory students, ServiceConfig config,
                 std::unique_ptr<llm::GeneratorBackend> backend, std::shared_ptr<ProvenanceStore> provenance)
    : catalog_(std::move(catalog)),
      students_(std::move(students)),
      config_(std::move(config)),
      lexicon_(config_.lexicon_path.empty() ? nlu::default_lexicon() : nlu::load_lexicon(config_.lexicon_path)),
      skills_(config_.skills_path.empty() ? nlu::default_skill_table() : nlu::load_skill_table(config_.skills_path)),
      backend_(std::move(backend)),
      provenance_(provenance ? std::move(provenance) : std::make_shared<ProvenanceStore>()),
      footprint_(config_.footprint_log_path),
      code_pattern_(catalog_.header().course_code_pattern) {
  if (!backend_) throw ConfigError("advisor needs a generator backend");
}

std::unique_ptr<Advisor> Advisor::from_config(const ServiceConfig& config) {
  auto catalog = catalog::load_catalog(config.catalog_path);
  auto students = catalog::load_students(config.students_path.empty() ? config.catalog_path : config.students_path,
                                         catalog);
  auto store = config.provenance_path.empty() ? std::make_shared<ProvenanceStore>()
                                              : std::make_shared<ProvenanceStore>(config.provenance_path);
  return std::make_unique<Advisor>(std::move(catalog), std::move(students), config, make_backend(config),
                                   std::move(store));
}

const catalog::StudentProfile& Advisor::student(std::string_view id) const {
  auto it = students_.find(std::string(id));
  if (it == students_.end()) throw UnknownStudent("unknown student `" + std::string(id) + "`");
  return it->second;
}

catalog::TermLabel Advisor::reference_term(const catalog::StudentProfile& s) const {
  if (config_.current_term) return *config_.current_term;
  if (s.last_completed_term) return catalog::successor(*s.last_completed_term, catalog_.header().calendar);
  return s.start_term;
}

AdvisingResponse Advisor::advise(std::string_view query_text, std::string_view student_id, std::string query_id) {
  const auto& profile = student(student_id);
  const auto t_start = Clock::now();

  ProvenanceRecord rec;
  rec.query_id = query_id.empty() ? text::hex64(text::fnv1a64(std::string(student_id) + "\n" + std::string(query_text)))
                                  : query_id;
  rec.timestamp = utc_timestamp();
  rec.student_id = profile.id;
  rec.query_text = std::string(query_text);

  AdvisingResponse out;
  out.query_id = rec.query_id;
  std::string stage = "nlu";
  double generation_s = 0.0;

  auto finish = [&] {
    out.engine_seconds = seconds_since(t_start) - generation_s;
    rec.stage_latencies["engine"] = out.engine_seconds;
    out.stage_latencies = rec.stage_latencies;
    out.generation_seconds = generation_s;
    out.provenance_ref = provenance_->append(rec);
    return out;
  };
  auto fallback = [&](const std::string& reason) {
    out.fallback = true;
    out.think.clear();
    out.response = std::string(llm::kFallbackToken);
    out.certified.clear();
    out.plan.reset();
    const auto empty = prompt::empty_prompt(rec.query_id);
    footprint_.record(empty);
    rec.prompt = prompt::to_json(empty);
    rec.plan.reset();
    rec.grounding = json{{"early_exit", reason}};
    return finish();
  };

  try {
    auto t = Clock::now();
    const auto reference = reference_term(profile);
    const auto query = nlu::parse_query(query_text, catalog_, reference, lexicon_, skills_);
    out.intent = query.intent;
    rec.parsed_query = nlu::to_json(query);
    rec.stage_latencies["nlu"] = seconds_since(t);
    if (query.intent == nlu::AdvisingIntent::OutOfScope) return fallback("out-of-scope");

    stage = "router";
    t = Clock::now();
    std::string program_id = profile.program_id;
    if (query.entities.program_hint) {
      if (auto p = nlu::resolve_program(catalog_, *query.entities.program_hint)) program_id = *p;
    }
    const auto term = query.entities.term.value_or(reference);
    router::FilterSpec spec;
    spec.program_id = program_id;
    if (query.intent != nlu::AdvisingIntent::LongTerm && !query.entities.skill_targets.empty()) {
      spec.skill_filter = std::set<std::string>(query.entities.skill_targets.begin(), query.entities.skill_targets.end());
    }
    if (query.entities.term) spec.term_filter = query.entities.term->season;
    spec.exclude = profile.taken;
    const auto candidates = router::filter_candidates(catalog_, spec);
    rec.filter_spec = router::to_json(spec);
    rec.stage_latencies["router"] = seconds_since(t);

    stage = "rules";
    t = Clock::now();
    auto verdict = rules::certify_candidates(catalog_, candidates, profile.taken, term);
    rules::RuleTrace trace = verdict.trace;
    const int cap = query.entities.credit_cap.value_or(config_.default_credit_cap);
    const auto need = remaining(catalog_, program_id, profile.taken);
    catalog::CourseSet evidence_ids;
    if (query.intent != nlu::AdvisingIntent::LongTerm && !verdict.certified.empty()) {
      const auto pack = planner::greedy_pack(catalog_, verdict.certified, need, cap);
      const auto checked = rules::validate_selection(catalog_, pack.courses, profile.taken, cap, term);
      trace.append(checked.trace);
      evidence_ids = checked.certified;
    }
    rec.rule_trace = rules::to_json(trace);
    rec.stage_latencies["rules"] = seconds_since(t);

    if (query.intent == nlu::AdvisingIntent::LongTerm) {
      stage = "planner";
      t = Clock::now();
      auto pc = planner_config(config_);
      pc.credit_cap = cap;
      pc.calendar = catalog_.header().calendar;
      pc.start = term;
      auto roadmap = planner::plan_roadmap(catalog_, program_id, profile.taken, pc);
      auto done = profile.taken;
      for (const auto& block : roadmap.blocks) {
        if (!block.overflow) {
          trace.append(rules::validate_selection(catalog_, block.courses, done, pc.cap_for(block.term), block.term).trace);
        }
        done.insert(block.courses.begin(), block.courses.end());
      }
      rec.rule_trace = rules::to_json(trace);
      rec.plan = planner::to_json(roadmap);
      evidence_ids = roadmap.covered;
      out.plan = std::move(roadmap);
      rec.stage_latencies["planner"] = seconds_since(t);
    }

    stage = "prompt";
    t = Clock::now();
    if (evidence_ids.empty()) return fallback("empty-evidence");
    const auto evidence = prompt::build_evidence(evidence_ids, catalog_, profile, query);
    const auto frame = prompt::build_frame(query, profile, catalog_.program(program_id));
    const auto bundle = prompt::render_prompt(evidence, frame, rec.query_id);
    footprint_.record(bundle);
    rec.prompt = prompt::to_json(bundle);
    out.prompt_tokens = bundle.token_count;
    out.n_retrieved = bundle.n_retrieved;
    out.certified = evidence_ids;
    rec.stage_latencies["prompt"] = seconds_since(t);

    stage = "generation";
    const auto request = llm::make_request(bundle.body, config_.decoding,
                                           std::chrono::milliseconds(config_.generation_timeout_ms));
    const auto result = llm::generate(request, *backend_);
    generation_s = result.latency.count();
    rec.stage_latencies["generation"] = generation_s;
    rec.generation = json{{"backend", backend_->identity()},
                          {"directive_version", llm::kDirectiveVersion},
                          {"decoding", llm::to_json(config_.decoding)},
                          {"latency_s", generation_s},
                          {"fallback", result.fallback},
                          {"raw", result.raw}};
    out.fallback = result.fallback;
    out.think = result.think;
    out.response = result.fallback ? std::string(llm::kFallbackToken) : result.response;
    if (out.fallback) {
      out.certified.clear();
      out.plan.reset();
    }

    auto scope = evidence_ids;
    scope.insert(profile.taken.begin(), profile.taken.end());
    catalog::CourseSet outside;
    const auto cited = eval::extract_course_ids(out.response + "\n" + out.think, code_pattern_);
    for (const auto& id : cited) {
      if (!scope.count(id)) outside.insert(id);
    }
    rec.grounding = json{{"cited", cited}, {"outside_evidence", outside}};
    return finish();
  } catch (const EmptyEvidence&) {
    return fallback("empty-evidence");
  } catch (const std::exception& e) {
    const auto* err = dynamic_cast<const Error*>(&e);
    rec.error = json{{"stage", stage}, {"kind", err ? err->kind() : std::string("Error")}, {"message", e.what()}};
    if (const auto* inf = dynamic_cast<const InfeasiblePlan*>(&e)) (*rec.error)["stuck"] = inf->stuck();
    rec.stage_latencies["engine"] = seconds_since(t_start) - generation_s;
    const auto ref = provenance_->append(rec);
    throw PipelineError(stage, stage + ": " + e.what(), ref);
  }
}

eval::PipelineOutcome Advisor::advise_baseline(std::string_view query_text, llm::GeneratorBackend& backend) const {
  const auto t = Clock::now();
  const std::string body = "### STUDENT_QUERY '" + text::trim(query_text) + "'\n";
  const auto request =
      llm::make_request(body, config_.decoding, std::chrono::milliseconds(config_.generation_timeout_ms));
  const auto result = llm::generate(request, backend);
  eval::PipelineOutcome o;
  o.fallback = result.fallback;
  o.response = result.fallback ? std::string(llm::kFallbackToken) : result.response;
  o.tokens = prompt::count_tokens(body);
  o.n_retrieved = 0;
  o.generation_latency = result.latency;
  o.engine_latency = std::chrono::duration<double>(seconds_since(t)) - result.latency;
  return o;
}

planner::Roadmap Advisor::plan(const PlanRequest& r) const {
  const catalog::StudentProfile* profile = r.student_id ? &student(*r.student_id) : nullptr;
  std::string program_id;
  if (r.program_id) {
    program_id = *r.program_id;
  } else if (profile) {
    program_id = profile->program_id;
  } else {
    throw ConfigError("plan needs a student or a program");
  }
  if (!catalog_.has_program(program_id)) throw UnknownProgram("unknown program `" + program_id + "`");
  catalog::CourseSet taken = r.taken ? *r.taken : (profile ? profile->taken : catalog::CourseSet{});
  for (const auto& c : taken) {
    if (!catalog_.has_course(c)) throw UnknownCourse("unknown course `" + c + "`");
  }
  auto pc = planner_config(config_);
  pc.calendar = catalog_.header().calendar;
  if (r.credit_cap) {
    if (*r.credit_cap <= 0) throw ConfigError("credit cap must be positive");
    pc.credit_cap = *r.credit_cap;
  }
  if (r.min_courses_per_term) {
    if (*r.min_courses_per_term < 1) throw ConfigError("min_courses_per_term must be >= 1");
    pc.min_courses_per_term = *r.min_courses_per_term;
  }
  if (r.start) {
    pc.start = *r.start;
  } else if (profile) {
    pc.start = reference_term(*profile);
  } else if (config_.current_term) {
    pc.start = *config_.current_term;
  }
  return planner::plan_roadmap(catalog_, program_id, taken, pc);
}

eval::PipelineOutcome GroundedPipeline::run(const eval::BenchmarkQuery& q) {
  const auto r = advisor_.advise(q.text, q.student_id, q.id);
  eval::PipelineOutcome o;
  o.response = r.response;
  o.fallback = r.fallback;
  o.tokens = r.prompt_tokens;
  o.n_retrieved = r.n_retrieved;
  o.engine_latency = std::chrono::duration<double>(r.engine_seconds);
  o.generation_latency = std::chrono::duration<double>(r.generation_seconds);
  auto citable = r.certified;
  const auto& taken = advisor_.student(q.student_id).taken;
  citable.insert(taken.begin(), taken.end());
  o.citable = std::move(citable);
  return o;
}

std::string GroundedPipeline::identity() const { return "grounded/" + advisor_.backend().identity(); }

eval::PipelineOutcome BaselinePipeline::run(const eval::BenchmarkQuery& q) {
  return advisor_.advise_baseline(q.text, backend_);
}

std::string BaselinePipeline::identity() const { return "baseline/" + backend_.identity(); }

}  // namespace advisor::service

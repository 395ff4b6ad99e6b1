// One line per acceptance criterion; exit status is the number of failures.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "advisor/catalog/catalog_io.h"
#include "advisor/common/errors.h"
#include "advisor/common/text.h"
#include "advisor/eval/bench.h"
#include "advisor/eval/metrics.h"
#include "advisor/planner/planner.h"
#include "advisor/prompt/prompt_forge.h"
#include "advisor/router/candidate_router.h"
#include "advisor/rules/rule_engine.h"
#include "advisor/service/advisor.h"
#include "generators.h"
#include "oracles.h"
#include "paths.h"

using namespace advisor;
namespace oracle = advisor::testkit::oracle;
using advisor::testkit::fixture;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CountingBackend : public llm::GeneratorBackend {
 public:
  std::string generate(const llm::GenerationRequest& r) override {
    ++calls;
    return llm::stub_generate(r.prompt_body);
  }
  std::string identity() const override { return "counting-stub"; }
  std::atomic<int> calls{0};
};

std::unique_ptr<service::Advisor> suite_advisor(std::unique_ptr<llm::GeneratorBackend> backend) {
  auto c = catalog::load_catalog(fixture("catalog"));
  auto s = catalog::load_students(fixture("catalog"), c);
  return std::make_unique<service::Advisor>(std::move(c), std::move(s), service::ServiceConfig{}, std::move(backend),
                                            nullptr);
}

catalog::CourseSet all_ids(const catalog::Catalog& c) {
  catalog::CourseSet out;
  for (const auto& [id, _] : c.courses()) out.insert(id);
  return out;
}

void planner_validity() {
  const auto t0 = Clock::now();
  testkit::Rng rng(20250601);
  testkit::CatalogShape shape;
  shape.max_courses = 20;
  shape.min_credits = 1;
  shape.max_credits = 4;
  const int kCatalogs = 500;
  int violations = 0, planned = 0, infeasible = 0;
  std::string first;
  auto note = [&](const std::string& what) {
    if (first.empty()) first = what;
    ++violations;
  };
  for (int i = 0; i < kCatalogs; ++i) {
    const auto records = testkit::random_catalog(rng, shape);
    const auto c = catalog::Catalog::build(records);
    planner::PlannerConfig cfg;
    cfg.credit_cap = std::uniform_int_distribution<int>(6, 15)(rng);
    cfg.min_courses_per_term = std::uniform_int_distribution<int>(1, 4)(rng);
    cfg.start = testkit::random_term(rng);
    const auto taken = testkit::random_subset(rng, records, 0.15);
    const auto tag = "catalog " + std::to_string(i) + ": ";
    try {
      const auto rm = planner::plan_roadmap(c, "P1", taken, cfg);
      ++planned;
      auto done = taken;
      for (const auto& b : rm.blocks) {
        if (!b.overflow && !rules::validate_selection(c, b.courses, done, cfg.cap_for(b.term), b.term).ok) {
          note(tag + "validate_selection fails in " + catalog::to_string(b.term));
        }
        done.insert(b.courses.begin(), b.courses.end());
      }
      for (const auto& p : oracle::roadmap_problems(records, rm, "P1", taken, cfg)) note(tag + p);
      if (planner::serialize_roadmap(planner::plan_roadmap(c, "P1", taken, cfg)) != planner::serialize_roadmap(rm)) {
        note(tag + "non-deterministic");
      }
    } catch (const InfeasiblePlan&) {
      ++infeasible;
      // Legitimate only when no schedule exists at all.
      if (oracle::min_horizon(records, "P1", taken, cfg.credit_cap, cfg.calendar, cfg.start, cfg.max_terms)) {
        note(tag + "InfeasiblePlan although a schedule exists");
      }
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(violations == 0 && secs < 60.0, "planner-validity",
         std::to_string(kCatalogs) + " catalogs (" + std::to_string(planned) + " planned, " +
             std::to_string(infeasible) + " infeasible), " + std::to_string(violations) + " violations, " +
             fmt("%.2f s", secs) + (first.empty() ? "" : "; first: " + first));
}

void planner_oracle() {
  int instances = 0, worst = -100, failed = 0;
  std::string detail;
  for (const auto& entry : std::filesystem::directory_iterator(fixture("planner"))) {
    if (entry.path().extension() != ".json") continue;
    const auto doc = nlohmann::json::parse(slurp(entry.path()));
    const auto records = catalog::parse_catalog_records(doc.at("catalog"));
    if (records.courses.size() > 12) continue;
    const auto c = catalog::Catalog::build(records);
    const auto program = doc.at("program").get<std::string>();
    catalog::CourseSet taken;
    for (const auto& t : doc.at("taken")) taken.insert(t.get<std::string>());
    planner::PlannerConfig cfg;
    cfg.credit_cap = doc["config"].at("credit_cap").get<int>();
    cfg.min_courses_per_term = doc["config"].at("min_courses_per_term").get<int>();
    cfg.start = catalog::parse_term(doc["config"].at("start").get<std::string>());
    cfg.calendar = c.header().calendar;
    ++instances;
    const auto best = oracle::min_horizon(records, program, taken, cfg.credit_cap, cfg.calendar, cfg.start, 24);
    try {
      const auto rm = planner::plan_roadmap(c, program, taken, cfg);
      const int greedy = oracle::horizon(rm, cfg.start, cfg.calendar);
      if (!best || greedy > *best + 2) ++failed;
      if (best) worst = std::max(worst, greedy - *best);
      detail += " " + entry.path().stem().string() + "=" + std::to_string(greedy) + "/" +
                (best ? std::to_string(*best) : std::string("none"));
    } catch (const InfeasiblePlan&) {
      if (best) ++failed;
      detail += " " + entry.path().stem().string() + "=infeasible";
    }
  }
  report(failed == 0 && instances > 0, "planner-oracle",
         std::to_string(instances) + " instances, max greedy-minus-optimal " + std::to_string(worst) +
             " terms (bound 2); greedy/optimal:" + detail);
}

void filter_oracle() {
  testkit::Rng rng(424242);
  testkit::CatalogShape shape;
  shape.programs = 3;
  int mismatches = 0;
  const int kCases = 1000;
  for (int i = 0; i < kCases; ++i) {
    const auto records = testkit::random_catalog(rng, shape);
    const auto c = catalog::Catalog::build(records);
    const auto spec = testkit::random_filter_spec(rng, records);
    mismatches += router::filter_candidates(c, spec).course_ids != oracle::filter(records, spec);
  }
  report(mismatches == 0, "filter-oracle", std::to_string(kCases) + " specs, " + std::to_string(mismatches) + " mismatches");
}

void rule_oracle() {
  testkit::Rng rng(13371337);
  int mismatches = 0;
  const int kCases = 1000;
  for (int i = 0; i < kCases; ++i) {
    const auto records = testkit::random_catalog(rng);
    const auto c = catalog::Catalog::build(records);
    const auto taken = testkit::random_subset(rng, records, 0.4);
    const auto term = testkit::random_term(rng);
    const auto cands = testkit::random_subset(rng, records, 0.5);
    if (rules::certify_candidates(c, {cands, {}}, taken, term).certified != oracle::certify(records, cands, taken, term)) {
      ++mismatches;
    }
    auto pick = testkit::random_subset(rng, records, 0.25);
    if (pick.empty()) pick.insert(records.courses.front().id);
    const int cap = std::uniform_int_distribution<int>(3, 15)(rng);
    const auto got = rules::validate_selection(c, pick, taken, cap, term);
    const auto want = oracle::validate(records, pick, taken, cap, term);
    mismatches += got.ok != want.ok || got.certified != want.certified;
  }
  report(mismatches == 0, "rule-engine-oracle",
         std::to_string(kCases) + " cases, " + std::to_string(mismatches) + " mismatches");
}

void golden_prompt() {
  auto c = catalog::load_catalog(fixture("ml_schedule"));
  auto s = catalog::load_students(fixture("ml_schedule"), c);
  service::Advisor advisor(std::move(c), std::move(s), {}, std::make_unique<llm::StubBackend>(), nullptr);
  const auto r = advisor.advise("I would like a machine-learning schedule next spring, max 12 credits.", "S-ML", "ML");
  const auto rec = advisor.provenance().get(r.provenance_ref);
  const auto body = rec ? (*rec)["prompt"]["body"].get<std::string>() : std::string();
  const auto golden = slurp(fixture("golden/ml_schedule_prompt.txt"));
  report(body == golden, "prompt-golden",
         body == golden ? "byte-identical (" + std::to_string(golden.size()) + " bytes)" : "rendered prompt differs");
}

void footprint() {
  const auto c = catalog::load_catalog(fixture("footprint/catalog_210.json"));
  const auto tokens = prompt::count_tokens(prompt::serialize_full_catalog(c));
  const bool band = c.courses().size() == 210 && tokens >= 11970 && tokens <= 13230;
  const auto worst = prompt::format_ratio(prompt::footprint_ratio(1346, 12600));
  const auto typical = prompt::format_ratio(prompt::footprint_ratio(492, 12600));

  auto advisor = suite_advisor(std::make_unique<llm::StubBackend>());
  const auto suite = eval::load_suite(fixture("bench/suite.json"));
  int oos = 0, zero = 0;
  for (const auto& q : suite) {
    if (q.category != nlu::AdvisingIntent::OutOfScope) continue;
    ++oos;
    advisor->advise(q.text, q.student_id, q.id);
    const auto entries = advisor->footprint_log().entries();
    zero += !entries.empty() && entries.back().query_id == q.id && entries.back().token_count == 0;
  }
  report(band && worst == "0.11" && typical == "0.04" && oos > 0 && zero == oos, "footprint",
         "full catalog " + std::to_string(tokens) + " tokens over " + std::to_string(c.courses().size()) +
             " courses (band 11970..13230); ratios " + worst + " and " + typical + "; " + std::to_string(zero) + "/" +
             std::to_string(oos) + " out-of-scope queries logged token_count 0");
}

void fallback() {
  auto counting = std::make_unique<CountingBackend>();
  auto* backend = counting.get();
  auto advisor = suite_advisor(std::move(counting));
  const auto suite = eval::load_suite(fixture("bench/suite.json"));
  int total = 0, ok = 0;
  for (int run = 0; run < 5; ++run) {
    for (const auto& q : suite) {
      if (q.category != nlu::AdvisingIntent::OutOfScope) continue;
      ++total;
      const auto r = advisor->advise(q.text, q.student_id, q.id);
      ok += r.fallback && r.response == llm::kFallbackToken;
    }
  }
  report(total > 0 && ok == total && backend->calls == 0, "fallback",
         std::to_string(ok) + "/" + std::to_string(total) + " fallback responses, " + std::to_string(backend->calls.load()) +
             " backend calls");
}

void metric_self_consistency() {
  auto advisor = suite_advisor(std::make_unique<llm::StubBackend>());
  auto suite = eval::load_suite(fixture("bench/suite.json"));
  for (auto& q : suite) {
    const auto r = advisor->advise(q.text, q.student_id, q.id);
    q.expert_answer = r.response;
    q.expected_courses = eval::extract_course_ids(r.response);
  }
  service::GroundedPipeline pipeline(*advisor);
  eval::TermFrequencyProvider tf;
  eval::BenchConfig cfg;
  cfg.known_ids = all_ids(advisor->catalog());
  const auto exact = eval::run_benchmark(suite, pipeline, tf, cfg);
  const bool ones = exact.cosine == 1.0 && exact.precision == 1.0 && exact.recall == 1.0 && exact.f1 == 1.0;

  // Drop the middle token of every expert answer.
  auto perturbed = suite;
  for (auto& q : perturbed) {
    auto words = text::whitespace_runs(q.expert_answer);
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i != words.size() / 2) kept.emplace_back(words[i]);
    }
    q.expert_answer = text::join(kept, " ");
  }
  const auto cut = eval::run_benchmark(perturbed, pipeline, tf, cfg);
  bool every_query_drops = true;
  for (std::size_t i = 0; i < cut.queries.size(); ++i) {
    every_query_drops = every_query_drops && cut.queries[i].cosine < exact.queries[i].cosine;
  }
  report(ones && cut.cosine < exact.cosine && every_query_drops, "metric-self-consistency",
         "exact: cosine " + fmt("%.6f", exact.cosine) + ", P " + fmt("%.6f", exact.precision) + ", R " +
             fmt("%.6f", exact.recall) + ", F1 " + fmt("%.6f", exact.f1) + "; one token deleted: cosine " +
             fmt("%.6f", cut.cosine) + (every_query_drops ? ", lower on every query" : ", NOT lower on every query"));
}

void engine_latency_and_quality() {
  auto advisor = suite_advisor(std::make_unique<llm::StubBackend>());
  const auto suite = eval::load_suite(fixture("bench/suite.json"));
  eval::TermFrequencyProvider tf;
  eval::BenchConfig cfg;
  cfg.known_ids = all_ids(advisor->catalog());

  service::GroundedPipeline grounded(*advisor);
  const auto g = eval::run_benchmark(suite, grounded, tf, cfg);
  report(g.engine_latency_s.mean < 1.0 && g.queries.size() == 20, "engine-latency",
         "mean engine time " + fmt("%.6f", g.engine_latency_s.mean) + " s per query (max " +
             fmt("%.6f", g.engine_latency_s.max) + " s) over " + std::to_string(g.queries.size()) + " queries x " +
             std::to_string(g.runs) + " runs, bound 1 s");

  llm::DegradedStubBackend ungrounded;
  service::BaselinePipeline baseline(*advisor, ungrounded);
  const auto b = eval::run_benchmark(suite, baseline, tf, cfg);
  report(g.cosine >= b.cosine && g.hallucinated_ids == 0, "grounded-vs-baseline",
         "grand cosine grounded " + fmt("%.4f", g.cosine) + " vs baseline " + fmt("%.4f", b.cosine) + "; F1 " +
             fmt("%.4f", g.f1) + " vs " + fmt("%.4f", b.f1) + "; hallucinated ids grounded " +
             std::to_string(g.hallucinated_ids) + ", baseline " + std::to_string(b.hallucinated_ids));
}

template <typename Fn>
void guard(const char* name, Fn fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(false, name, std::string("threw: ") + e.what());
  }
}

}  // namespace

int main() {
  guard("planner-validity", planner_validity);
  guard("planner-oracle", planner_oracle);
  guard("filter-oracle", filter_oracle);
  guard("rule-engine-oracle", rule_oracle);
  guard("prompt-golden", golden_prompt);
  guard("footprint", footprint);
  guard("fallback", fallback);
  guard("metric-self-consistency", metric_self_consistency);
  guard("engine-latency", [] { engine_latency_and_quality(); });
  std::printf("%d failing\n", failures);
  return failures == 0 ? 0 : 1;
}

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

#include "advisor/common/errors.h"
#include "advisor/eval/bench.h"
#include "advisor/eval/embedding.h"
#include "advisor/eval/metrics.h"
#include "advisor/eval/suite.h"
#include "paths.h"

using namespace advisor;
using namespace advisor::eval;
using catalog::CourseSet;

TEST(Prf, WorkedExample) {
  const auto m = course_prf({"AAA1000", "BBB1000", "CCC1000"}, {"AAA1000", "BBB1000", "DDD1000", "EEE1000"});
  EXPECT_DOUBLE_EQ(m.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.recall, 1.0 / 2.0);
  EXPECT_DOUBLE_EQ(m.f1, 4.0 / 7.0);
}

TEST(Prf, EmptySetConventions) {
  auto eq = [](Prf p, double a, double b, double c) { return p.precision == a && p.recall == b && p.f1 == c; };
  EXPECT_TRUE(eq(course_prf({}, {}), 1, 1, 1));
  EXPECT_TRUE(eq(course_prf({}, {"AAA1000"}), 0, 0, 0));
  EXPECT_TRUE(eq(course_prf({"AAA1000"}, {}), 0, 1, 0));
  EXPECT_TRUE(eq(course_prf({"AAA1000"}, {"BBB1000"}), 0, 0, 0));
}

TEST(Extract, FullTokenMatchesOnly) {
  EXPECT_EQ(extract_course_ids("Take cop3530, then CAP4612; skip XCOP35301 and AB12."),
            (CourseSet{"CAP4612", "COP3530"}));
  EXPECT_EQ(extract_course_ids("MLA4100 (Intro, 3 credits)"), CourseSet{"MLA4100"});
  EXPECT_EQ(extract_course_ids("ID-1234", std::regex("[A-Z]{2}[0-9]{4}")), CourseSet{});
}

TEST(Stats, MeanAndPopulationSigma) {
  EXPECT_DOUBLE_EQ(mean({1, 2, 3, 4}), 2.5);
  EXPECT_DOUBLE_EQ(stddev({2, 4, 4, 4, 5, 5, 7, 9}), 2.0);
  EXPECT_DOUBLE_EQ(stddev({5}), 0.0);
  EXPECT_DOUBLE_EQ(mean({}), 0.0);
}

TEST(Cosine, KnownValues) {
  EXPECT_DOUBLE_EQ(cosine_similarity(embed("alpha beta"), embed("Beta, ALPHA!")), 1.0);
  EXPECT_NEAR(cosine_similarity(embed("alpha beta"), embed("alpha gamma")), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(cosine_similarity(embed("alpha"), embed("gamma")), 0.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(embed(""), embed("gamma")), 0.0);
  // tf weighting: (2,1) . (1,0) / (sqrt5 * 1)
  EXPECT_NEAR(cosine_similarity(embed("a a b"), embed("a")), 2.0 / std::sqrt(5.0), 1e-12);
}

TEST(Cosine, DimensionMismatchThrows) {
  Embedding a{3, {{0, 1.0}}};
  Embedding b{4, {{0, 1.0}}};
  EXPECT_THROW(cosine_similarity(a, b), DimensionMismatch);
}

TEST(Cosine, TokenDeletionLowersSimilarity) {
  const std::string s = "As your academic advisor, I recommend COP3530 and CDA3100 next term.";
  const std::string cut = "As your academic advisor, I recommend COP3530 and next term.";
  EXPECT_LT(cosine_similarity(embed(s), embed(cut)), 1.0);
}

TEST(Suite, FixtureParses) {
  const auto suite = load_suite(testkit::fixture("bench/suite.json"));
  ASSERT_EQ(suite.size(), 20u);
  int oos = 0;
  for (const auto& q : suite) oos += q.category == nlu::AdvisingIntent::OutOfScope;
  EXPECT_EQ(oos, 3);
  EXPECT_EQ(parse_suite(to_json(suite)).size(), 20u);
  EXPECT_THROW(parse_suite(nlohmann::json::parse(R"({"queries":[{"id":"x","category":"Nope"}]})")), ParseError);
}

namespace {

// Echoes a scripted answer per query; counts calls; fails on request.
class EchoPipeline : public BenchPipeline {
 public:
  std::map<std::string, std::string> answers;
  std::set<std::string> failing;
  std::atomic<int> calls{0};

  PipelineOutcome run(const BenchmarkQuery& q) override {
    ++calls;
    if (failing.count(q.id)) throw TransportError("down");
    PipelineOutcome o;
    o.response = answers.at(q.id);
    o.fallback = o.response == "INSUFFICIENT_CONTEXT";
    o.tokens = 10;
    o.citable = q.expected_courses;
    return o;
  }
  std::string identity() const override { return "echo"; }
};

Suite tiny_suite() {
  Suite s;
  s.push_back({"A", nlu::AdvisingIntent::ShortTerm, "", "S1", "t", {"AAA1000"}, "As your academic advisor, I recommend AAA1000."});
  s.push_back({"B", nlu::AdvisingIntent::OutOfScope, "", "S1", "t", {}, "INSUFFICIENT_CONTEXT"});
  return s;
}

}  // namespace

TEST(Bench, PerfectAnswersScoreOne) {
  EchoPipeline p;
  const auto suite = tiny_suite();
  for (const auto& q : suite) p.answers[q.id] = q.expert_answer;
  TermFrequencyProvider tf;
  BenchConfig cfg;
  cfg.runs = 3;
  const auto m = run_benchmark(suite, p, tf, cfg);
  EXPECT_EQ(p.calls, 6);
  EXPECT_DOUBLE_EQ(m.cosine, 1.0);
  EXPECT_DOUBLE_EQ(m.precision, 1.0);
  EXPECT_DOUBLE_EQ(m.recall, 1.0);
  EXPECT_DOUBLE_EQ(m.f1, 1.0);
  EXPECT_FALSE(m.queries[1].prf_scored);
  EXPECT_DOUBLE_EQ(m.queries[1].fallback_rate, 1.0);
  EXPECT_EQ(m.hallucinated_ids, 0u);
  EXPECT_DOUBLE_EQ(m.tokens.sigma, 0.0);
}

TEST(Bench, HallucinationsCounted) {
  EchoPipeline p;
  const auto suite = tiny_suite();
  p.answers["A"] = "As your academic advisor, I recommend AAA1000 and ZZZ9999.";
  p.answers["B"] = "INSUFFICIENT_CONTEXT";
  TermFrequencyProvider tf;
  BenchConfig cfg;
  cfg.runs = 2;
  const auto m = run_benchmark(suite, p, tf, cfg);
  EXPECT_EQ(m.hallucinated_ids, 2u);
  EXPECT_DOUBLE_EQ(m.precision, 0.5);
}

TEST(Bench, AbortsAfterConsecutiveFailures) {
  EchoPipeline p;
  auto suite = tiny_suite();
  for (const auto& q : suite) p.answers[q.id] = q.expert_answer;
  p.failing = {"A"};
  TermFrequencyProvider tf;
  const auto m = run_benchmark(suite, p, tf, {});
  EXPECT_TRUE(m.queries[0].failed);
  EXPECT_EQ(m.queries[0].runs.size(), 2u);
  EXPECT_DOUBLE_EQ(m.queries[0].cosine, 0.0);
  EXPECT_EQ(p.calls, 2 + 5);
}

TEST(Bench, ParallelMatchesSerial) {
  EchoPipeline a;
  EchoPipeline b;
  auto suite = tiny_suite();
  for (const auto& q : suite) a.answers[q.id] = b.answers[q.id] = q.expert_answer + " extra";
  TermFrequencyProvider tf;
  BenchConfig serial;
  BenchConfig parallel;
  parallel.parallelism = 4;
  EXPECT_EQ(report_json(run_benchmark(suite, a, tf, serial)), report_json(run_benchmark(suite, b, tf, parallel)));
}

TEST(Bench, ReportSeparatesTiming) {
  EchoPipeline p;
  auto suite = tiny_suite();
  for (const auto& q : suite) p.answers[q.id] = q.expert_answer;
  TermFrequencyProvider tf;
  const auto m = run_benchmark(suite, p, tf, {});
  EXPECT_FALSE(report_json(m).contains("timing"));
  EXPECT_TRUE(report_json(m, true).contains("timing"));
  const auto cmp = compare(m, m);
  EXPECT_EQ(cmp.rows.size(), 2u);
  EXPECT_FALSE(render_table(cmp).empty());
}

#include <gtest/gtest.h>

#include <fstream>

#include "advisor/catalog/catalog_io.h"
#include "advisor/common/errors.h"
#include "advisor/planner/planner.h"
#include "generators.h"
#include "oracles.h"
#include "paths.h"

using namespace advisor;
using namespace advisor::planner;
using catalog::CourseSet;
using catalog::Season;
namespace oracle = advisor::testkit::oracle;

namespace {

const catalog::Catalog& main_catalog() {
  static const auto c = catalog::load_catalog(testkit::fixture("catalog"));
  return c;
}

}  // namespace

TEST(Planner, UnlockWeightAndPriority) {
  const auto c = catalog::load_catalog(testkit::fixture("ml_schedule"));
  const CourseSet need{"ABC1010", "DEF2020", "GHI3030", "MLA4100", "DST3300"};
  EXPECT_EQ(unlock_weight(c, "ABC1010", need), 1);
  EXPECT_EQ(unlock_weight(c, "MLA4100", need), 0);
  EXPECT_EQ(priority_order(c, {"ABC1010", "DEF2020", "MLA4100"}, need),
            (std::vector<std::string>{"ABC1010", "DEF2020", "MLA4100"}));
  EXPECT_THROW(unlock_weight(c, "ZZZ0000", need), UnknownCourse);
}

TEST(Planner, GreedyPackIsMaximalInPriorityOrder) {
  testkit::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto r = testkit::random_catalog(rng);
    const auto c = catalog::Catalog::build(r);
    const auto elig = testkit::random_subset(rng, r, 0.5);
    const auto need = testkit::random_subset(rng, r, 0.7);
    const int cap = std::uniform_int_distribution<int>(1, 12)(rng);
    const auto pack = greedy_pack(c, elig, need, cap);
    int total = 0;
    for (const auto& id : pack.courses) total += c.course(id).credits;
    if (pack.overflow) {
      EXPECT_EQ(pack.courses.size(), 1u);
      for (const auto& id : elig) EXPECT_GT(c.course(id).credits, cap);
      continue;
    }
    EXPECT_LE(total, cap);
    // Maximal: no skipped course would still fit.
    for (const auto& id : elig) {
      if (!pack.courses.count(id)) EXPECT_GT(total + c.course(id).credits, cap) << id;
    }
  }
}

TEST(Planner, EmptyNeedGivesEmptyRoadmap) {
  const auto c = catalog::load_catalog(testkit::fixture("ml_schedule"));
  PlannerConfig cfg;
  const auto rm = plan_roadmap(c, "CS-BS", c.program_course_ids("CS-BS"), cfg);
  EXPECT_TRUE(rm.blocks.empty());
}

TEST(Planner, FixtureStudentsGetSoundRoadmaps) {
  const auto& c = main_catalog();
  const auto students = catalog::load_students(testkit::fixture("catalog"), c);
  for (const auto& [id, s] : students) {
    PlannerConfig cfg;
    cfg.calendar = c.header().calendar;
    cfg.start = {Season::Fall, 2025};
    const auto rm = plan_roadmap(c, s.program_id, s.taken, cfg);
    const auto problems = oracle::roadmap_problems(c.records(), rm, s.program_id, s.taken, cfg);
    EXPECT_TRUE(problems.empty()) << id << ": " << (problems.empty() ? "" : problems.front());
    EXPECT_EQ(serialize_roadmap(rm), serialize_roadmap(plan_roadmap(c, s.program_id, s.taken, cfg)));
  }
}

TEST(Planner, SingleSeasonCoursesWaitForTheirTerm) {
  const auto c = catalog::load_catalog(testkit::fixture("ml_schedule"));
  PlannerConfig cfg;
  cfg.start = {Season::Fall, 2025};
  cfg.min_courses_per_term = 1;
  const auto rm = plan_roadmap(c, "CS-BS", {"ABC1010", "DEF2020", "GHI3030"}, cfg);
  ASSERT_EQ(rm.blocks.size(), 1u);
  EXPECT_EQ(rm.blocks[0].term, (catalog::TermLabel{Season::Spring, 2026}));
  EXPECT_EQ(rm.blocks[0].courses, (CourseSet{"DST3300", "MLA4100"}));
}

TEST(Planner, InfeasibleCases) {
  const auto c = catalog::load_catalog(testkit::fixture("ml_schedule"));
  PlannerConfig cfg;
  cfg.credit_cap = 2;
  try {
    plan_roadmap(c, "CS-BS", {}, cfg);
    FAIL() << "expected InfeasiblePlan";
  } catch (const InfeasiblePlan& e) {
    EXPECT_EQ(e.stuck().size(), 5u);
  }
  cfg.credit_cap = 15;
  cfg.max_terms = 1;
  EXPECT_THROW(plan_roadmap(c, "CS-BS", {}, cfg), InfeasiblePlan);
  cfg.max_terms = 24;
  cfg.min_courses_per_term = 0;
  EXPECT_THROW(plan_roadmap(c, "CS-BS", {}, cfg), ConfigError);
  cfg.min_courses_per_term = 3;
  EXPECT_THROW(plan_roadmap(c, "NOPE", {}, cfg), UnknownProgram);

  auto r = catalog::load_catalog_records(testkit::fixture("ml_schedule"));
  r.prereq_edges.push_back({"ABC1010", "DST3300", catalog::EdgeKind::Prerequisite});
  EXPECT_THROW(plan_roadmap(catalog::Catalog::index_unchecked(r), "CS-BS", {}, cfg), InfeasiblePlan);
}

TEST(Planner, SeasonAndTermCapsOverride) {
  PlannerConfig cfg;
  cfg.credit_cap = 15;
  cfg.season_caps[Season::Spring] = 9;
  cfg.term_caps[{Season::Spring, 2027}] = 6;
  EXPECT_EQ(cfg.cap_for({Season::Fall, 2026}), 15);
  EXPECT_EQ(cfg.cap_for({Season::Spring, 2026}), 9);
  EXPECT_EQ(cfg.cap_for({Season::Spring, 2027}), 6);
}

TEST(Planner, RandomCatalogsStaySound) {
  testkit::Rng rng(99);
  for (int i = 0; i < 150; ++i) {
    const auto r = testkit::random_catalog(rng);
    const auto c = catalog::Catalog::build(r);
    PlannerConfig cfg;
    cfg.credit_cap = std::uniform_int_distribution<int>(6, 15)(rng);
    cfg.min_courses_per_term = std::uniform_int_distribution<int>(1, 3)(rng);
    cfg.start = testkit::random_term(rng);
    const auto taken = testkit::random_subset(rng, r, 0.2);
    try {
      const auto rm = plan_roadmap(c, "P1", taken, cfg);
      const auto problems = oracle::roadmap_problems(r, rm, "P1", taken, cfg);
      EXPECT_TRUE(problems.empty()) << "case " << i << ": " << (problems.empty() ? "" : problems.front());
    } catch (const InfeasiblePlan&) {
      // Only legitimate when no schedule exists at all.
      EXPECT_FALSE(oracle::min_horizon(r, "P1", taken, cfg.credit_cap, cfg.calendar, cfg.start, 24).has_value())
          << "case " << i;
    }
  }
}

TEST(Planner, HorizonOracleOnHandInstance) {
  // Chain A <- B <- C and an independent D: three terms regardless of cap.
  catalog::CatalogRecords r;
  for (const auto* id : {"AAA1000", "BBB1000", "CCC1000", "DDD1000"}) {
    catalog::Course c;
    c.id = id;
    c.title = id;
    c.credits = 3;
    c.terms_offered = {Season::Fall, Season::Spring};
    r.courses.push_back(c);
  }
  r.programs = {{"P", "P", catalog::DegreeType::Major}};
  for (const auto& c : r.courses) r.program_courses.push_back({"P", c.id, true, 1});
  r.prereq_edges = {{"BBB1000", "AAA1000", catalog::EdgeKind::Prerequisite},
                    {"CCC1000", "BBB1000", catalog::EdgeKind::Prerequisite}};
  const catalog::TermLabel start{Season::Fall, 2025};
  EXPECT_EQ(oracle::min_horizon(r, "P", {}, 15, catalog::default_calendar(), start), 3);
  EXPECT_EQ(oracle::min_horizon(r, "P", {}, 3, catalog::default_calendar(), start), 4);
  EXPECT_EQ(oracle::min_horizon(r, "P", {"AAA1000", "BBB1000", "CCC1000", "DDD1000"}, 3,
                                catalog::default_calendar(), start),
            0);
}

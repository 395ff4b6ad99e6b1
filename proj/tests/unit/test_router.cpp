#include <gtest/gtest.h>

#include "advisor/catalog/catalog_io.h"
#include "advisor/common/errors.h"
#include "advisor/router/candidate_router.h"
#include "generators.h"
#include "oracles.h"
#include "paths.h"

using namespace advisor;
using namespace advisor::router;
namespace oracle = advisor::testkit::oracle;

TEST(Router, NoFiltersReturnsProgramMinusTaken) {
  const auto c = catalog::load_catalog(testkit::fixture("ml_schedule"));
  FilterSpec spec;
  spec.program_id = "CS-BS";
  spec.exclude = {"ABC1010"};
  EXPECT_EQ(filter_candidates(c, spec).course_ids,
            (catalog::CourseSet{"DEF2020", "DST3300", "GHI3030", "MLA4100"}));
}

TEST(Router, EachFilterNarrows) {
  const auto c = catalog::load_catalog(testkit::fixture("ml_schedule"));
  FilterSpec spec;
  spec.program_id = "CS-BS";
  spec.exclude = {"ABC1010", "DEF2020", "GHI3030"};
  spec.skill_filter = std::set<std::string>{"machine learning", "data science"};
  EXPECT_EQ(filter_candidates(c, spec).course_ids, (catalog::CourseSet{"DST3300", "MLA4100"}));
  spec.conjunctive_skills = true;
  EXPECT_TRUE(filter_candidates(c, spec).course_ids.empty());
  spec.conjunctive_skills = false;
  spec.term_filter = catalog::Season::Fall;
  EXPECT_TRUE(filter_candidates(c, spec).course_ids.empty());
  spec.term_filter = catalog::Season::Spring;
  spec.max_course_credits = 2;
  EXPECT_TRUE(filter_candidates(c, spec).course_ids.empty());
}

TEST(Router, RejectsBadSpecs) {
  const auto c = catalog::load_catalog(testkit::fixture("ml_schedule"));
  FilterSpec spec;
  spec.program_id = "NOPE";
  EXPECT_THROW(filter_candidates(c, spec), UnknownProgram);
  spec.program_id = "CS-BS";
  spec.skill_filter = std::set<std::string>{};
  EXPECT_THROW(filter_candidates(c, spec), ConfigError);
  spec.skill_filter.reset();
  spec.max_course_credits = 0;
  EXPECT_THROW(filter_candidates(c, spec), ConfigError);
  spec.max_course_credits.reset();
  spec.exclude = {"not-a-code"};
  EXPECT_THROW(filter_candidates(c, spec), ConfigError);
}

TEST(Router, AgreesWithBruteForce) {
  testkit::Rng rng(101);
  testkit::CatalogShape shape;
  shape.programs = 3;
  for (int i = 0; i < 300; ++i) {
    const auto r = testkit::random_catalog(rng, shape);
    const auto c = catalog::Catalog::build(r);
    const auto spec = testkit::random_filter_spec(rng, r);
    EXPECT_EQ(filter_candidates(c, spec).course_ids, oracle::filter(r, spec)) << "case " << i;
  }
}

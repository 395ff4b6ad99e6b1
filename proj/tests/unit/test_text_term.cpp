#include <gtest/gtest.h>

#include "advisor/catalog/term.h"
#include "advisor/common/errors.h"
#include "advisor/common/text.h"

using namespace advisor;
using catalog::Season;
using catalog::TermLabel;

TEST(Text, WordsSplitOnEveryNonAlnumByte) {
  EXPECT_EQ(text::words("Hello, World-42!"), (std::vector<std::string>{"hello", "world", "42"}));
  EXPECT_EQ(text::words("caf\xc3\xa9 bar"), (std::vector<std::string>{"caf", "bar"}));
  EXPECT_TRUE(text::words("  ...  ").empty());
}

TEST(Text, WhitespaceRunsCountTokens) {
  EXPECT_EQ(text::whitespace_runs("a  b\tc\n").size(), 3u);
  EXPECT_TRUE(text::whitespace_runs("").empty());
}

TEST(Text, TrimAndJoin) {
  EXPECT_EQ(text::trim("  x y \n"), "x y");
  EXPECT_EQ(text::join({"a", "b", "c"}, ", "), "a, b, c");
  EXPECT_EQ(text::join({}, ", "), "");
}

TEST(Text, Fnv1aKnownVectors) {
  EXPECT_EQ(text::fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(text::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(text::hex64(0xabcULL), "0000000000000abc");
}

TEST(Term, ParseAcceptsSeveralSpellings) {
  const TermLabel expected{Season::Spring, 2026};
  EXPECT_EQ(catalog::parse_term("Spring 2026"), expected);
  EXPECT_EQ(catalog::parse_term("spring-2026"), expected);
  EXPECT_EQ(catalog::parse_term("Spring2026"), expected);
  EXPECT_THROW(catalog::parse_term("Sprung 2026"), ParseError);
  EXPECT_THROW(catalog::parse_term("Spring"), ParseError);
  EXPECT_THROW(catalog::parse_term("Spring 20x6"), ParseError);
}

TEST(Term, OrderingIsChronological) {
  EXPECT_LT((TermLabel{Season::Fall, 2025}), (TermLabel{Season::Spring, 2026}));
  EXPECT_LT((TermLabel{Season::Spring, 2026}), (TermLabel{Season::Summer, 2026}));
  EXPECT_LT((TermLabel{Season::Summer, 2026}), (TermLabel{Season::Fall, 2026}));
}

TEST(Term, SuccessorFollowsCalendar) {
  EXPECT_EQ(catalog::successor({Season::Fall, 2025}), (TermLabel{Season::Spring, 2026}));
  EXPECT_EQ(catalog::successor({Season::Spring, 2026}), (TermLabel{Season::Fall, 2026}));
  const catalog::Calendar with_summer{Season::Spring, Season::Summer, Season::Fall};
  EXPECT_EQ(catalog::successor({Season::Spring, 2026}, with_summer), (TermLabel{Season::Summer, 2026}));
  EXPECT_EQ(catalog::successor({Season::Fall, 2025}, {Season::Fall}), (TermLabel{Season::Fall, 2026}));
  EXPECT_THROW(catalog::successor({Season::Fall, 2025}, {}), ConfigError);
}

TEST(Term, ToStringRoundTrips) {
  const TermLabel t{Season::Summer, 2027};
  EXPECT_EQ(catalog::to_string(t), "Summer 2027");
  EXPECT_EQ(catalog::parse_term(catalog::to_string(t)), t);
}

#include <gtest/gtest.h>

#include "advisor/common/errors.h"
#include "advisor/eval/metrics.h"
#include "advisor/llm/gateway.h"

using namespace advisor;
using namespace advisor::llm;

namespace {

class ScriptedBackend : public GeneratorBackend {
 public:
  explicit ScriptedBackend(std::vector<std::string> script) : script_(std::move(script)) {}
  std::string generate(const GenerationRequest&) override {
    ++calls;
    const auto next = script_.at(std::min(calls - 1, script_.size() - 1));
    if (next == "!transport") throw TransportError("boom");
    if (next == "!timeout") throw GenerationTimeout("slow");
    return next;
  }
  std::string identity() const override { return "scripted"; }
  std::size_t calls = 0;

 private:
  std::vector<std::string> script_;
};

const char* const kBody =
    "### STUDENT_QUERY 'x'\n"
    "### STUDENT_HISTORY none\n"
    "### COURSE_FACT id = MLA4100 name = Intro to ML credits = 3 description = 'a, b' id = ONE1000 name = "
    "Seminar credits = 1 description = 'it''s'\n"
    "### 5W1H FRAME Who: a What: b When: n/a Where: n/a Why: b How: using the vetted courses above\n";

}  // namespace

TEST(Parse, AcceptsWellFormedTwoBlocks) {
  const auto p = parse_output("  <think>t</think>\n<response>As your academic advisor, I recommend X.</response>\n");
  ASSERT_TRUE(std::holds_alternative<TwoBlockOutput>(p));
  EXPECT_EQ(std::get<TwoBlockOutput>(p).think, "t");
}

TEST(Parse, RecognisesFallback) {
  EXPECT_TRUE(std::holds_alternative<FallbackOutput>(parse_output(" INSUFFICIENT_CONTEXT \n")));
}

TEST(Parse, RejectsBrokenContracts) {
  for (const auto* bad : {"", "hello", "<response>r</response>", "<think>t</think>",
                          "<response>r</response><think>t</think>",
                          "<think>t</think><think>u</think><response>r</response>",
                          "<think> </think><response>r</response>", "<think>t</think><response></response>",
                          "INSUFFICIENT_CONTEXT and more"}) {
    EXPECT_THROW(parse_output(bad), ContractViolation) << bad;
  }
}

TEST(Generate, ChecksOpeningPhrase) {
  ScriptedBackend b({"<think>t</think><response>Take X.</response>"});
  EXPECT_THROW(generate(make_request("body"), b), ContractViolation);
}

TEST(Generate, RetriesTransportOnceButNotTimeout) {
  ScriptedBackend flaky({"!transport", "INSUFFICIENT_CONTEXT"});
  EXPECT_TRUE(generate(make_request("body"), flaky).fallback);
  EXPECT_EQ(flaky.calls, 2u);

  ScriptedBackend dead({"!transport"});
  EXPECT_THROW(generate(make_request("body"), dead), TransportError);
  EXPECT_EQ(dead.calls, 2u);

  ScriptedBackend slow({"!timeout"});
  EXPECT_THROW(generate(make_request("body"), slow), GenerationTimeout);
  EXPECT_EQ(slow.calls, 1u);
}

TEST(Generate, RejectsBadDecoding) {
  StubBackend b;
  DecodingParams d;
  d.beam_count = 0;
  EXPECT_THROW(generate(make_request("x", d), b), ConfigError);
  d = {};
  d.temperature = -1;
  EXPECT_THROW(generate(make_request("x", d), b), ConfigError);
  EXPECT_THROW(generate(make_request("x", {}, std::chrono::milliseconds{0}), b), ConfigError);
}

TEST(Stub, CitesOnlyEvidenceAndIsDeterministic) {
  const auto out = stub_generate(kBody);
  EXPECT_EQ(out, stub_generate(kBody));
  StubBackend b;
  const auto r = generate(make_request(kBody), b);
  EXPECT_FALSE(r.fallback);
  EXPECT_EQ(r.response.rfind(std::string(kOpeningPhrase), 0), 0u);
  EXPECT_EQ(eval::extract_course_ids(r.response + " " + r.think), (catalog::CourseSet{"MLA4100", "ONE1000"}));
  EXPECT_NE(r.response.find("ONE1000 (Seminar, 1 credit)"), std::string::npos);
}

TEST(Stub, FallsBackWithoutFacts) {
  EXPECT_EQ(stub_generate("### STUDENT_QUERY 'where is the gym'\n"), "INSUFFICIENT_CONTEXT");
}

TEST(Degraded, NeverFallsBack) {
  DegradedStubBackend b;
  const auto r = generate(make_request("### STUDENT_QUERY 'where is the gym'\n"), b);
  EXPECT_FALSE(r.fallback);
  EXPECT_EQ(eval::extract_course_ids(r.response).size(), 3u);
}

TEST(Directive, ShippedTextIsLoaded) {
  EXPECT_FALSE(system_directive().empty());
  EXPECT_NE(system_directive().find(std::string(kFallbackToken)), std::string::npos);
}

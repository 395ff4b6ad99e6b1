#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "advisor/eval/embedding.h"
#include "advisor/eval/suite.h"

namespace advisor::eval {

// What one advising call produced, as seen by the bench.
struct PipelineOutcome {
  std::string response;  // response block, or the fallback token
  bool fallback = false;
  std::size_t tokens = 0;
  std::size_t n_retrieved = 0;
  std::chrono::duration<double> engine_latency{0};      // every stage but generation
  std::chrono::duration<double> generation_latency{0};  // backend call only
  // Ids the response may cite (certified plus taken). When absent, the bench
  // checks citations against BenchConfig::known_ids instead.
  std::optional<catalog::CourseSet> citable;
};

class BenchPipeline {
 public:
  virtual ~BenchPipeline() = default;
  virtual PipelineOutcome run(const BenchmarkQuery& query) = 0;
  virtual std::string identity() const = 0;
};

struct RunRecord {
  std::string query_id;
  int run_index = 0;  // 1-based
  double cosine = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool prf_scored = false;  // false for out-of-scope queries
  std::chrono::duration<double> engine_latency{0};
  std::chrono::duration<double> generation_latency{0};
  std::size_t tokens = 0;
  std::size_t n_retrieved = 0;
  bool fallback = false;
  bool failed = false;
  std::string error;
  catalog::CourseSet recommended;
};

struct Spread {
  double mean = 0.0;
  double sigma = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct QuerySummary {
  std::string query_id;
  nlu::AdvisingIntent category = nlu::AdvisingIntent::ShortTerm;
  std::vector<RunRecord> runs;
  double cosine = 0.0;
  double cosine_sigma = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool prf_scored = false;
  double fallback_rate = 0.0;
  bool failed = false;  // aborted after consecutive failures; metrics are 0
};

struct CategorySummary {
  std::size_t queries = 0;
  double cosine = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double fallback_rate = 0.0;
};

struct MetricsSummary {
  std::string pipeline;
  std::string embedding;
  int runs = 0;
  std::vector<QuerySummary> queries;
  // Means of the per-query means. P/R/F1 only over scored queries.
  double cosine = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::map<nlu::AdvisingIntent, CategorySummary> categories;
  Spread tokens;       // over every run
  Spread n_retrieved;  // over every run
  Spread engine_latency_s;
  Spread generation_latency_s;
  std::size_t hallucinated_ids = 0;  // cited ids outside the run's citable set
};

struct BenchConfig {
  int runs = 5;
  int parallelism = 1;
  int max_consecutive_failures = 2;
  // Fallback citable set for outcomes that carry none, usually every catalog
  // course id.
  catalog::CourseSet known_ids;
};

MetricsSummary run_benchmark(const Suite& suite, BenchPipeline& pipeline, EmbeddingProvider& embedder,
                             const BenchConfig& config = {});

struct ComparisonRow {
  std::string query_id;
  double grounded_cosine = 0.0;
  double baseline_cosine = 0.0;
  double grounded_f1 = 0.0;
  double baseline_f1 = 0.0;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  double grounded_cosine = 0.0;
  double baseline_cosine = 0.0;
  double grounded_f1 = 0.0;
  double baseline_f1 = 0.0;
};

// Rows for queries present in both summaries, in `grounded` order.
Comparison compare(const MetricsSummary& grounded, const MetricsSummary& baseline);

// The metrics section depends only on suite, config and backend; the timing
// section carries wall-clock measurements and is emitted only on request.
nlohmann::json report_json(const MetricsSummary& summary, bool include_timing = false);
nlohmann::json to_json(const Comparison& comparison);
std::string render_table(const MetricsSummary& summary, bool include_timing = false);
std::string render_table(const Comparison& comparison);

}  // namespace advisor::eval

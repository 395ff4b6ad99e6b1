#include "advisor/eval/bench.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

#include "advisor/eval/metrics.h"

namespace advisor::eval {

using nlohmann::json;

namespace {

Spread spread(const std::vector<double>& xs) {
  Spread s;
  if (xs.empty()) return s;
  s.mean = mean(xs);
  s.sigma = stddev(xs);
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  return s;
}

json to_json(const Spread& s) { return {{"mean", s.mean}, {"sigma", s.sigma}, {"min", s.min}, {"max", s.max}}; }

struct QueryResult {
  QuerySummary summary;
  std::size_t hallucinated = 0;
};

QueryResult run_query(const BenchmarkQuery& q, BenchPipeline& pipeline, EmbeddingProvider& embedder,
                      const BenchConfig& config) {
  QueryResult out;
  auto& qs = out.summary;
  qs.query_id = q.id;
  qs.category = q.category;
  qs.prf_scored = q.category != nlu::AdvisingIntent::OutOfScope;
  const auto expert = embedder.embed(q.expert_answer);

  int consecutive = 0;
  for (int r = 1; r <= config.runs; ++r) {
    RunRecord rec;
    rec.query_id = q.id;
    rec.run_index = r;
    rec.prf_scored = qs.prf_scored;
    try {
      const auto outcome = pipeline.run(q);
      consecutive = 0;
      rec.fallback = outcome.fallback;
      rec.tokens = outcome.tokens;
      rec.n_retrieved = outcome.n_retrieved;
      rec.engine_latency = outcome.engine_latency;
      rec.generation_latency = outcome.generation_latency;
      rec.cosine = cosine_similarity(embedder.embed(outcome.response), expert);
      rec.recommended = extract_course_ids(outcome.response);
      if (rec.prf_scored) {
        const auto prf = course_prf(rec.recommended, q.expected_courses);
        rec.precision = prf.precision;
        rec.recall = prf.recall;
        rec.f1 = prf.f1;
      }
      const auto& scope = outcome.citable ? *outcome.citable : config.known_ids;
      for (const auto& id : rec.recommended) out.hallucinated += scope.count(id) == 0;
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
      ++consecutive;
    }
    qs.runs.push_back(std::move(rec));
    if (consecutive >= config.max_consecutive_failures) {
      qs.failed = true;
      break;
    }
  }

  if (qs.failed) return out;
  std::vector<double> cos, p, rc, f, fb;
  for (const auto& rec : qs.runs) {
    cos.push_back(rec.cosine);
    p.push_back(rec.precision);
    rc.push_back(rec.recall);
    f.push_back(rec.f1);
    fb.push_back(rec.fallback ? 1.0 : 0.0);
  }
  qs.cosine = mean(cos);
  qs.cosine_sigma = stddev(cos);
  qs.precision = mean(p);
  qs.recall = mean(rc);
  qs.f1 = mean(f);
  qs.fallback_rate = mean(fb);
  return out;
}

}  // namespace

MetricsSummary run_benchmark(const Suite& suite, BenchPipeline& pipeline, EmbeddingProvider& embedder,
                             const BenchConfig& config) {
  std::vector<QueryResult> results(suite.size());
  const int workers = std::max(1, std::min<int>(config.parallelism, static_cast<int>(suite.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < suite.size(); ++i) results[i] = run_query(suite[i], pipeline, embedder, config);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (auto i = next++; i < suite.size(); i = next++) results[i] = run_query(suite[i], pipeline, embedder, config);
      });
    }
    for (auto& t : pool) t.join();
  }

  MetricsSummary s;
  s.pipeline = pipeline.identity();
  s.embedding = embedder.identity();
  s.runs = config.runs;
  std::vector<double> cos, p, r, f, tokens, retrieved, engine, gen;
  std::map<nlu::AdvisingIntent, std::vector<const QuerySummary*>> by_cat;
  for (auto& res : results) {
    s.hallucinated_ids += res.hallucinated;
    s.queries.push_back(std::move(res.summary));
  }
  for (const auto& q : s.queries) {
    cos.push_back(q.cosine);
    if (q.prf_scored) {
      p.push_back(q.precision);
      r.push_back(q.recall);
      f.push_back(q.f1);
    }
    by_cat[q.category].push_back(&q);
    for (const auto& rec : q.runs) {
      if (rec.failed) continue;
      tokens.push_back(static_cast<double>(rec.tokens));
      retrieved.push_back(static_cast<double>(rec.n_retrieved));
      engine.push_back(rec.engine_latency.count());
      gen.push_back(rec.generation_latency.count());
    }
  }
  s.cosine = mean(cos);
  s.precision = mean(p);
  s.recall = mean(r);
  s.f1 = mean(f);
  for (const auto& [cat, qs] : by_cat) {
    CategorySummary c;
    c.queries = qs.size();
    std::vector<double> cc, cp, cr, cf, cb;
    for (const auto* q : qs) {
      cc.push_back(q->cosine);
      cp.push_back(q->precision);
      cr.push_back(q->recall);
      cf.push_back(q->f1);
      cb.push_back(q->fallback_rate);
    }
    c.cosine = mean(cc);
    c.precision = mean(cp);
    c.recall = mean(cr);
    c.f1 = mean(cf);
    c.fallback_rate = mean(cb);
    s.categories[cat] = c;
  }
  s.tokens = spread(tokens);
  s.n_retrieved = spread(retrieved);
  s.engine_latency_s = spread(engine);
  s.generation_latency_s = spread(gen);
  return s;
}

Comparison compare(const MetricsSummary& grounded, const MetricsSummary& baseline) {
  Comparison c;
  std::vector<double> gc, bc, gf, bf;
  for (const auto& g : grounded.queries) {
    auto it = std::find_if(baseline.queries.begin(), baseline.queries.end(),
                           [&](const QuerySummary& b) { return b.query_id == g.query_id; });
    if (it == baseline.queries.end()) continue;
    c.rows.push_back({g.query_id, g.cosine, it->cosine, g.f1, it->f1});
    gc.push_back(g.cosine);
    bc.push_back(it->cosine);
    if (g.prf_scored) {
      gf.push_back(g.f1);
      bf.push_back(it->f1);
    }
  }
  c.grounded_cosine = mean(gc);
  c.baseline_cosine = mean(bc);
  c.grounded_f1 = mean(gf);
  c.baseline_f1 = mean(bf);
  return c;
}

json report_json(const MetricsSummary& s, bool include_timing) {
  json queries = json::array();
  for (const auto& q : s.queries) {
    json runs = json::array();
    for (const auto& r : q.runs) {
      json jr = {{"run", r.run_index},       {"cosine", r.cosine},   {"precision", r.precision},
                 {"recall", r.recall},       {"f1", r.f1},           {"tokens", r.tokens},
                 {"n_retrieved", r.n_retrieved}, {"fallback", r.fallback}, {"failed", r.failed},
                 {"recommended", r.recommended}};
      if (r.failed) jr["error"] = r.error;
      runs.push_back(std::move(jr));
    }
    queries.push_back({{"id", q.query_id},
                       {"category", nlu::to_string(q.category)},
                       {"cosine", q.cosine},
                       {"cosine_sigma", q.cosine_sigma},
                       {"precision", q.precision},
                       {"recall", q.recall},
                       {"f1", q.f1},
                       {"prf_scored", q.prf_scored},
                       {"fallback_rate", q.fallback_rate},
                       {"failed", q.failed},
                       {"runs", runs}});
  }
  json cats = json::object();
  for (const auto& [cat, c] : s.categories) {
    cats[std::string(nlu::to_string(cat))] = {{"queries", c.queries},     {"cosine", c.cosine},
                                              {"precision", c.precision}, {"recall", c.recall},
                                              {"f1", c.f1},               {"fallback_rate", c.fallback_rate}};
  }
  json report = {
      {"pipeline", s.pipeline},
      {"embedding", s.embedding},
      {"runs", s.runs},
      {"metrics",
       {{"grand", {{"cosine", s.cosine}, {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}}},
        {"categories", cats},
        {"footprint", {{"tokens", to_json(s.tokens)}, {"n_retrieved", to_json(s.n_retrieved)}}},
        {"hallucinated_ids", s.hallucinated_ids},
        {"queries", queries}}},
  };
  if (include_timing) {
    json per_query = json::object();
    for (const auto& q : s.queries) {
      std::vector<double> e, g;
      for (const auto& r : q.runs) {
        if (r.failed) continue;
        e.push_back(r.engine_latency.count());
        g.push_back(r.generation_latency.count());
      }
      per_query[q.query_id] = {{"engine_s", mean(e)}, {"generation_s", mean(g)}};
    }
    report["timing"] = {{"engine_s", to_json(s.engine_latency_s)},
                        {"generation_s", to_json(s.generation_latency_s)},
                        {"queries", per_query}};
  }
  return report;
}

json to_json(const Comparison& c) {
  json rows = json::array();
  for (const auto& r : c.rows) {
    rows.push_back({{"id", r.query_id},
                    {"grounded_cosine", r.grounded_cosine},
                    {"baseline_cosine", r.baseline_cosine},
                    {"grounded_f1", r.grounded_f1},
                    {"baseline_f1", r.baseline_f1}});
  }
  return {{"rows", rows},
          {"grand",
           {{"grounded_cosine", c.grounded_cosine},
            {"baseline_cosine", c.baseline_cosine},
            {"grounded_f1", c.grounded_f1},
            {"baseline_f1", c.baseline_f1}}}};
}

namespace {

std::string fmt(const char* f, double a, double b, double c, double d, double e) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c, d, e);
  return buf;
}

}  // namespace

std::string render_table(const MetricsSummary& s, bool include_timing) {
  std::string out = "pipeline " + s.pipeline + ", embedding " + s.embedding + ", " + std::to_string(s.runs) +
                    " runs per query\n\n";
  out += "query  category      cosine   sigma  precision  recall      f1  fallback\n";
  for (const auto& q : s.queries) {
    char head[48];
    std::snprintf(head, sizeof head, "%-6s %-12s", q.query_id.c_str(), std::string(nlu::to_string(q.category)).c_str());
    out += head;
    if (q.failed) {
      out += "  failed\n";
      continue;
    }
    out += fmt("  %6.4f  %6.4f", q.cosine, q.cosine_sigma, 0, 0, 0);
    if (q.prf_scored) {
      out += fmt("  %9.4f  %6.4f  %6.4f", q.precision, q.recall, q.f1, 0, 0);
    } else {
      out += "          -       -       -";
    }
    out += fmt("  %8.2f\n", q.fallback_rate, 0, 0, 0, 0);
  }
  out += fmt("\ngrand  cosine %.4f  precision %.4f  recall %.4f  f1 %.4f\n", s.cosine, s.precision, s.recall, s.f1, 0);
  out += fmt("tokens       %.1f +/- %.1f (range %.0f-%.0f)\n", s.tokens.mean, s.tokens.sigma, s.tokens.min, s.tokens.max, 0);
  out += fmt("n_retrieved  %.1f +/- %.1f (range %.0f-%.0f)\n", s.n_retrieved.mean, s.n_retrieved.sigma,
             s.n_retrieved.min, s.n_retrieved.max, 0);
  out += "hallucinated ids " + std::to_string(s.hallucinated_ids) + "\n";
  if (include_timing) {
    out += fmt("engine latency      %.4f s mean (max %.4f s)\n", s.engine_latency_s.mean, s.engine_latency_s.max, 0, 0, 0);
    out += fmt("generation latency  %.4f s mean (max %.4f s)\n", s.generation_latency_s.mean,
               s.generation_latency_s.max, 0, 0, 0);
  }
  return out;
}

std::string render_table(const Comparison& c) {
  std::string out = "query  grounded_cos  baseline_cos  grounded_f1  baseline_f1\n";
  for (const auto& r : c.rows) {
    char head[16];
    std::snprintf(head, sizeof head, "%-6s", r.query_id.c_str());
    out += head;
    out += fmt(" %12.4f  %12.4f  %11.4f  %11.4f\n", r.grounded_cosine, r.baseline_cosine, r.grounded_f1,
               r.baseline_f1, 0);
  }
  out += fmt("grand  %12.4f  %12.4f  %11.4f  %11.4f\n", c.grounded_cosine, c.baseline_cosine, c.grounded_f1,
             c.baseline_f1, 0);
  return out;
}

}  // namespace advisor::eval

#include "advisor/prompt/prompt_forge.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "advisor/common/errors.h"
#include "advisor/common/text.h"
#include "advisor/planner/planner.h"

namespace advisor::prompt {

namespace {

std::vector<CourseId> chain_order(const catalog::Catalog& catalog, const catalog::CourseSet& prereqs) {
  std::vector<CourseId> out(prereqs.begin(), prereqs.end());
  std::sort(out.begin(), out.end(), [&](const CourseId& a, const CourseId& b) {
    const int la = catalog.course(a).level;
    const int lb = catalog.course(b).level;
    if (la != lb) return la > lb;
    return a < b;
  });
  return out;
}

std::string render_fact(const CourseFact& f) {
  return "id = " + f.id + " name = " + f.name + " credits = " + std::to_string(f.credits) +
         " description = '" + f.description + "'";
}

std::string render_chain(const PrereqChain& c) {
  return c.course + " <- " + text::join(c.prerequisites, ", ");
}

}  // namespace

std::size_t count_tokens(std::string_view text) { return text::whitespace_runs(text).size(); }

EvidenceBundle build_evidence(const rules::Verdict& certified, const catalog::Catalog& catalog,
                              const catalog::StudentProfile& profile, const nlu::ParsedQuery& query) {
  return build_evidence(certified.certified, catalog, profile, query);
}

EvidenceBundle build_evidence(const catalog::CourseSet& certified, const catalog::Catalog& catalog,
                              const catalog::StudentProfile& profile, const nlu::ParsedQuery& query) {
  if (certified.empty()) throw EmptyEvidence("no certified courses to ground the prompt");

  catalog::CourseSet need;
  if (catalog.has_program(profile.program_id)) {
    for (const auto& c : catalog.program_course_ids(profile.program_id)) {
      if (!profile.taken.count(c)) need.insert(c);
    }
  }
  const auto& targets = query.entities.skill_targets;
  auto skill_rank = [&](const CourseId& id) {
    const auto& skills = catalog.course(id).skills;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (skills.count(targets[i])) return i;
    }
    return targets.size();
  };

  struct Ranked {
    int weight;
    std::size_t skill;
    CourseId id;
  };
  std::vector<Ranked> ranked;
  for (const auto& id : certified) ranked.push_back({planner::unlock_weight(catalog, id, need), skill_rank(id), id});
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.skill != b.skill) return a.skill < b.skill;
    return a.id < b.id;
  });

  EvidenceBundle ev;
  ev.student_query = query.raw_text;
  ev.history.assign(profile.taken.begin(), profile.taken.end());
  for (const auto& r : ranked) {
    const auto& c = catalog.course(r.id);
    ev.course_facts.push_back({c.id, c.title, c.credits, c.description});
    const auto& prereqs = catalog.prerequisites(c.id);
    if (!prereqs.empty()) ev.prereq_chain.push_back({c.id, chain_order(catalog, prereqs)});
  }
  return ev;
}

FiveWOneH build_frame(const nlu::ParsedQuery& query, const catalog::StudentProfile&,
                      const catalog::Program& program) {
  FiveWOneH f;
  f.who = program.name;
  f.what = query.goal.empty() ? text::trim(query.raw_text) : query.goal;
  f.when = query.entities.term ? catalog::to_string(*query.entities.term) : std::string(kNotApplicable);
  f.where = query.entities.program_hint ? *query.entities.program_hint : std::string(kNotApplicable);
  f.why = query.entities.skill_targets.empty() ? f.what : text::join(query.entities.skill_targets, ", ");
  f.how = std::string(kHowStatement);
  return f;
}

PromptBundle render_prompt(const EvidenceBundle& evidence, const FiveWOneH& frame, std::string query_id,
                           const Tokenizer& tokenizer) {
  std::vector<std::string> facts;
  for (const auto& f : evidence.course_facts) facts.push_back(render_fact(f));
  std::vector<std::string> chains;
  for (const auto& c : evidence.prereq_chain) chains.push_back(render_chain(c));

  std::string body;
  body += "### STUDENT_QUERY '" + text::trim(evidence.student_query) + "'\n";
  body += "### STUDENT_HISTORY " + (evidence.history.empty() ? std::string("none") : text::join(evidence.history, " ")) + "\n";
  body += "### COURSE_FACT " + text::join(facts, " ") + "\n";
  if (!chains.empty()) body += "### PREREQ_CHAIN " + text::join(chains, " ") + "\n";
  body += "### 5W1H FRAME Who: " + frame.who + " What: " + frame.what + " When: " + frame.when +
          " Where: " + frame.where + " Why: " + frame.why + " How: " + frame.how + "\n";

  PromptBundle bundle;
  bundle.token_count = tokenizer(body);
  bundle.body = std::move(body);
  bundle.n_retrieved = evidence.course_facts.size();
  bundle.query_id = std::move(query_id);
  return bundle;
}

PromptBundle empty_prompt(std::string query_id) {
  PromptBundle b;
  b.query_id = std::move(query_id);
  return b;
}

std::string serialize_full_catalog(const catalog::Catalog& catalog) {
  std::vector<std::string> facts;
  std::vector<std::string> chains;
  for (const auto& [id, c] : catalog.courses()) {
    facts.push_back(render_fact({c.id, c.title, c.credits, c.description}));
    const auto& prereqs = catalog.prerequisites(id);
    if (!prereqs.empty()) chains.push_back(render_chain({id, chain_order(catalog, prereqs)}));
  }
  std::string out = "### COURSE_FACT " + text::join(facts, " ") + "\n";
  if (!chains.empty()) out += "### PREREQ_CHAIN " + text::join(chains, " ") + "\n";
  return out;
}

double footprint_ratio(std::size_t prompt_tokens, std::size_t full_catalog_tokens) {
  if (full_catalog_tokens == 0) throw std::domain_error("footprint_ratio: full catalog token count is zero");
  return static_cast<double>(prompt_tokens) / static_cast<double>(full_catalog_tokens);
}

std::string format_ratio(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", ratio);
  return buf;
}

FootprintLog::FootprintLog(std::filesystem::path path) : path_(std::move(path)) {}

void FootprintLog::record(const PromptBundle& bundle) {
  std::lock_guard<std::mutex> lock(mu_);
  entries_.push_back({bundle.query_id, bundle.n_retrieved, bundle.token_count});
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::app);
    out << nlohmann::json{{"query_id", bundle.query_id},
                          {"n_retrieved", bundle.n_retrieved},
                          {"token_count", bundle.token_count}}
               .dump()
        << "\n";
  }
}

std::vector<FootprintLog::Entry> FootprintLog::entries() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_;
}

nlohmann::json to_json(const PromptBundle& bundle) {
  return {{"query_id", bundle.query_id},
          {"body", bundle.body},
          {"token_count", bundle.token_count},
          {"n_retrieved", bundle.n_retrieved}};
}

nlohmann::json to_json(const FiveWOneH& f) {
  return {{"who", f.who}, {"what", f.what}, {"when", f.when}, {"where", f.where}, {"why", f.why}, {"how", f.how}};
}

}  // namespace advisor::prompt

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "advisor/catalog/catalog.h"

namespace advisor::nlu {

enum class AdvisingIntent { ShortTerm, LongTerm, SkillAligned, OutOfScope };

std::string_view to_string(AdvisingIntent intent);
std::optional<AdvisingIntent> parse_intent(std::string_view s);

// Cue phrases per intent class. A phrase matches when its words appear as a
// contiguous run of the query's words (case-insensitive, punctuation ignored).
struct IntentLexicon {
  std::vector<std::string> long_term;
  std::vector<std::string> skill_aligned;
  std::vector<std::string> short_term;
  // Lead-ins stripped from the first sentence to obtain the goal phrase.
  std::vector<std::string> goal_prefixes;
};

struct SkillTable {
  std::map<std::string, std::string> synonyms;             // surface phrase -> canonical skill
  std::map<std::string, std::vector<std::string>> related;  // skill -> skills in the same class
};

IntentLexicon parse_lexicon(const nlohmann::json& doc);
IntentLexicon load_lexicon(const std::filesystem::path& path);
const IntentLexicon& default_lexicon();

SkillTable parse_skill_table(const nlohmann::json& doc);
SkillTable load_skill_table(const std::filesystem::path& path);
const SkillTable& default_skill_table();

struct ExtractedEntities {
  catalog::CourseSet course_ids;          // every well-formed code in the text
  catalog::CourseSet unknown_course_ids;  // subset absent from the catalog
  std::set<std::string> skills;           // canonical skills named in the text
  // Named skills in order of appearance, each followed by its related skills.
  std::vector<std::string> skill_targets;
  std::optional<int> credit_cap;
  std::optional<catalog::TermLabel> term;
  std::optional<std::string> program_hint;

  bool empty() const;
};

struct ParsedQuery {
  std::string raw_text;
  AdvisingIntent intent = AdvisingIntent::OutOfScope;
  ExtractedEntities entities;
  std::string goal;
};

// Priority when several cue classes match: LongTerm > SkillAligned > ShortTerm.
// OutOfScope when none does.
AdvisingIntent classify_intent(std::string_view text, const IntentLexicon& lexicon = default_lexicon());

ExtractedEntities extract_entities(std::string_view text, const catalog::Catalog& catalog,
                                   const catalog::TermLabel& reference_term,
                                   const SkillTable& skills = default_skill_table());

// First sentence of `text` without a leading request phrase or trailing punctuation.
std::string goal_phrase(std::string_view text, const IntentLexicon& lexicon = default_lexicon());

// Throws std::invalid_argument on blank text.
ParsedQuery parse_query(std::string_view text, const catalog::Catalog& catalog,
                        const catalog::TermLabel& reference_term,
                        const IntentLexicon& lexicon = default_lexicon(),
                        const SkillTable& skills = default_skill_table());

// Program whose id or name matches the hint word-for-word, if any.
std::optional<std::string> resolve_program(const catalog::Catalog& catalog, std::string_view hint);

nlohmann::json to_json(const ExtractedEntities& e);
nlohmann::json to_json(const ParsedQuery& q);

}  // namespace advisor::nlu

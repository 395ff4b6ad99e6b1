#include "advisor/nlu/nlu.h"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "advisor/common/errors.h"
#include "advisor/common/text.h"
#include "advisor/generated/defaults.h"

namespace advisor::nlu {

using nlohmann::json;

namespace {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// Index of the first occurrence of `needle` as a contiguous run in `hay`.
std::optional<std::size_t> find_run(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > hay.size()) return std::nullopt;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<std::ptrdiff_t>(i))) return i;
  }
  return std::nullopt;
}

bool any_cue(const std::vector<std::string>& words, const std::vector<std::string>& cues) {
  return std::any_of(cues.begin(), cues.end(),
                     [&](const std::string& cue) { return find_run(words, text::words(cue)).has_value(); });
}

// Curly apostrophes become ASCII so "I’d" and "I'd" read the same.
std::string normalize_quotes(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
        static_cast<unsigned char>(s[i + 1]) == 0x80 &&
        (static_cast<unsigned char>(s[i + 2]) == 0x98 || static_cast<unsigned char>(s[i + 2]) == 0x99)) {
      out.push_back('\'');
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

std::optional<int> positive_int(const std::string& digits) {
  try {
    const int v = std::stoi(digits);
    if (v >= 1) return v;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

std::optional<int> find_credit_cap(const std::string& lower) {
  static const std::regex patterns[] = {
      std::regex(R"(\bmax(?:imum)?\.?\s+(?:of\s+)?(\d+)\s*(?:credits?|credit\s+hours|cr)\b)"),
      std::regex(R"(\b(\d+)[\s-]*credits?[\s-]+(?:cap|max|maximum|limit)\b)"),
      std::regex(R"(\b(?:up\s+to|no\s+more\s+than|at\s+most|cap\s+of|limit\s+of)\s+(\d+)\s*credits?\b)"),
  };
  for (const auto& re : patterns) {
    std::smatch m;
    if (std::regex_search(lower, m, re)) return positive_int(m[1].str());
  }
  return std::nullopt;
}

catalog::TermLabel next_with_season(const catalog::TermLabel& from, catalog::Season season) {
  const catalog::Calendar all{catalog::Season::Spring, catalog::Season::Summer, catalog::Season::Fall};
  auto t = catalog::successor(from, all);
  while (t.season != season) t = catalog::successor(t, all);
  return t;
}

std::optional<catalog::TermLabel> find_term(const std::string& lower, const catalog::TermLabel& reference,
                                            const catalog::Calendar& calendar) {
  static const std::regex explicit_term(R"(\b(spring|summer|fall|autumn)[\s-]*(\d{4})\b)");
  static const std::regex next_season(R"(\bnext\s+(spring|summer|fall|autumn)\b)");
  static const std::regex this_season(R"(\bthis\s+(spring|summer|fall|autumn)\b)");
  static const std::regex next_term(R"(\bnext[\s-]+(?:semester|term)\b)");
  static const std::regex this_term(R"(\b(?:this|current)[\s-]+(?:semester|term)\b)");
  std::smatch m;
  if (std::regex_search(lower, m, explicit_term)) {
    return catalog::TermLabel{*catalog::parse_season(m[1].str()), std::stoi(m[2].str())};
  }
  if (std::regex_search(lower, m, next_season)) {
    return next_with_season(reference, *catalog::parse_season(m[1].str()));
  }
  if (std::regex_search(lower, m, this_season)) {
    const auto season = *catalog::parse_season(m[1].str());
    catalog::TermLabel same_year{season, reference.year};
    return same_year >= reference ? same_year : next_with_season(reference, season);
  }
  if (std::regex_search(lower, m, next_term)) return catalog::successor(reference, calendar);
  if (std::regex_search(lower, m, this_term)) return reference;
  return std::nullopt;
}

std::string words_key(std::string_view s) { return text::join(text::words(s), " "); }

std::optional<std::string> find_program_hint(const std::string& raw, const catalog::Catalog& catalog) {
  static const std::regex degree_phrase(R"(\b([A-Za-z]{2,}(?:-[A-Za-z]{2,})?)\s+(minor|major|certificate)\b)",
                                        std::regex::icase);
  static const std::set<std::string> stop{"the", "my", "a", "an", "this", "that", "our", "your"};
  std::smatch m;
  auto begin = raw.cbegin();
  while (std::regex_search(begin, raw.cend(), m, degree_phrase)) {
    if (!stop.count(text::to_lower(m[1].str()))) return m[0].str();
    begin = m[0].second;
  }
  const auto query_words = text::words(raw);
  for (const auto& [id, program] : catalog.programs()) {
    const auto id_words = text::words(id);
    auto at = find_run(query_words, id_words);
    if (!at) continue;
    // Recover the surface form, e.g. "CS-BS" rather than "cs bs".
    std::string pattern;
    for (std::size_t i = 0; i < id_words.size(); ++i) {
      if (i) pattern += "[^A-Za-z0-9]+";
      pattern += id_words[i];
    }
    std::smatch surface;
    if (std::regex_search(raw, surface, std::regex("\\b" + pattern + "\\b", std::regex::icase))) {
      return surface[0].str();
    }
    return id;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(AdvisingIntent intent) {
  switch (intent) {
    case AdvisingIntent::ShortTerm:
      return "ShortTerm";
    case AdvisingIntent::LongTerm:
      return "LongTerm";
    case AdvisingIntent::SkillAligned:
      return "SkillAligned";
    case AdvisingIntent::OutOfScope:
      return "OutOfScope";
  }
  return "OutOfScope";
}

std::optional<AdvisingIntent> parse_intent(std::string_view s) {
  for (auto i : {AdvisingIntent::ShortTerm, AdvisingIntent::LongTerm, AdvisingIntent::SkillAligned,
                 AdvisingIntent::OutOfScope}) {
    if (to_string(i) == s) return i;
  }
  return std::nullopt;
}

IntentLexicon parse_lexicon(const json& doc) {
  try {
    IntentLexicon lex;
    const auto& intents = doc.at("intents");
    lex.long_term = intents.at("LongTerm").get<std::vector<std::string>>();
    lex.skill_aligned = intents.at("SkillAligned").get<std::vector<std::string>>();
    lex.short_term = intents.at("ShortTerm").get<std::vector<std::string>>();
    lex.goal_prefixes = doc.value("goal_prefixes", std::vector<std::string>{});
    // Longest lead-in first so "please suggest my" wins over "please".
    std::stable_sort(lex.goal_prefixes.begin(), lex.goal_prefixes.end(),
                     [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
    return lex;
  } catch (const json::exception& e) {
    throw ParseError(std::string("intent lexicon: ") + e.what());
  }
}

IntentLexicon load_lexicon(const std::filesystem::path& path) { return parse_lexicon(read_json(path)); }

const IntentLexicon& default_lexicon() {
  static const IntentLexicon lex = parse_lexicon(json::parse(generated::kDefaultLexiconJson));
  return lex;
}

SkillTable parse_skill_table(const json& doc) {
  try {
    SkillTable table;
    const auto synonyms = doc.value("synonyms", json::object());
    const auto related = doc.value("related", json::object());
    for (const auto& [k, v] : synonyms.items()) {
      table.synonyms[words_key(k)] = v.get<std::string>();
    }
    for (const auto& [k, v] : related.items()) {
      table.related[k] = v.get<std::vector<std::string>>();
    }
    return table;
  } catch (const json::exception& e) {
    throw ParseError(std::string("skill table: ") + e.what());
  }
}

SkillTable load_skill_table(const std::filesystem::path& path) { return parse_skill_table(read_json(path)); }

const SkillTable& default_skill_table() {
  static const SkillTable table = parse_skill_table(json::parse(generated::kDefaultSkillsJson));
  return table;
}

bool ExtractedEntities::empty() const {
  return course_ids.empty() && skills.empty() && !credit_cap && !term && !program_hint;
}

AdvisingIntent classify_intent(std::string_view text, const IntentLexicon& lexicon) {
  const auto words = text::words(normalize_quotes(text));
  if (any_cue(words, lexicon.long_term)) return AdvisingIntent::LongTerm;
  if (any_cue(words, lexicon.skill_aligned)) return AdvisingIntent::SkillAligned;
  if (any_cue(words, lexicon.short_term)) return AdvisingIntent::ShortTerm;
  return AdvisingIntent::OutOfScope;
}

ExtractedEntities extract_entities(std::string_view text_in, const catalog::Catalog& catalog,
                                   const catalog::TermLabel& reference_term, const SkillTable& skills) {
  ExtractedEntities out;
  const std::string raw = normalize_quotes(text_in);
  const std::string lower = text::to_lower(raw);

  const std::regex code_search("\\b(?:" + catalog.header().course_code_pattern + ")\\b", std::regex::icase);
  for (auto it = std::sregex_iterator(raw.begin(), raw.end(), code_search); it != std::sregex_iterator(); ++it) {
    const auto code = text::to_upper(it->str());
    if (!catalog.matches_course_code(code)) continue;
    out.course_ids.insert(code);
    if (!catalog.has_course(code)) out.unknown_course_ids.insert(code);
  }

  // Skills: catalog vocabulary plus synonyms, ordered by first appearance.
  const auto words = text::words(raw);
  std::vector<std::pair<std::size_t, std::string>> found;
  for (const auto& skill : catalog.skill_vocabulary()) {
    if (auto at = find_run(words, text::words(skill))) found.emplace_back(*at, skill);
  }
  for (const auto& [surface, canonical] : skills.synonyms) {
    if (auto at = find_run(words, text::words(surface))) found.emplace_back(*at, canonical);
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  auto add_target = [&](const std::string& s) {
    if (std::find(out.skill_targets.begin(), out.skill_targets.end(), s) == out.skill_targets.end()) {
      out.skill_targets.push_back(s);
    }
  };
  for (const auto& [pos, skill] : found) {
    out.skills.insert(skill);
    add_target(skill);
    if (auto it = skills.related.find(skill); it != skills.related.end()) {
      for (const auto& r : it->second) add_target(r);
    }
  }

  out.credit_cap = find_credit_cap(lower);
  out.term = find_term(lower, reference_term, catalog.header().calendar);
  out.program_hint = find_program_hint(raw, catalog);
  return out;
}

std::string goal_phrase(std::string_view text_in, const IntentLexicon& lexicon) {
  std::string s = text::trim(normalize_quotes(text_in));
  // First sentence: cut at ". ", "? " or "! ".
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if ((s[i] == '.' || s[i] == '?' || s[i] == '!') && s[i + 1] == ' ') {
      s = s.substr(0, i + 1);
      break;
    }
  }
  const std::string lower = text::to_lower(s);
  for (const auto& prefix : lexicon.goal_prefixes) {
    const auto p = text::to_lower(prefix);
    if (lower.size() > p.size() && lower.compare(0, p.size(), p) == 0 && lower[p.size()] == ' ') {
      s = s.substr(p.size() + 1);
      break;
    }
  }
  while (!s.empty() && (s.back() == '.' || s.back() == '?' || s.back() == '!' || s.back() == ' ')) s.pop_back();
  return text::trim(s);
}

ParsedQuery parse_query(std::string_view text_in, const catalog::Catalog& catalog,
                        const catalog::TermLabel& reference_term, const IntentLexicon& lexicon,
                        const SkillTable& skills) {
  if (text::trim(text_in).empty()) throw std::invalid_argument("query text is empty");
  ParsedQuery q;
  q.raw_text = std::string(text_in);
  q.intent = classify_intent(text_in, lexicon);
  q.entities = extract_entities(text_in, catalog, reference_term, skills);
  q.goal = goal_phrase(text_in, lexicon);
  return q;
}

std::optional<std::string> resolve_program(const catalog::Catalog& catalog, std::string_view hint) {
  const auto key = words_key(hint);
  if (key.empty()) return std::nullopt;
  for (const auto& [id, program] : catalog.programs()) {
    if (words_key(id) == key || words_key(program.name) == key) return id;
  }
  return std::nullopt;
}

json to_json(const ExtractedEntities& e) {
  json doc{{"course_ids", std::vector<std::string>(e.course_ids.begin(), e.course_ids.end())},
           {"unknown_course_ids", std::vector<std::string>(e.unknown_course_ids.begin(), e.unknown_course_ids.end())},
           {"skills", std::vector<std::string>(e.skills.begin(), e.skills.end())},
           {"skill_targets", e.skill_targets},
           {"credit_cap", nullptr},
           {"term", nullptr},
           {"program_hint", nullptr}};
  if (e.credit_cap) doc["credit_cap"] = *e.credit_cap;
  if (e.term) doc["term"] = catalog::to_string(*e.term);
  if (e.program_hint) doc["program_hint"] = *e.program_hint;
  return doc;
}

json to_json(const ParsedQuery& q) {
  return {{"raw_text", q.raw_text},
          {"intent", std::string(to_string(q.intent))},
          {"goal", q.goal},
          {"entities", to_json(q.entities)}};
}

}  // namespace advisor::nlu

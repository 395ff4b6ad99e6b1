#include "advisor/catalog/term.h"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "advisor/common/errors.h"
#include "advisor/common/text.h"

namespace advisor::catalog {

std::string_view season_name(Season s) {
  switch (s) {
    case Season::Spring:
      return "Spring";
    case Season::Summer:
      return "Summer";
    case Season::Fall:
      return "Fall";
  }
  return "Fall";
}

std::optional<Season> parse_season(std::string_view name) {
  const auto lower = text::to_lower(name);
  if (lower == "spring") return Season::Spring;
  if (lower == "summer") return Season::Summer;
  if (lower == "fall" || lower == "autumn") return Season::Fall;
  return std::nullopt;
}

TermLabel successor(const TermLabel& t, const Calendar& calendar) {
  if (calendar.empty()) throw ConfigError("calendar has no seasons");
  TermLabel next = t;
  for (int step = 0; step < 6; ++step) {
    if (next.season == Season::Fall) {
      next.season = Season::Spring;
      ++next.year;
    } else {
      next.season = static_cast<Season>(static_cast<int>(next.season) + 1);
    }
    if (std::find(calendar.begin(), calendar.end(), next.season) != calendar.end()) return next;
  }
  throw ConfigError("calendar has no seasons");
}

std::string to_string(const TermLabel& t) {
  return std::string(season_name(t.season)) + " " + std::to_string(t.year);
}

TermLabel parse_term(std::string_view s) {
  const std::string trimmed = text::trim(s);
  std::size_t i = 0;
  while (i < trimmed.size() && std::isalpha(static_cast<unsigned char>(trimmed[i]))) ++i;
  const auto season = parse_season(std::string_view(trimmed).substr(0, i));
  while (i < trimmed.size() && (trimmed[i] == ' ' || trimmed[i] == '-' || trimmed[i] == '_')) ++i;
  int year = 0;
  const char* first = trimmed.data() + i;
  const char* last = trimmed.data() + trimmed.size();
  auto [ptr, ec] = std::from_chars(first, last, year);
  if (!season || ec != std::errc{} || ptr != last || first == last) {
    throw ParseError("invalid term label '" + std::string(s) + "'");
  }
  return TermLabel{*season, year};
}

}  // namespace advisor::catalog

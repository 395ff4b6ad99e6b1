#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace advisor::catalog {

// Ordered by position inside a calendar year.
enum class Season { Spring = 0, Summer = 1, Fall = 2 };

std::string_view season_name(Season s);
std::optional<Season> parse_season(std::string_view name);  // case-insensitive

struct TermLabel {
  Season season = Season::Fall;
  int year = 0;

  // Chronological: year first, then position inside the year.
  std::strong_ordering operator<=>(const TermLabel& o) const {
    if (auto c = year <=> o.year; c != 0) return c;
    return static_cast<int>(season) <=> static_cast<int>(o.season);
  }
  bool operator==(const TermLabel&) const = default;
};

using Calendar = std::vector<Season>;

inline Calendar default_calendar() { return {Season::Fall, Season::Spring}; }

// Smallest term strictly after `t` whose season is in `calendar`.
// Throws ConfigError on an empty calendar.
TermLabel successor(const TermLabel& t, const Calendar& calendar = default_calendar());

// "Spring 2026"
std::string to_string(const TermLabel& t);

// Accepts "Spring 2026", "spring-2026" and "Spring2026". Throws ParseError.
TermLabel parse_term(std::string_view s);

}  // namespace advisor::catalog

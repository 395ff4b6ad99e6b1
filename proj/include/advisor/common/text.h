#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace advisor::text {

std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
std::string trim(std::string_view s);

// Lowercased maximal runs of ASCII letters and digits. Every other byte,
// including UTF-8 continuation bytes, separates words.
std::vector<std::string> words(std::string_view s);

// Maximal runs of non-whitespace characters.
std::vector<std::string_view> whitespace_runs(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

template <typename Range>
std::string join_range(const Range& parts, std::string_view sep) {
  std::string out;
  bool first = true;
  for (const auto& p : parts) {
    if (!first) out.append(sep);
    out.append(p);
    first = false;
  }
  return out;
}

// 64-bit FNV-1a. Used for content-addressed refs and feature hashing.
std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t v);

}  // namespace advisor::text

#include "advisor/eval/metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "advisor/common/text.h"

namespace advisor::eval {

catalog::CourseSet extract_course_ids(std::string_view text, const std::regex& pattern) {
  catalog::CourseSet out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!std::isalnum(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
    auto run = text::to_upper(text.substr(i, j - i));
    if (std::regex_match(run, pattern)) out.insert(std::move(run));
    i = j;
  }
  return out;
}

catalog::CourseSet extract_course_ids(std::string_view text) {
  static const std::regex pattern{std::string(catalog::kDefaultCourseCodePattern)};
  return extract_course_ids(text, pattern);
}

Prf course_prf(const catalog::CourseSet& recommended, const catalog::CourseSet& truth) {
  if (recommended.empty() && truth.empty()) return {1.0, 1.0, 1.0};
  if (recommended.empty()) return {0.0, 0.0, 0.0};
  if (truth.empty()) return {0.0, 1.0, 0.0};
  std::size_t hits = 0;
  for (const auto& c : recommended) hits += truth.count(c);
  Prf r;
  r.precision = static_cast<double>(hits) / static_cast<double>(recommended.size());
  r.recall = static_cast<double>(hits) / static_cast<double>(truth.size());
  r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double stddev(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  const double m = mean(xs);
  double sq = 0.0;
  for (double x : xs) sq += (x - m) * (x - m);
  return std::sqrt(sq / static_cast<double>(xs.size()));
}

}  // namespace advisor::eval

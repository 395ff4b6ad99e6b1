#pragma once

#include <regex>
#include <string_view>
#include <vector>

#include "advisor/catalog/catalog.h"

namespace advisor::eval {

// Alphanumeric runs of `text` that match `pattern` in full once uppercased.
catalog::CourseSet extract_course_ids(std::string_view text, const std::regex& pattern);
catalog::CourseSet extract_course_ids(std::string_view text);  // default course-code pattern

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Both empty -> (1,1,1); only recommended empty -> (0,0,0); only truth empty
// -> (0,1,0).
Prf course_prf(const catalog::CourseSet& recommended, const catalog::CourseSet& truth);

double mean(const std::vector<double>& xs);
// Population standard deviation.
double stddev(const std::vector<double>& xs);

}  // namespace advisor::eval

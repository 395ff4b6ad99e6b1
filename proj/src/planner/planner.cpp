#include "advisor/planner/planner.h"

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>

#include "advisor/common/errors.h"
#include "advisor/common/text.h"
#include "advisor/rules/rule_engine.h"

namespace advisor::planner {

namespace {

int credits_of(const Catalog& catalog, const CourseSet& courses) {
  int total = 0;
  for (const auto& c : courses) total += catalog.course(c).credits;
  return total;
}

CourseSet descendants_in(const Catalog& catalog, std::string_view course, const CourseSet& need) {
  CourseSet seen;
  std::vector<CourseId> frontier(catalog.dependents(course).begin(), catalog.dependents(course).end());
  while (!frontier.empty()) {
    auto next = std::move(frontier.back());
    frontier.pop_back();
    if (!seen.insert(next).second) continue;
    for (const auto& d : catalog.dependents(next)) frontier.push_back(d);
  }
  CourseSet out;
  for (const auto& d : seen) {
    if (need.count(d)) out.insert(d);
  }
  return out;
}

// Working state of one planning run.
struct PlannerState {
  CourseSet need;
  CourseSet taken;
  TermLabel semester;
  Roadmap plan;
};

enum class TermOutcome { Commit, Skip, Stuck };

struct TermPlan {
  TermOutcome outcome = TermOutcome::Stuck;
  CourseSet pick;
  bool overflow = false;
};

class TermPlanner {
 public:
  TermPlanner(const Catalog& catalog, const PlannerConfig& config, const PlannerState& state,
              std::map<CourseId, int> recommended_year)
      : catalog_(catalog),
        config_(config),
        state_(state),
        cap_(config.cap_for(state.semester)),
        recommended_year_(std::move(recommended_year)) {}

  TermPlan plan() {
    const CourseSet prereq_eligible = eligible_set(catalog_, state_.need, state_.taken);
    CourseSet elig;
    for (const auto& c : prereq_eligible) {
      if (offered(c)) elig.insert(c);
    }

    if (!elig.empty()) {
      auto packed = greedy_pack(catalog_, elig, state_.need, cap_, config_.weight_mode);
      auto result = complete_pick(packed, elig);
      if (!result.pick.empty()) return result;
    }

    auto unlocked = unlock_branch();
    if (!unlocked.pick.empty()) return unlocked;

    // Something is waiting only on the season: let the calendar advance.
    if (!prereq_eligible.empty() || season_blocked_) return TermPlan{TermOutcome::Skip, {}, false};
    return TermPlan{TermOutcome::Stuck, {}, false};
  }

 private:
  bool offered(const CourseId& c) const {
    return catalog_.course(c).terms_offered.count(state_.semester.season) > 0;
  }

  bool prereqs_ok(const CourseId& c) const { return rules::prereqs_met(catalog_, c, state_.taken).met; }

  bool schedulable(const CourseId& c) const {
    return !state_.taken.count(c) && prereqs_ok(c) && offered(c);
  }

  // Co-requisite closure of `c`, excluding courses already taken.
  CourseSet coreq_group(const CourseId& c) const {
    CourseSet group{c};
    std::vector<CourseId> frontier{c};
    while (!frontier.empty()) {
      auto next = std::move(frontier.back());
      frontier.pop_back();
      for (const auto& partner : catalog_.corequisites(next)) {
        if (state_.taken.count(partner)) continue;
        if (group.insert(partner).second) frontier.push_back(partner);
      }
    }
    return group;
  }

  std::optional<CourseSet> schedulable_group(const CourseId& c) const {
    auto group = coreq_group(c);
    for (const auto& member : group) {
      if (!schedulable(member)) return std::nullopt;
    }
    return group;
  }

  // Co-requisite augmentation, prerequisite check, trim and pad.
  TermPlan complete_pick(const PackResult& packed, const CourseSet& elig) const {
    const auto order = priority_order(catalog_, packed.courses, state_.need, config_.weight_mode);

    // Groups in priority order; a member whose partners cannot join this term is dropped.
    std::vector<CourseSet> groups;
    CourseSet grouped;
    for (const auto& c : order) {
      if (grouped.count(c)) continue;
      auto group = schedulable_group(c);
      if (!group) continue;
      grouped.insert(group->begin(), group->end());
      groups.push_back(std::move(*group));
    }

    // Every member was schedulable against `taken`, so no prerequisite is
    // missing here; alternatives were already honoured by prereqs_met.

    // Trim: cap first. Lower-priority groups that no longer fit are dropped;
    // if none fits, the leading group stands alone as an overflow block.
    CourseSet pick;
    for (const auto& group : groups) {
      if (credits_of(catalog_, pick) + credits_of(catalog_, group) <= cap_) {
        pick.insert(group.begin(), group.end());
      }
    }
    if (pick.empty() && !groups.empty()) pick = groups.front();
    const bool overflow = credits_of(catalog_, pick) > cap_;

    // Pad towards the minimum with the lowest-id eligible leftovers that fit.
    if (!overflow) {
      for (const auto& c : elig) {
        if (static_cast<int>(pick.size()) >= config_.min_courses_per_term) break;
        if (pick.count(c)) continue;
        auto group = schedulable_group(c);
        if (!group) continue;
        CourseSet extra;
        for (const auto& m : *group) {
          if (!pick.count(m)) extra.insert(m);
        }
        if (credits_of(catalog_, pick) + credits_of(catalog_, extra) > cap_) continue;
        pick.insert(extra.begin(), extra.end());
      }
    }
    return TermPlan{TermOutcome::Commit, std::move(pick), overflow};
  }

  // Nothing in need is schedulable: take the nearest schedulable courses
  // among the unmet requirements of the first seed that has any.
  TermPlan unlock_branch() {
    std::vector<CourseId> seeds(state_.need.begin(), state_.need.end());
    std::stable_sort(seeds.begin(), seeds.end(), [&](const CourseId& a, const CourseId& b) {
      return recommended_year_.at(a) < recommended_year_.at(b);
    });
    for (const auto& seed : seeds) {
      auto unlockers = unlockers_of(seed);
      if (unlockers.empty()) continue;
      CourseSet pick;
      for (const auto& group : unlockers) {
        if (credits_of(catalog_, pick) + credits_of(catalog_, group) > cap_) continue;
        pick.insert(group.begin(), group.end());
      }
      bool overflow = false;
      if (pick.empty()) {
        pick = unlockers.front();
        overflow = true;
      }
      return TermPlan{TermOutcome::Commit, std::move(pick), overflow};
    }
    return TermPlan{};
  }

  // Breadth-first over unmet requirements of `seed` (missing prerequisites,
  // their not-yet-taken alternatives, and co-requisite partners), returning
  // schedulable co-requisite groups nearest-first, ties by id.
  std::vector<CourseSet> unlockers_of(const CourseId& seed) {
    std::vector<CourseSet> out;
    CourseSet visited{seed};
    CourseSet used;
    std::vector<CourseId> layer{seed};
    while (!layer.empty()) {
      CourseSet next;
      for (const auto& node : layer) {
        for (const auto& child : requirements(node)) {
          if (visited.insert(child).second) next.insert(child);
        }
      }
      for (const auto& c : next) {
        if (used.count(c)) continue;
        if (auto group = schedulable_group(c)) {
          used.insert(group->begin(), group->end());
          out.push_back(std::move(*group));
        } else if (!state_.taken.count(c) && prereqs_ok(c) && !offered(c)) {
          season_blocked_ = true;
        }
      }
      layer.assign(next.begin(), next.end());
    }
    return out;
  }

  CourseSet requirements(const CourseId& node) const {
    CourseSet out;
    if (state_.taken.count(node)) return out;
    for (const auto& p : catalog_.prerequisites(node)) {
      if (state_.taken.count(p)) continue;
      const auto& alts = catalog_.alternatives(p);
      if (std::any_of(alts.begin(), alts.end(), [&](const CourseId& a) { return state_.taken.count(a) > 0; })) {
        continue;
      }
      out.insert(p);
      out.insert(alts.begin(), alts.end());
    }
    if (prereqs_ok(node)) {
      for (const auto& partner : catalog_.corequisites(node)) {
        if (!state_.taken.count(partner)) out.insert(partner);
      }
    }
    return out;
  }

  const Catalog& catalog_;
  const PlannerConfig& config_;
  const PlannerState& state_;
  const int cap_;
  std::map<CourseId, int> recommended_year_;
  bool season_blocked_ = false;
};

std::vector<std::string> sorted_list(const CourseSet& s) { return {s.begin(), s.end()}; }

}  // namespace

int PlannerConfig::cap_for(const TermLabel& term) const {
  if (auto it = term_caps.find(term); it != term_caps.end()) return it->second;
  if (auto it = season_caps.find(term.season); it != season_caps.end()) return it->second;
  return credit_cap;
}

int unlock_weight(const Catalog& catalog, std::string_view course, const CourseSet& need, WeightMode mode) {
  if (mode == WeightMode::Transitive) {
    catalog.course(course);
    return static_cast<int>(descendants_in(catalog, course, need).size());
  }
  return static_cast<int>(catalog::direct_dependents(catalog, course, need).size());
}

CourseSet eligible_set(const Catalog& catalog, const CourseSet& need, const CourseSet& taken) {
  CourseSet out;
  for (const auto& c : need) {
    if (rules::prereqs_met(catalog, c, taken).met) out.insert(c);
  }
  return out;
}

std::vector<CourseId> priority_order(const Catalog& catalog, const CourseSet& courses,
                                     const CourseSet& need, WeightMode mode) {
  std::vector<std::pair<int, CourseId>> ranked;
  ranked.reserve(courses.size());
  for (const auto& c : courses) ranked.emplace_back(unlock_weight(catalog, c, need, mode), c);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<CourseId> out;
  out.reserve(ranked.size());
  for (auto& [w, c] : ranked) out.push_back(std::move(c));
  return out;
}

PackResult greedy_pack(const Catalog& catalog, const CourseSet& elig, const CourseSet& need, int cap,
                       WeightMode mode) {
  PackResult result;
  const auto order = priority_order(catalog, elig, need, mode);
  int total = 0;
  for (const auto& c : order) {
    const int credits = catalog.course(c).credits;
    if (total + credits <= cap) {
      result.courses.insert(c);
      total += credits;
    }
  }
  if (result.courses.empty() && !order.empty()) {
    result.courses.insert(order.front());
    result.overflow = true;
  }
  return result;
}

Roadmap plan_roadmap(const Catalog& catalog, std::string_view program, const CourseSet& taken,
                     const PlannerConfig& config) {
  const auto& members = catalog.program_courses(program);
  if (config.min_courses_per_term < 1) throw ConfigError("min_courses_per_term must be >= 1");
  if (config.max_terms < 1) throw ConfigError("max_terms must be >= 1");
  if (config.calendar.empty()) throw ConfigError("calendar has no seasons");

  PlannerState state;
  state.taken = taken;
  state.semester = config.start;
  std::map<CourseId, int> recommended_year;
  for (const auto& row : members) {
    recommended_year[row.course_id] = row.recommended_year;
    if (!taken.count(row.course_id)) state.need.insert(row.course_id);
  }
  if (state.need.empty()) return {};

  if (auto cycles = rules::detect_cycles(catalog); !cycles.empty()) {
    throw InfeasiblePlan("prerequisite cycle: " + text::join(cycles.front(), " <- "), cycles.front());
  }

  int consecutive_skips = 0;
  for (int term_index = 0; !state.need.empty(); ++term_index) {
    if (term_index >= config.max_terms) {
      throw InfeasiblePlan("exceeded max_terms (" + std::to_string(config.max_terms) + ") with " +
                               std::to_string(state.need.size()) + " courses unscheduled",
                           sorted_list(state.need));
    }
    const int cap = config.cap_for(state.semester);
    int smallest = std::numeric_limits<int>::max();
    for (const auto& c : state.need) smallest = std::min(smallest, catalog.course(c).credits);
    if (cap < smallest) {
      throw InfeasiblePlan("credit cap " + std::to_string(cap) + " for " + catalog::to_string(state.semester) +
                               " is below the smallest remaining course (" + std::to_string(smallest) +
                               " credits)",
                           sorted_list(state.need));
    }

    TermPlanner term_planner(catalog, config, state, recommended_year);
    auto term = term_planner.plan();
    switch (term.outcome) {
      case TermOutcome::Stuck:
        throw InfeasiblePlan("no schedulable course in " + catalog::to_string(state.semester),
                             sorted_list(state.need));
      case TermOutcome::Skip:
        if (++consecutive_skips >= static_cast<int>(config.calendar.size())) {
          throw InfeasiblePlan("remaining courses are never offered in the calendar", sorted_list(state.need));
        }
        break;
      case TermOutcome::Commit: {
        consecutive_skips = 0;
        SemesterBlock block;
        block.term = state.semester;
        block.courses = term.pick;
        block.credits = credits_of(catalog, term.pick);
        block.overflow = term.overflow;
        block.below_minimum = static_cast<int>(term.pick.size()) < config.min_courses_per_term;
        state.plan.blocks.push_back(block);
        state.plan.covered.insert(term.pick.begin(), term.pick.end());
        state.taken.insert(term.pick.begin(), term.pick.end());
        for (const auto& c : term.pick) state.need.erase(c);
        break;
      }
    }
    state.semester = catalog::successor(state.semester, config.calendar);
  }
  return state.plan;
}

nlohmann::json to_json(const SemesterBlock& block) {
  nlohmann::json flags = nlohmann::json::array();
  if (block.overflow) flags.push_back("overflow");
  if (block.below_minimum) flags.push_back("below-minimum");
  return {{"term", catalog::to_string(block.term)},
          {"courses", sorted_list(block.courses)},
          {"credits", block.credits},
          {"flags", flags}};
}

nlohmann::json to_json(const Roadmap& roadmap) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : roadmap.blocks) blocks.push_back(to_json(b));
  return {{"blocks", blocks}, {"covered", sorted_list(roadmap.covered)}};
}

std::string serialize_roadmap(const Roadmap& roadmap) { return to_json(roadmap).dump(2) + "\n"; }

std::string render_roadmap(const Roadmap& roadmap) {
  std::ostringstream out;
  if (roadmap.blocks.empty()) out << "(nothing left to schedule)\n";
  for (const auto& b : roadmap.blocks) {
    out << catalog::to_string(b.term) << "  [" << b.credits << " cr]  "
        << text::join(sorted_list(b.courses), " ");
    if (b.overflow) out << "  (overflow)";
    if (b.below_minimum) out << "  (below minimum)";
    out << "\n";
  }
  return out.str();
}

}  // namespace advisor::planner

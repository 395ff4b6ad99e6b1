#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace advisor {

// Root of every error the advising pipeline raises. `kind()` is a stable
// machine-readable tag used by the CLI and the HTTP layer.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define ADVISOR_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  };

ADVISOR_DEFINE_ERROR(ParseError)
ADVISOR_DEFINE_ERROR(UnknownCourse)
ADVISOR_DEFINE_ERROR(UnknownProgram)
ADVISOR_DEFINE_ERROR(UnknownStudent)
ADVISOR_DEFINE_ERROR(EmptyEvidence)
ADVISOR_DEFINE_ERROR(TransportError)
ADVISOR_DEFINE_ERROR(ContractViolation)
ADVISOR_DEFINE_ERROR(DimensionMismatch)
ADVISOR_DEFINE_ERROR(ProviderError)
ADVISOR_DEFINE_ERROR(ConfigError)

#undef ADVISOR_DEFINE_ERROR

// Raised when a catalog violates an invariant. `keys` names the offending
// records so callers can point at them.
class IntegrityError : public Error {
 public:
  IntegrityError(const std::string& message, std::vector<std::string> keys)
      : Error("IntegrityError", message), keys_(std::move(keys)) {}

  const std::vector<std::string>& keys() const noexcept { return keys_; }

 private:
  std::vector<std::string> keys_;
};

// The planner could not make progress. `stuck` lists the courses still
// unscheduled when it gave up.
class InfeasiblePlan : public Error {
 public:
  InfeasiblePlan(const std::string& message, std::vector<std::string> stuck)
      : Error("InfeasiblePlan", message), stuck_(std::move(stuck)) {}

  const std::vector<std::string>& stuck() const noexcept { return stuck_; }

 private:
  std::vector<std::string> stuck_;
};

// Wraps a failure inside advise(); `stage` names where it happened and the
// partial provenance record has already been persisted under `provenance_ref`.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& message, std::string provenance_ref)
      : Error("PipelineError", message),
        stage_(std::move(stage)),
        provenance_ref_(std::move(provenance_ref)) {}

  const std::string& stage() const noexcept { return stage_; }
  const std::string& provenance_ref() const noexcept { return provenance_ref_; }

 private:
  std::string stage_;
  std::string provenance_ref_;
};

}  // namespace advisor

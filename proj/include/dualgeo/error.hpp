#pragma once

#include <stdexcept>
#include <string>

namespace dualgeo {

/// Input rejected by a precondition check. `field` names the offending
/// argument so front ends can report `error: <field>: <reason>`.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& reason)
      : std::invalid_argument(field + ": " + reason),
        field_(std::move(field)),
        reason_(reason) {}

  const std::string& field() const noexcept { return field_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string field_;
  std::string reason_;
};

/// An iterative method (quadrature, shooting, refinement) failed to reach
/// its tolerance within its iteration budget.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(std::string what_, const std::string& reason)
      : std::runtime_error(what_ + ": " + reason),
        what_name_(std::move(what_)),
        reason_(reason) {}

  const std::string& field() const noexcept { return what_name_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string what_name_;
  std::string reason_;
};

inline void require(bool condition, const char* field, const char* reason) {
  if (!condition) throw ValidationError(field, reason);
}

}  // namespace dualgeo

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ness {

/// Outcome of a stationary-state solve. Every solver failure maps to exactly
/// one of these; `Ok` is the only status that carries a usable state.
enum class Status {
  Ok,
  NonUnique,
  ClosureViolation,
  VacuumVanishes,
  SingularEigenbasis,
};

constexpr std::string_view to_string(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::NonUnique: return "non_unique";
    case Status::ClosureViolation: return "closure_violation";
    case Status::VacuumVanishes: return "vacuum_vanishes";
    case Status::SingularEigenbasis: return "singular_eigenbasis";
  }
  return "unknown";
}

/// Base class for physics and numerical failures raised by the solver stages.
/// Argument errors (bad sizes, negative rates) use std::invalid_argument.
class SolverError : public std::runtime_error {
 public:
  SolverError(Status status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  Status status() const noexcept { return status_; }

 private:
  Status status_;
};

class NonUniqueNess : public SolverError {
 public:
  explicit NonUniqueNess(const std::string& what)
      : SolverError(Status::NonUnique, what) {}
};

class SingularEigenbasis : public SolverError {
 public:
  explicit SingularEigenbasis(const std::string& what)
      : SolverError(Status::SingularEigenbasis, what) {}
};

class ClosureViolation : public SolverError {
 public:
  explicit ClosureViolation(const std::string& what)
      : SolverError(Status::ClosureViolation, what) {}
};

// A vanishing row after folding cannot define a mode; reported with the
// closure status since it is the same failure family.
class StackDegenerate : public SolverError {
 public:
  explicit StackDegenerate(const std::string& what)
      : SolverError(Status::ClosureViolation, what) {}
};

class VacuumVanishes : public SolverError {
 public:
  explicit VacuumVanishes(const std::string& what)
      : SolverError(Status::VacuumVanishes, what) {}
};

}  // namespace ness

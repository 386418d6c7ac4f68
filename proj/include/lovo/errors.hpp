#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lovo {

/// Bad argument: unknown node, overlapping separation arguments, mismatched
/// node sets and similar caller mistakes.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A structural invariant does not hold (cycle in the directed part, ...).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Caller violated a documented precondition of an operation.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class AbstainReason {
  Undecidable,
  ConfoundedParent,
  SingularAdjustment,
  SingularRegression,
  NoRecoveryRoute,
  AmbiguousJoint,
  InconsistentJoint,
  TheoremException,
  DegenerateDenominator,
  IllConditioned,
  InfeasibleComposition,
  Undefined,
  AdapterError,
  InvalidMarginals,
};

std::string_view to_string(AbstainReason reason);
AbstainReason abstain_reason_from_string(std::string_view text);

/// Explicit refusal to produce a number. Always carries a reason code; the
/// detail string is free text for humans.
struct Abstained {
  AbstainReason reason = AbstainReason::Undecidable;
  std::string detail;

  friend bool operator==(const Abstained&, const Abstained&) = default;
};

/// Thrown by operations whose contract is "value or abstain" but which have no
/// natural variant return (e.g. union_of_parents).
class AbstainError : public std::runtime_error {
 public:
  explicit AbstainError(Abstained a)
      : std::runtime_error(std::string(to_string(a.reason)) + ": " + a.detail),
        abstained_(std::move(a)) {}
  const Abstained& abstained() const noexcept { return abstained_; }

 private:
  Abstained abstained_;
};

}  // namespace lovo

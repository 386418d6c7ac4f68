#include "lovo/errors.hpp"

#include <array>
#include <utility>

namespace lovo {

namespace {
constexpr std::array<std::pair<AbstainReason, std::string_view>, 14> kReasonNames{{
    {AbstainReason::Undecidable, "Undecidable"},
    {AbstainReason::ConfoundedParent, "ConfoundedParent"},
    {AbstainReason::SingularAdjustment, "SingularAdjustment"},
    {AbstainReason::SingularRegression, "SingularRegression"},
    {AbstainReason::NoRecoveryRoute, "NoRecoveryRoute"},
    {AbstainReason::AmbiguousJoint, "AmbiguousJoint"},
    {AbstainReason::InconsistentJoint, "InconsistentJoint"},
    {AbstainReason::TheoremException, "TheoremException"},
    {AbstainReason::DegenerateDenominator, "DegenerateDenominator"},
    {AbstainReason::IllConditioned, "IllConditioned"},
    {AbstainReason::InfeasibleComposition, "InfeasibleComposition"},
    {AbstainReason::Undefined, "Undefined"},
    {AbstainReason::AdapterError, "AdapterError"},
    {AbstainReason::InvalidMarginals, "InvalidMarginals"},
}};
}  // namespace

std::string_view to_string(AbstainReason reason) {
  for (const auto& [r, name] : kReasonNames)
    if (r == reason) return name;
  return "Unknown";
}

AbstainReason abstain_reason_from_string(std::string_view text) {
  for (const auto& [r, name] : kReasonNames)
    if (name == text) return r;
  throw DomainError("unknown abstain reason: " + std::string(text));
}

}  // namespace lovo

#include "regulus/error.hpp"

namespace regulus {

std::string_view to_string(ErrorKind k) noexcept
{
    switch (k) {
    case ErrorKind::RingMismatch:
        return "RingMismatch";
    case ErrorKind::NonUnitConstantTerm:
        return "NonUnitConstantTerm";
    case ErrorKind::IncompatibleModulus:
        return "IncompatibleModulus";
    case ErrorKind::UnknownIdentity:
        return "UnknownIdentity";
    case ErrorKind::TruncationTooSmall:
        return "TruncationTooSmall";
    case ErrorKind::DomainError:
        return "DomainError";
    case ErrorKind::CostLimit:
        return "CostLimit";
    case ErrorKind::HypothesisViolated:
        return "HypothesisViolated";
    case ErrorKind::ConditionsNotMet:
        return "ConditionsNotMet";
    case ErrorKind::NotADivisor:
        return "NotADivisor";
    case ErrorKind::SideConditionViolated:
        return "SideConditionViolated";
    case ErrorKind::UnknownSelection:
        return "UnknownSelection";
    case ErrorKind::ParseError:
        return "ParseError";
    case ErrorKind::TruncationBudgetExceeded:
        return "TruncationBudgetExceeded";
    }
    return "Unknown";
}

} // namespace regulus

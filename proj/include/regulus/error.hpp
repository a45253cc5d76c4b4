#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace regulus {

enum class ErrorKind {
    RingMismatch,
    NonUnitConstantTerm,
    IncompatibleModulus,
    UnknownIdentity,
    TruncationTooSmall,
    DomainError,
    CostLimit,
    HypothesisViolated,
    ConditionsNotMet,
    NotADivisor,
    SideConditionViolated,
    UnknownSelection,
    ParseError,
    TruncationBudgetExceeded,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so callers (and the CLI
// exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace regulus

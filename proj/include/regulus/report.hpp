#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regulus/series.hpp"

namespace regulus {

enum class Status { Pass, Fail };

/// How a checked statement is treated by the pass/fail gate.
enum class ClaimTag {
    Theorem,    // gating
    Identity,   // gating
    Conjecture, // reported, never gating
    Empirical,  // discovered by a scan, never gating
};

std::string to_string(Status s);
std::string to_string(ClaimTag t);

struct Counterexample {
    std::int64_t n = 0;      // progression index (or series index for identities)
    std::int64_t index = 0;  // series exponent that was inspected
    Integer value;           // observed coefficient, reduced when a modulus applies
    Integer expected;
};

struct VerificationReport {
    std::string id;
    ClaimTag tag = ClaimTag::Theorem;
    Status status = Status::Pass;
    std::int64_t checked_upto = 0; // largest n (or series index) examined
    std::size_t checked_count = 0; // number of indices actually asserted
    std::size_t trunc = 0;         // truncation of the underlying expansion
    std::optional<Counterexample> counterexample;
    std::vector<std::string> notes;

    bool passed() const noexcept { return status == Status::Pass; }
    bool gating() const noexcept { return tag == ClaimTag::Theorem || tag == ClaimTag::Identity; }
};

/// One JSON object on a single line.
std::string to_json_line(const VerificationReport& r);

} // namespace regulus

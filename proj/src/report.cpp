#include "regulus/report.hpp"

#include "json.hpp"

namespace regulus {

std::string to_string(Status s) { return s == Status::Pass ? "pass" : "fail"; }

std::string to_string(ClaimTag t)
{
    switch (t) {
    case ClaimTag::Theorem:
        return "THEOREM";
    case ClaimTag::Identity:
        return "IDENTITY";
    case ClaimTag::Conjecture:
        return "CONJECTURE";
    case ClaimTag::Empirical:
        return "EMPIRICAL";
    }
    return "UNKNOWN";
}

std::string to_json_line(const VerificationReport& r)
{
    nlohmann::json j;
    j["id"] = r.id;
    j["tag"] = to_string(r.tag);
    j["status"] = to_string(r.status);
    j["checked_upto"] = r.checked_upto;
    j["checked_count"] = r.checked_count;
    j["trunc"] = r.trunc;
    if (r.counterexample) {
        const auto& c = *r.counterexample;
        // Coefficients can exceed 64 bits, so they travel as decimal strings.
        j["counterexample"] = {{"n", c.n}, {"index", c.index}, {"value", c.value.get_str()},
                               {"expected", c.expected.get_str()}};
    } else {
        j["counterexample"] = nullptr;
    }
    j["notes"] = r.notes;
    return j.dump();
}

} // namespace regulus

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "regulus/numtheory.hpp"
#include "regulus/report.hpp"

namespace regulus {

/// prod_{delta | N} eta(delta z)^{r_delta} at level N.
struct EtaQuotientSpec {
    std::uint64_t level = 1;
    std::map<std::uint64_t, std::int64_t> exps; // delta -> r_delta, zero exponents dropped

    /// DomainError if a delta does not divide N or all exponents vanish.
    static EtaQuotientSpec make(std::uint64_t level, const std::map<std::uint64_t, std::int64_t>& exps);

    /// "N=16; eta(4)^6"
    std::string to_string() const;
};

Rational weight(const EtaQuotientSpec& spec);

/// sum delta r_delta / 24: the q-power in front of the f-quotient.
Rational q_offset(const EtaQuotientSpec& spec);

struct OnoCheck {
    bool integral_weight = false;
    Integer sum_delta_r;        // sum delta r_delta
    Integer sum_codelta_r;      // sum (N/delta) r_delta
    bool pass = false;
    std::vector<std::string> reasons; // one per failed condition
};

/// Integral weight, sum delta r ≡ 0 and sum (N/delta) r ≡ 0 (mod 24).
OnoCheck check_ono_conditions(const EtaQuotientSpec& spec);

/// Character ((-1)^k prod delta^{r_delta} / .) reduced to a fundamental discriminant.
/// ConditionsNotMet when check_ono_conditions fails.
CharacterSpec character_of(const EtaQuotientSpec& spec);

/// Order of vanishing at a cusp c/d (independent of c). NotADivisor if d does not divide N.
Rational cusp_order(const EtaQuotientSpec& spec, std::uint64_t d);

std::vector<std::uint64_t> divisors(std::uint64_t n);

struct CuspOrder {
    std::uint64_t d = 1;
    Rational order;
};

struct HolomorphyVerdict {
    enum class Kind { Cusp, Holomorphic, Fail };
    Kind kind = Kind::Fail;
    std::vector<CuspOrder> orders; // every divisor, ascending
    std::optional<CuspOrder> offending; // first negative order

    std::string to_string() const;
};

/// ConditionsNotMet when check_ono_conditions fails.
HolomorphyVerdict is_holomorphic(const EtaQuotientSpec& spec);

/// Parameters of the B-series eta(24 l z)^k eta(24 z)^{p^{a+m}-k} / eta(24 p^a z)^{p^m}.
struct BSeriesParams {
    int ell = 2;
    std::uint64_t p = 2;
    int a = 1;
    int m = 2;
    int k = 3;
};

/// Left side of the lemma's holomorphy inequality, reduced for d = 2^x 3^y t p^s:
///   (l / t^2) ((p^{m+a} - k) / p^{2s} - p^{m-a}) + k.
Rational lemma_cusp_expression(const BSeriesParams& b, std::uint64_t t, int s);

/// The inequality evaluated directly at a divisor d:
///   l (p^{m+a} - k) g(d,24)^2 / g(d,24l)^2 - l p^{m-a} g(d,24p^a)^2 / g(d,24l)^2 + k.
Rational lemma_cusp_inequality(const BSeriesParams& b, std::uint64_t d);

struct BSeriesReport {
    VerificationReport report;
    EtaQuotientSpec spec;        // at the adopted level 576 l
    Rational weight;
    std::uint64_t minimal_level = 0; // smallest 24 l u from the level congruence
    std::uint64_t adopted_level = 0; // 576 l
    bool minimal_divides_adopted = false;
    OnoCheck conditions;             // at the adopted level
    std::optional<CharacterSpec> character;
    HolomorphyVerdict holomorphy;
    bool k_bound_holds = false;
    std::size_t congruence_checked = 0;
};

/// Checks the B-series construction: (i) its expansion ≡ sum T_{l,k}(n) q^{24n+k(l-1)} (mod p^m)
/// up to trunc, (ii) the level, (iii) cusp orders >= 0. HypothesisViolated when p is not prime,
/// p^a does not exactly divide l, m <= a, p^{2a} < l, or (if enforce_bound) k exceeds
/// p^{m+a}(1 - p^{2s-2a}) for some s in [0, a).
BSeriesReport b_series_check(const BSeriesParams& b, std::size_t trunc, bool enforce_bound = true);

} // namespace regulus

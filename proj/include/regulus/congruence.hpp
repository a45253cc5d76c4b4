#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "regulus/etaq.hpp"
#include "regulus/report.hpp"

namespace regulus {

/// Hard cap on expansion length unless overridden.
inline constexpr std::size_t kDefaultBudget = 2'000'000;

/// coefficient(a n + b) of an f-quotient, optionally scaled (relations only).
struct Progression {
    FQuotient series;
    std::uint64_t a = 1;
    std::uint64_t b = 0;
    Integer multiplier = 1;

    std::uint64_t index(std::uint64_t n) const { return a * n + b; }
    /// e.g. "[f2^3 / f1^3](9n+4)".
    std::string to_string() const;
};

/// Admits n iff p does not divide mul * n + add.
struct IndexFilter {
    std::uint64_t p = 2;
    std::uint64_t mul = 1;
    std::uint64_t add = 0;

    bool admits(std::uint64_t n) const { return (mul % p * (n % p) + add) % p != 0; }
    std::string to_string() const;
    friend bool operator==(const IndexFilter&, const IndexFilter&) = default;
};

/// Expected residue as a function of n: `hit` at triangular n, `miss` elsewhere.
struct ResidueRule {
    std::uint64_t hit = 0;
    std::uint64_t miss = 0;

    std::uint64_t at(std::uint64_t n) const;
    std::string to_string() const;
    friend bool operator==(const ResidueRule&, const ResidueRule&) = default;
};

struct CongruenceClaim {
    std::string id;
    Progression progression;
    std::uint64_t modulus = 2;
    std::uint64_t expected_residue = 0;
    std::optional<IndexFilter> filter;
    std::optional<ResidueRule> rule;
    std::string provenance;
    ClaimTag tag = ClaimTag::Theorem;

    /// DomainError unless a >= 1, M >= 2 and every expected residue lies in [0, M).
    void validate() const;
    std::uint64_t expected_at(std::uint64_t n) const { return rule ? rule->at(n) : expected_residue; }
    /// Largest n with a n + b <= trunc; nullopt when b > trunc.
    std::optional<std::uint64_t> nmax_within(std::size_t trunc) const;
};

/// multiplier_l * lhs(n) == multiplier_r * rhs(n) (mod M) for admitted n.
struct RelationClaim {
    std::string id;
    Progression lhs;
    Progression rhs;
    std::uint64_t modulus = 2;
    std::optional<IndexFilter> filter;
    std::string provenance;
    ClaimTag tag = ClaimTag::Theorem;

    std::optional<std::uint64_t> nmax_within(std::size_t trunc) const;
};

// ---------------------------------------------------------------------------
// Claim files: {claim_id, series: {scalar, factors: {delta: r}}, a, b, modulus,
// expected_residue, filter, residue_rule, provenance, tag}.

std::string claim_to_json(const CongruenceClaim& c);
CongruenceClaim claim_from_json(std::string_view text);
/// Accepts a single object or an array of objects. ParseError on malformed input.
std::vector<CongruenceClaim> claims_from_json(std::string_view text);

// ---------------------------------------------------------------------------

/// Memoized expansions keyed by (quotient, ring). A request is served by any
/// entry that is at least as long and whose ring reduces onto the requested one
/// (exact, or a multiple of the modulus). Each entry is built at most once;
/// concurrent requesters of an in-flight entry wait for it.
class SeriesCache {
public:
    explicit SeriesCache(std::size_t budget = kDefaultBudget) : budget_(budget) {}

    /// TruncationBudgetExceeded when trunc > budget.
    std::shared_ptr<const Series> get(const FQuotient& fq, RingSpec ring, std::size_t trunc);
    std::size_t budget() const noexcept { return budget_; }
    /// Number of expansions actually performed.
    std::size_t constructions() const;

private:
    struct Slot;
    std::size_t budget_;
    mutable std::mutex mu_;
    std::vector<std::shared_ptr<Slot>> slots_;
    std::size_t constructions_ = 0;
};

// ---------------------------------------------------------------------------

/// Checks coefficient(a n + b) == expected_at(n) (mod M) for n <= nmax that pass
/// the filter. TruncationTooSmall when the series is shorter than a nmax + b.
VerificationReport verify_instance(const CongruenceClaim& claim, const Series& series, std::uint64_t nmax);
VerificationReport verify_instance(const CongruenceClaim& claim, std::uint64_t nmax, SeriesCache& cache);

/// verify_instance for claims whose expected residue depends on n; DomainError without a rule.
VerificationReport verify_conditional(const CongruenceClaim& claim, std::uint64_t nmax, SeriesCache& cache);

VerificationReport verify_relation(const RelationClaim& rel, std::uint64_t nmax, SeriesCache& cache);

/// Verifies every claim to the largest n its progression reaches within trunc,
/// on `jobs` threads. Reports come back sorted by claim id.
std::vector<VerificationReport> verify_batch(std::span<const CongruenceClaim> claims, std::size_t trunc,
                                             SeriesCache& cache, unsigned jobs = 1);

// ---------------------------------------------------------------------------

struct DensityPoint {
    std::uint64_t x = 0;
    std::uint64_t count = 0; // #{0 <= n < X : coefficient(a n + b) == r (mod M)}
    double proportion = 0.0;
};

struct DensityReport {
    Progression progression;
    std::uint64_t modulus = 2;
    std::uint64_t residue = 0;
    std::vector<DensityPoint> points; // ascending X

    /// Columns X,count,proportion.
    std::string to_csv() const;
};

/// DomainError for X = 0 or an empty checkpoint list; checkpoints are sorted and deduplicated.
DensityReport density_scan(const Progression& prog, std::uint64_t modulus, std::uint64_t residue,
                           std::vector<std::uint64_t> checkpoints, SeriesCache& cache);

struct DiscoveryCandidate {
    std::uint64_t a = 1;
    std::uint64_t b = 0;
    std::uint64_t checked = 0;  // indices asserted in the first pass
    bool primitive = true;      // not implied by a candidate with a proper divisor of a
};

/// All (a <= a_max, b < a) with coefficient(a n + b) == 0 (mod M) for every n with
/// a n + b <= a_max nmax, provided at least min_support indices were checked. Each
/// survivor is re-verified on twice that range. Candidates are empirical.
/// DomainError for M < 2 or a_max = 0.
std::vector<DiscoveryCandidate> discover(const FQuotient& fq, std::uint64_t modulus, std::uint64_t a_max,
                                         std::uint64_t nmax, std::uint64_t min_support, SeriesCache& cache);

// ---------------------------------------------------------------------------

/// Parameters for the family generators; unset enumerated parameters (r, s, j)
/// expand to every admissible value.
struct FamilyParams {
    std::optional<std::int64_t> alpha;
    std::optional<std::int64_t> k;
    std::optional<std::int64_t> j;
    std::optional<std::int64_t> p;
    std::optional<std::int64_t> r;
    std::optional<std::int64_t> s;
    std::optional<std::int64_t> t;
    std::optional<std::int64_t> ell;
    std::vector<std::uint64_t> primes; // thm1.00: p_1 .. p_{k+1}
};

/// Theorem ids understood by generate_family.
std::vector<std::string> family_ids();

/// Concrete instances of one theorem. SideConditionViolated names the failing
/// hypothesis; UnknownSelection for an unknown id.
std::vector<CongruenceClaim> generate_family(std::string_view theorem_id, const FamilyParams& params);

/// The desk-scale default instances of a family (all feasible at trunc 2e5).
std::vector<CongruenceClaim> default_family_instances(std::string_view theorem_id);

/// Stand-alone congruences: Ramanujan's, the mod-24 base cases, the triangular
/// residue theorem, the T4 remark, and the ped lemmas.
std::span<const CongruenceClaim> named_claims();
/// Relations between two progressions (e1.5, e1.6, t3.3.1 at k = 0).
std::span<const RelationClaim> named_relations();

/// Throws UnknownSelection.
const CongruenceClaim& find_claim(std::string_view id);
const RelationClaim& find_relation(std::string_view id);

/// t3.3.1 instances: T2(3n+2) == T2(3 17^{4k+2} n + (17^{4k+3}-1)/8) (mod 12) for 17 not dividing n.
RelationClaim t3_3_1_relation(std::int64_t k);

/// omega(p) for the f3^6/f1 coefficients (p >= 5 prime).
Integer t2_omega(std::uint64_t p);

} // namespace regulus

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "regulus/etaq.hpp"
#include "regulus/report.hpp"

namespace regulus {

enum class ThetaKind {
    BorweinA,   // a(q^scale)
    JacobiCube, // sum (-1)^n (2n+1) q^{scale n(n+1)/2}
    Pentagonal, // sum (-1)^n q^{scale n(3n-1)/2}
};

struct ThetaFactor {
    ThetaKind kind;
    int scale = 1;
    int power = 1;
};

/// scalar * q^qpower * quotient * prod thetas.
struct Term {
    Integer scalar = 1;
    std::size_t qpower = 0;
    FQuotient quotient;
    std::vector<ThetaFactor> thetas;
};

/// How the f_delta factors of an expression are expanded.
enum class Expansion {
    Pentagonal,    // the production path (expand_fquotient)
    DirectProduct, // literal prod (1 - q^{delta i}); independent reference
};

/// Post-processing of the summed terms, applied in the order
/// extract_ap -> magnify -> shift.
struct Dissection {
    std::size_t modulus = 1;
    std::size_t residue = 0;
    std::size_t magnify = 1;
    std::size_t shift = 0;
};

/// A sum of terms with an optional dissection wrapper. Sufficient for every
/// catalogued identity: dissections need q^d prefactors, and the cubic theta
/// relations need Borwein factors.
struct Expression {
    std::vector<Term> terms;
    Dissection dissection;
    Expansion expansion = Expansion::Pentagonal;

    static Expression of(FQuotient fq, std::size_t qpower = 0);
    Expression& extract(std::size_t m, std::size_t r);
    Expression& magnified(std::size_t t);
    Expression& shifted(std::size_t d);
    Expression& plus(Term t);

    std::string to_string() const;
};

/// Evaluates the expression to exactly `trunc` (the inner expansion is made long enough).
Series evaluate(const Expression& e, std::size_t trunc, RingSpec ring = RingSpec::exact());

struct IdentityEntry {
    std::string id;
    Expression lhs;
    Expression rhs;
    std::optional<std::uint64_t> modulus; // absent: exact identity
    std::string anchor;                  // what the identity expresses
    std::string notes;
    /// For dissection identities: each rhs term lives on one residue class mod this value.
    std::size_t dissection_modulus = 0;
};

/// The immutable catalog of product identities and dissections.
std::span<const IdentityEntry> identity_catalog();

/// Throws UnknownIdentity.
const IdentityEntry& find_identity(std::string_view id);

/// Expands both sides (mod the entry's modulus when present) and compares them
/// coefficientwise up to trunc. trunc must be at least 16.
VerificationReport verify_identity(const IdentityEntry& entry, std::size_t trunc);
VerificationReport verify_identity(std::string_view id, std::size_t trunc);

/// For dissection entries: checks that extract_ap(lhs, m, j) matches the single rhs
/// term supported on q^{mn+j}, for every j.
VerificationReport verify_dissection_components(const IdentityEntry& entry, std::size_t trunc);

/// JSON array of {id, anchor, modulus, lhs, rhs}.
std::string catalog_json();

} // namespace regulus

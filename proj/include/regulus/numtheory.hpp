#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "regulus/report.hpp"
#include "regulus/series.hpp"

namespace regulus {

using Rational = mpq_class;

bool is_prime(std::uint64_t n);

/// (a/p) for an odd prime p. DomainError otherwise.
int legendre(const Integer& a, std::uint64_t p);
/// Kronecker symbol (a/n) for any integers.
int kronecker(const Integer& a, const Integer& n);

/// chi(d) = (D/d) for gcd(d, level) = 1, else 0. D = 1 is the trivial character.
struct CharacterSpec {
    Integer discriminant = 1;
    std::uint64_t level = 1;

    static CharacterSpec trivial(std::uint64_t level = 1) { return CharacterSpec{1, level}; }
    bool is_trivial() const { return discriminant == 1; }
    int operator()(const Integer& d) const;
    std::string to_string() const;

    friend bool operator==(const CharacterSpec&, const CharacterSpec&) = default;
};

/// tau(0..nmax) with tau(0) = 0, from q f1^24. CostLimit above 5000.
std::vector<Integer> tau_exact(std::size_t nmax);
inline constexpr std::size_t kTauLimit = 5000;
/// tau(n) mod 2: 1 exactly at odd squares. DomainError for n = 0.
int tau_mod2(std::uint64_t n);

/// (f | T_p)(n) = a(pn) + chi(p) p^{k-1} a(n/p), truncated at floor(trunc / p).
/// Works over both rings; a at non-integral index is 0.
Series hecke_Tp(const Series& f, std::uint64_t p, unsigned weight, const CharacterSpec& chi);

/// Parameters of the product prod (1 - x^n)^r (1 - x^{nq})^s at a prime p.
///   eps = (r+s)/2, t = (r+sq)/24, Delta = t(p^2-1), theta = (-1)^{1/2-eps} 2 q^s.
/// r and s have opposite parity, so 1/2 - eps = (1-r-s)/2 is an integer and
/// theta is an ordinary integer.
struct NewmanParams {
    int r = -1;
    int s = 6;
    std::uint64_t qprime = 3;
    std::uint64_t p = 5;

    /// Validates the setup and returns it; HypothesisViolated naming the failed condition.
    static NewmanParams make(int r, int s, std::uint64_t qprime, std::uint64_t p);
    /// (r, s, q) = (-1, 6, 3): the product f3^6 / f1.
    static NewmanParams f3_6_over_f1(std::uint64_t p) { return make(-1, 6, 3, p); }

    Rational epsilon() const;
    Rational t() const;
    std::int64_t delta() const;
    Integer theta() const;
    /// p^{2 eps - 2} and p^{eps - 3/2}; both exponents are integers here.
    Integer outer_power() const;
    Integer inner_power() const;
};

/// omega = a(Delta) + p^{eps-3/2} (theta/p) (-Delta/p); equals p^{2eps-2} alpha.
/// For (-1, 6, 3) this is a(17(p^2-1)/24) + p (2/p) (-17(p^2-1)/24 / p).
Integer omega(const NewmanParams& params, const Series& aseries);
Integer omega(std::uint64_t p, const Series& aseries);

/// Exact series of prod (1 - x^n)^r (1 - x^{nq})^s.
Series newman_product(const NewmanParams& params, std::size_t trunc);

/// Checks a(p^2 n + Delta) = (omega - p^{eps-3/2}(theta/p)((n-Delta)/p)) a(n)
///                          - p^{2eps-2} a((n-Delta)/p^2)
/// for 0 <= n <= nmax, exactly. Needs trunc >= p^2 nmax + Delta.
VerificationReport newman_verify(const NewmanParams& params, const Series& phiseries, std::size_t nmax);

} // namespace regulus

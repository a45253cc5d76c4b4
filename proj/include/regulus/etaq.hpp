#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "regulus/series.hpp"

namespace regulus {

/// Formal product scalar * prod_delta f_delta^{r_delta}, where
/// f_delta = prod_{i >= 1} (1 - q^{delta i}).
///
/// Zero exponents are never stored and factors are kept sorted by delta, so two
/// equal quotients compare equal regardless of how they were assembled.
class FQuotient {
public:
    FQuotient() = default;
    explicit FQuotient(Integer scalar) : scalar_(std::move(scalar)) {}
    FQuotient(Integer scalar, std::initializer_list<std::pair<const int, int>> factors);

    /// f_delta.
    static FQuotient f(int delta, int exponent = 1);
    /// T_{ell,k} generating function f_ell^k / f_1^k.
    static FQuotient tuple_regular(int ell, int k);

    const Integer& scalar() const noexcept { return scalar_; }
    const std::map<int, int>& factors() const noexcept { return factors_; }

    /// Multiplies f_delta^exponent into the product.
    FQuotient& times(int delta, int exponent);
    FQuotient operator*(const FQuotient& other) const;
    FQuotient inverse_factors() const;

    /// Compact rendering in the CLI literal syntax, e.g. "3 * f2^4 f3^5 / (f1^8 f6)".
    std::string to_string() const;

    friend bool operator==(const FQuotient&, const FQuotient&) = default;
    friend auto operator<=>(const FQuotient& a, const FQuotient& b)
    {
        if (auto c = cmp(a.scalar_, b.scalar_); c != 0) {
            return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        }
        return a.factors_ <=> b.factors_;
    }

private:
    Integer scalar_ = 1;
    std::map<int, int> factors_;
};

/// f_delta by the pentagonal number theorem: sum_n (-1)^n q^{delta n(3n-1)/2}.
Series expand_f(int delta, std::size_t trunc, RingSpec ring = RingSpec::exact());

/// f_delta as the literal product prod_{delta i <= trunc} (1 - q^{delta i}).
/// Quadratic cost; independent of the pentagonal expansion and used to check it.
Series expand_f_product(int delta, std::size_t trunc, RingSpec ring = RingSpec::exact());

/// sum_{n >= 0} (-1)^n (2n+1) q^{scale n(n+1)/2}, i.e. f_scale^3.
Series jacobi_cube_series(std::size_t trunc, RingSpec ring = RingSpec::exact(), int scale = 1);

/// Borwein cubic theta a(q^scale) = sum_{j,k} q^{scale (j^2 + jk + k^2)}.
Series borwein_a_series(int scale, std::size_t trunc, RingSpec ring = RingSpec::exact());

/// Expands an f-quotient. Cubes of f_delta come from the Jacobi series and the
/// remaining powers from the pentagonal series; numerator factors are multiplied
/// sparse-first and denominator factors are divided out one sparse factor at a time.
Series expand_fquotient(const FQuotient& fq, std::size_t trunc, RingSpec ring = RingSpec::exact());

} // namespace regulus

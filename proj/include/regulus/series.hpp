#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace regulus {

using Integer = mpz_class;

/// Coefficient ring of a truncated series: the integers, or Z/MZ with 2 <= M < 2^63.
class RingSpec {
public:
    enum class Kind { ExactInteger, IntegerModM };

    static RingSpec exact() noexcept { return RingSpec(); }
    static RingSpec modulo(std::uint64_t m);

    Kind kind() const noexcept { return kind_; }
    bool is_exact() const noexcept { return kind_ == Kind::ExactInteger; }
    /// 0 for the exact ring.
    std::uint64_t modulus() const noexcept { return modulus_; }

    std::string to_string() const;

    friend bool operator==(const RingSpec&, const RingSpec&) = default;

private:
    RingSpec() = default;

    Kind kind_ = Kind::ExactInteger;
    std::uint64_t modulus_ = 0;
};

/// Finite coefficient sequence c(0..trunc) over a RingSpec. Values are immutable
/// once built; every operation below returns a new series.
///
/// Over Z/MZ the coefficients are kept as canonical residues in [0, M).
class Series {
public:
    /// The exact zero series truncated at q^0.
    Series();

    static Series from_integers(RingSpec ring, std::vector<Integer> coeffs);
    static Series from_ints(RingSpec ring, std::initializer_list<long long> coeffs);
    /// Takes ownership of residues; each must already lie in [0, modulus).
    static Series from_residues(std::uint64_t modulus, std::vector<std::uint64_t> residues);
    static Series zero(RingSpec ring, std::size_t trunc);

    const RingSpec& ring() const noexcept { return ring_; }
    std::size_t trunc() const noexcept;

    /// Coefficient of q^n. Negative n reads as 0; n beyond trunc throws TruncationTooSmall.
    Integer coeff(std::int64_t n) const;
    /// Fast accessor for Z/MZ series; same index conventions as coeff().
    std::uint64_t residue(std::int64_t n) const;

    /// Throws RingMismatch when the series is not of the matching kind.
    std::span<const Integer> exact_coeffs() const;
    std::span<const std::uint64_t> residues() const;

    std::vector<Integer> to_integers() const;
    std::size_t nonzero_count() const;
    bool is_zero() const;

    friend bool operator==(const Series& a, const Series& b);

private:
    using Storage = std::variant<std::vector<Integer>, std::vector<std::uint64_t>>;

    Series(RingSpec ring, Storage data) : ring_(ring), data_(std::move(data)) {}

    RingSpec ring_;
    Storage data_;

    friend class SeriesAccess;
};

Series make_constant(RingSpec ring, const Integer& value, std::size_t trunc);

// Binary operations require equal rings and truncate to min(a.trunc, b.trunc).
Series add(const Series& a, const Series& b);
Series sub(const Series& a, const Series& b);
Series neg(const Series& a);
Series scale(const Series& a, const Integer& c);

/// Truncated Cauchy product. The sparser operand drives the loop, so products
/// with pentagonal or theta factors cost O(N * nnz).
Series mul(const Series& a, const Series& b);

/// a / b by the recurrence c(n) = b(0)^{-1} (a(n) - sum_{j>=1} b(j) c(n-j)),
/// iterating only over the support of b.
Series divide(const Series& a, const Series& b);
Series invert(const Series& a);
Series pow(const Series& a, long long e);

Series magnify(const Series& a, std::size_t t);
Series shift(const Series& a, std::size_t d);
/// result(n) = a(m n + r), truncated at floor((a.trunc - r) / m).
Series extract_ap(const Series& a, std::size_t m, std::size_t r);
Series truncate(const Series& a, std::size_t trunc);
Series reduce_mod(const Series& a, std::uint64_t m);

/// First index (up to the shorter truncation) where a and b differ, or nullopt.
std::optional<std::size_t> first_difference(const Series& a, const Series& b);

inline Series operator+(const Series& a, const Series& b) { return add(a, b); }
inline Series operator-(const Series& a, const Series& b) { return sub(a, b); }
inline Series operator-(const Series& a) { return neg(a); }
inline Series operator*(const Series& a, const Series& b) { return mul(a, b); }

// Residue helpers shared with the other modules.
std::uint64_t reduce_integer(const Integer& v, std::uint64_t m);
std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t m);

} // namespace regulus

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regulus/series.hpp"

namespace regulus {

// Brute-force combinatorial counts. Everything here is exact and deliberately
// independent of the series engine: plain dynamic programs over parts.

enum class OracleKind { LRegular, TupleLRegular, Ped, Partition, DistinctParts };

struct OracleTable {
    OracleKind kind = OracleKind::Partition;
    int ell = 0; // LRegular / TupleLRegular
    int k = 0;   // TupleLRegular
    std::vector<Integer> values; // indexed 0..nmax

    std::size_t nmax() const noexcept { return values.empty() ? 0 : values.size() - 1; }
    std::string label() const;
    /// "n,value" lines under a header.
    std::string to_csv() const;
};

/// b_ell(n): partitions with no part divisible by ell.
OracleTable count_lregular(int ell, std::size_t nmax);
/// T_{ell,k}(n): ordered k-tuples of ell-regular partitions of total size n.
OracleTable count_tuple(int ell, int k, std::size_t nmax);
/// ped(n): even parts distinct, odd parts unrestricted.
OracleTable ped_count(std::size_t nmax);
OracleTable partition_count(std::size_t nmax);
OracleTable distinct_parts_count(std::size_t nmax);

/// m with m(m+1)/2 = n, if any.
std::optional<std::uint64_t> triangular_root(std::uint64_t n);
inline bool is_triangular(std::uint64_t n) { return triangular_root(n).has_value(); }

/// Whether n = x^2 + 2y^2 for some integers x, y.
bool repr_x2_2y2(std::uint64_t n);
/// Same, with x ≡ ±1 and y ≡ ±1 (mod 6).
bool repr_x2_2y2_restricted(std::uint64_t n);

/// Largest e with p^e | n. DomainError for n = 0 or p < 2.
unsigned nu_p(std::uint64_t p, const Integer& n);

} // namespace regulus

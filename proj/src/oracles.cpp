#include "regulus/oracles.hpp"

#include <cmath>
#include <sstream>

#include "regulus/error.hpp"

namespace regulus {

namespace {

// Unbounded multiplicity for every allowed part; one rolling array.
std::vector<Integer> unrestricted_parts(std::size_t nmax, bool (*allowed)(std::size_t, int), int param)
{
    std::vector<Integer> c(nmax + 1, 0);
    c[0] = 1;
    for (std::size_t part = 1; part <= nmax; ++part) {
        if (!allowed(part, param)) {
            continue;
        }
        for (std::size_t n = part; n <= nmax; ++n) {
            c[n] += c[n - part];
        }
    }
    return c;
}

std::uint64_t isqrt(std::uint64_t n)
{
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) {
        --r;
    }
    while ((r + 1) * (r + 1) <= n) {
        ++r;
    }
    return r;
}

bool pm1_mod6(std::uint64_t v) { return v % 6 == 1 || v % 6 == 5; }

} // namespace

std::string OracleTable::label() const
{
    switch (kind) {
    case OracleKind::LRegular:
        return "b_" + std::to_string(ell);
    case OracleKind::TupleLRegular:
        return "T_" + std::to_string(ell) + "," + std::to_string(k);
    case OracleKind::Ped:
        return "ped";
    case OracleKind::Partition:
        return "p";
    case OracleKind::DistinctParts:
        return "q_distinct";
    }
    return "?";
}

std::string OracleTable::to_csv() const
{
    std::ostringstream os;
    os << "n,value\n";
    for (std::size_t n = 0; n < values.size(); ++n) {
        os << n << ',' << values[n].get_str() << '\n';
    }
    return os.str();
}

OracleTable count_lregular(int ell, std::size_t nmax)
{
    if (ell < 2) {
        fail(ErrorKind::DomainError, "ell must be at least 2");
    }
    OracleTable t{OracleKind::LRegular, ell, 1, {}};
    t.values = unrestricted_parts(nmax, [](std::size_t part, int l) { return part % static_cast<std::size_t>(l) != 0; },
                                  ell);
    return t;
}

OracleTable count_tuple(int ell, int k, std::size_t nmax)
{
    if (k < 1) {
        fail(ErrorKind::DomainError, "k must be at least 1");
    }
    const auto base = count_lregular(ell, nmax).values;
    std::vector<Integer> acc = base;
    for (int i = 1; i < k; ++i) {
        std::vector<Integer> next(nmax + 1, 0);
        for (std::size_t a = 0; a <= nmax; ++a) {
            if (acc[a] == 0) {
                continue;
            }
            for (std::size_t b = 0; a + b <= nmax; ++b) {
                next[a + b] += acc[a] * base[b];
            }
        }
        acc = std::move(next);
    }
    return OracleTable{OracleKind::TupleLRegular, ell, k, std::move(acc)};
}

OracleTable ped_count(std::size_t nmax)
{
    std::vector<Integer> c = unrestricted_parts(nmax, [](std::size_t part, int) { return part % 2 == 1; }, 0);
    // Even parts at most once: 0/1 knapsack, descending.
    for (std::size_t part = 2; part <= nmax; part += 2) {
        for (std::size_t n = nmax; n >= part; --n) {
            c[n] += c[n - part];
        }
    }
    return OracleTable{OracleKind::Ped, 0, 0, std::move(c)};
}

OracleTable partition_count(std::size_t nmax)
{
    return OracleTable{OracleKind::Partition, 0, 0,
                       unrestricted_parts(nmax, [](std::size_t, int) { return true; }, 0)};
}

OracleTable distinct_parts_count(std::size_t nmax)
{
    std::vector<Integer> c(nmax + 1, 0);
    c[0] = 1;
    for (std::size_t part = 1; part <= nmax; ++part) {
        for (std::size_t n = nmax; n >= part; --n) {
            c[n] += c[n - part];
        }
    }
    return OracleTable{OracleKind::DistinctParts, 0, 0, std::move(c)};
}

std::optional<std::uint64_t> triangular_root(std::uint64_t n)
{
    if (n > (std::uint64_t{1} << 60)) {
        fail(ErrorKind::DomainError, "triangular test limited to n <= 2^60");
    }
    const std::uint64_t d = 8 * n + 1;
    const std::uint64_t s = isqrt(d);
    if (s * s != d) {
        return std::nullopt;
    }
    return (s - 1) / 2;
}

bool repr_x2_2y2(std::uint64_t n)
{
    for (std::uint64_t y = 0; 2 * y * y <= n; ++y) {
        const std::uint64_t rest = n - 2 * y * y;
        const std::uint64_t x = isqrt(rest);
        if (x * x == rest) {
            return true;
        }
    }
    return false;
}

bool repr_x2_2y2_restricted(std::uint64_t n)
{
    // Sign of x, y is irrelevant to the square, and ±1 mod 6 is closed under negation.
    for (std::uint64_t y = 1; 2 * y * y <= n; ++y) {
        if (!pm1_mod6(y)) {
            continue;
        }
        const std::uint64_t rest = n - 2 * y * y;
        const std::uint64_t x = isqrt(rest);
        if (x * x == rest && pm1_mod6(x)) {
            return true;
        }
    }
    return false;
}

unsigned nu_p(std::uint64_t p, const Integer& n)
{
    if (p < 2) {
        fail(ErrorKind::DomainError, "nu_p needs p >= 2");
    }
    if (n == 0) {
        fail(ErrorKind::DomainError, "nu_p(0) is undefined");
    }
    Integer v = abs(n);
    unsigned e = 0;
    while (mpz_divisible_ui_p(v.get_mpz_t(), p)) {
        mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), p);
        ++e;
    }
    return e;
}

} // namespace regulus

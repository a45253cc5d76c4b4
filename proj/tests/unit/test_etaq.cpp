#include <gtest/gtest.h>

#include "regulus/error.hpp"
#include "regulus/etaq.hpp"
#include "support/brute.hpp"

using namespace regulus;

namespace {

std::vector<long long> as_ll(const Series& s)
{
    std::vector<long long> out;
    for (const auto& v : s.to_integers()) {
        out.push_back(v.get_si());
    }
    return out;
}

} // namespace

TEST(FQuotient, Normalization)
{
    FQuotient q = FQuotient::f(1, 3) * FQuotient::f(1, -3);
    EXPECT_TRUE(q.factors().empty());
    EXPECT_EQ(FQuotient(1, {{3, 1}, {1, 2}}), FQuotient(1, {{1, 2}, {3, 1}}));
    EXPECT_EQ(FQuotient(3, {{2, 4}, {3, 5}, {1, -8}, {6, -1}}).to_string(), "3 * f2^4 f3^5 / (f1^8 f6)");
    EXPECT_EQ(FQuotient::tuple_regular(2, 3).to_string(), "f2^3 / f1^3");
    EXPECT_EQ(FQuotient(1).to_string(), "1");
    EXPECT_THROW(FQuotient::f(0), Error);
    EXPECT_THROW(FQuotient::tuple_regular(1, 3), Error);
}

TEST(ExpandF, Pentagonal)
{
    EXPECT_EQ(as_ll(expand_f(1, 15)),
              (std::vector<long long>{1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0, 0, -1}));
    EXPECT_EQ(as_ll(expand_f(2, 3)), (std::vector<long long>{1, 0, -1, 0}));
    EXPECT_EQ(expand_f(1, 200), expand_f_product(1, 200));
    EXPECT_EQ(as_ll(expand_f(5, 0)), (std::vector<long long>{1}));
}

TEST(ExpandF, MatchesDirectProductForAllSmallDelta)
{
    for (int delta = 1; delta <= 24; ++delta) {
        EXPECT_EQ(expand_f(delta, 400), expand_f_product(delta, 400)) << delta;
        EXPECT_EQ(expand_f(delta, 400, RingSpec::modulo(7)), expand_f_product(delta, 400, RingSpec::modulo(7)));
    }
}

TEST(ExpandFQuotient, Examples)
{
    // T_{2,3}(2) = 6: {1,1} in one of three slots, or {1} in two of them.
    EXPECT_EQ(as_ll(expand_fquotient(FQuotient::tuple_regular(2, 3), 2)), (std::vector<long long>{1, 3, 6}));
    EXPECT_EQ(brute::tuple_lregular(2, 3, 2), 6);
    EXPECT_EQ(as_ll(expand_fquotient(FQuotient::f(1) * FQuotient::f(1, -1), 5)),
              (std::vector<long long>{1, 0, 0, 0, 0, 0}));
    const auto ped = expand_fquotient(FQuotient(1, {{4, 1}, {1, -1}}), 10);
    for (int n = 0; n <= 10; ++n) {
        EXPECT_EQ(ped.coeff(n), brute::ped(n)) << n;
    }
    // Scalar and modular ring.
    const auto s = expand_fquotient(FQuotient(-5, {{2, 1}}), 6, RingSpec::modulo(7));
    EXPECT_EQ(as_ll(s), (std::vector<long long>{2, 0, 5, 0, 5, 0, 0}));
}

TEST(ExpandFQuotient, TupleCountsAgainstEnumeration)
{
    for (int ell : {2, 3, 4}) {
        for (int k : {1, 2, 3}) {
            const auto s = expand_fquotient(FQuotient::tuple_regular(ell, k), 14);
            for (int n = 0; n <= 14; ++n) {
                EXPECT_EQ(s.coeff(n), brute::tuple_lregular(ell, k, n)) << ell << "," << k << "," << n;
            }
        }
    }
}

TEST(ExpandFQuotient, ModularAgreesWithExact)
{
    const FQuotient fq(3, {{2, 4}, {3, 5}, {1, -8}, {6, -1}});
    const auto exact = expand_fquotient(fq, 400);
    for (std::uint64_t m : {2ull, 3ull, 24ull, 1000000007ull, (1ull << 62) + 135}) {
        EXPECT_EQ(expand_fquotient(fq, 400, RingSpec::modulo(m)), reduce_mod(exact, m)) << m;
    }
}

TEST(JacobiCube, Series)
{
    EXPECT_EQ(as_ll(jacobi_cube_series(10)), (std::vector<long long>{1, -3, 0, 5, 0, 0, -7, 0, 0, 0, 9}));
    EXPECT_EQ(jacobi_cube_series(500), pow(expand_f(1, 500), 3));
    const auto j = jacobi_cube_series(300);
    for (int n = 0; n <= 300; ++n) {
        long m = 0;
        while (m * (m + 1) / 2 < n) {
            ++m;
        }
        if (m * (m + 1) / 2 != n) {
            EXPECT_EQ(j.coeff(n), 0) << n;
        }
    }
    EXPECT_EQ(jacobi_cube_series(120, RingSpec::exact(), 4), magnify(jacobi_cube_series(30), 4));
}

TEST(BorweinA, Series)
{
    EXPECT_EQ(as_ll(borwein_a_series(1, 4)), (std::vector<long long>{1, 6, 0, 6, 6}));
    EXPECT_EQ(borwein_a_series(1, 0).coeff(0), 1);
    const auto a = borwein_a_series(1, 200);
    for (int m = 1; m <= 200; ++m) {
        EXPECT_EQ(a.coeff(m) % 6, 0) << m;
    }
    // Independent count with a generous box.
    for (int m = 0; m <= 60; ++m) {
        long c = 0;
        for (long j = -20; j <= 20; ++j) {
            for (long k = -20; k <= 20; ++k) {
                c += (j * j + j * k + k * k == m) ? 1 : 0;
            }
        }
        EXPECT_EQ(a.coeff(m), c) << m;
    }
    EXPECT_EQ(borwein_a_series(3, 90), magnify(borwein_a_series(1, 30), 3));
}

#include <gtest/gtest.h>

#include <random>

#include "regulus/error.hpp"
#include "regulus/etaq.hpp"
#include "regulus/series.hpp"
#include "support/brute.hpp"

using namespace regulus;

namespace {

const RingSpec Z = RingSpec::exact();

Series ints(std::initializer_list<long long> c) { return Series::from_ints(Z, c); }

std::vector<long long> as_ll(const Series& s)
{
    std::vector<long long> out;
    for (const auto& v : s.to_integers()) {
        out.push_back(v.get_si());
    }
    return out;
}

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no regulus::Error thrown";
    return ErrorKind::DomainError;
}

} // namespace

TEST(RingSpec, ModulusBounds)
{
    EXPECT_EQ(RingSpec::modulo(2).modulus(), 2u);
    EXPECT_EQ(kind_of([] { RingSpec::modulo(1); }), ErrorKind::DomainError);
    EXPECT_EQ(kind_of([] { RingSpec::modulo(std::uint64_t{1} << 63); }), ErrorKind::DomainError);
    EXPECT_EQ(RingSpec::modulo((std::uint64_t{1} << 63) - 1).modulus(), (std::uint64_t{1} << 63) - 1);
    EXPECT_TRUE(RingSpec::exact().is_exact());
}

TEST(Series, MakeConstant)
{
    EXPECT_EQ(as_ll(make_constant(Z, 1, 4)), (std::vector<long long>{1, 0, 0, 0, 0}));
    EXPECT_EQ(as_ll(make_constant(RingSpec::modulo(5), 7, 2)), (std::vector<long long>{2, 0, 0}));
    EXPECT_EQ(as_ll(make_constant(Z, 0, 0)), (std::vector<long long>{0}));
    EXPECT_EQ(as_ll(make_constant(RingSpec::modulo(5), -1, 1)), (std::vector<long long>{4, 0}));
}

TEST(Series, AddSubNeg)
{
    EXPECT_EQ(as_ll(ints({1, 1}) + ints({1, -1})), (std::vector<long long>{2, 0}));
    EXPECT_EQ(as_ll(ints({1, 2, 3}) - ints({1, 2, 3})), (std::vector<long long>{0, 0, 0}));
    const auto m3 = RingSpec::modulo(3);
    EXPECT_EQ(as_ll(Series::from_ints(m3, {2, 2}) + Series::from_ints(m3, {2, 2})), (std::vector<long long>{1, 1}));
    EXPECT_EQ(as_ll(-Series::from_ints(m3, {1, 0})), (std::vector<long long>{2, 0}));
    // Result truncation is the smaller one.
    EXPECT_EQ((ints({1, 2, 3}) + ints({1})).trunc(), 0u);
}

TEST(Series, RingMismatch)
{
    const auto a = ints({1, 2});
    const auto b = Series::from_ints(RingSpec::modulo(5), {1, 2});
    EXPECT_EQ(kind_of([&] { (void)(a + b); }), ErrorKind::RingMismatch);
    EXPECT_EQ(kind_of([&] { (void)(a * b); }), ErrorKind::RingMismatch);
    const auto c = Series::from_ints(RingSpec::modulo(7), {1, 2});
    EXPECT_EQ(kind_of([&] { (void)(c - b); }), ErrorKind::RingMismatch);
    EXPECT_EQ(kind_of([&] { (void)a.residues(); }), ErrorKind::RingMismatch);
}

TEST(Series, CoefficientAccess)
{
    const auto s = ints({5, 6, 7});
    EXPECT_EQ(s.coeff(-3), 0);
    EXPECT_EQ(s.coeff(2), 7);
    EXPECT_EQ(kind_of([&] { (void)s.coeff(3); }), ErrorKind::TruncationTooSmall);
}

TEST(Series, Mul)
{
    EXPECT_EQ(as_ll(ints({1, 1, 0}) * ints({1, -1, 0})), (std::vector<long long>{1, 0, -1}));
    const auto s = ints({3, -1, 4, 1, -5});
    EXPECT_EQ(s * make_constant(Z, 1, 4), s);
    const auto f1 = expand_f(1, 50);
    EXPECT_EQ(f1 * invert(f1), make_constant(Z, 1, 50));
}

TEST(Series, Invert)
{
    EXPECT_EQ(as_ll(invert(ints({1, -1, 0, 0, 0}))), (std::vector<long long>{1, 1, 1, 1, 1}));
    EXPECT_EQ(as_ll(invert(expand_f(1, 10))), (std::vector<long long>{1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42}));
    for (int n = 0; n <= 10; ++n) {
        EXPECT_EQ(invert(expand_f(1, 10)).coeff(n), brute::count_partitions(n, [](auto&) { return true; }));
    }
    const auto u = ints({-1, 4, 0, 2, 9});
    EXPECT_EQ(invert(invert(u)), u);
    EXPECT_EQ(kind_of([] { invert(ints({2, 1})); }), ErrorKind::NonUnitConstantTerm);
    EXPECT_EQ(kind_of([] { invert(Series::from_ints(RingSpec::modulo(6), {3, 1})); }),
              ErrorKind::NonUnitConstantTerm);
    // 5 is a unit mod 6.
    const auto m6 = Series::from_ints(RingSpec::modulo(6), {5, 1, 2});
    EXPECT_EQ(m6 * invert(m6), make_constant(RingSpec::modulo(6), 1, 2));
}

TEST(Series, Pow)
{
    EXPECT_EQ(as_ll(pow(ints({1, 1, 0}), 2)), (std::vector<long long>{1, 2, 1}));
    const auto s = ints({2, 7, 1});
    EXPECT_EQ(pow(s, 1), s);
    EXPECT_EQ(pow(s, 0), make_constant(Z, 1, 2));
    EXPECT_EQ(pow(expand_f(1, 100), 3), jacobi_cube_series(100));
    EXPECT_EQ(kind_of([&] { pow(s, -1); }), ErrorKind::NonUnitConstantTerm);
    // Large exponents with both multiplication strategies agree with repeated multiplication.
    const auto f = expand_f(1, 60);
    Series acc = make_constant(Z, 1, 60);
    for (int i = 0; i < 24; ++i) {
        acc = acc * f;
    }
    EXPECT_EQ(pow(f, 24), acc);
    EXPECT_EQ(pow(f, -24), invert(acc));
}

TEST(Series, Magnify)
{
    EXPECT_EQ(as_ll(magnify(ints({1, 1}), 3)), (std::vector<long long>{1, 0, 0, 1}));
    const auto s = ints({4, 5});
    EXPECT_EQ(magnify(s, 1), s);
    EXPECT_EQ(magnify(expand_f(1, 20), 2), expand_f(2, 40));
    EXPECT_EQ(kind_of([&] { magnify(s, 0); }), ErrorKind::DomainError);
}

TEST(Series, Shift)
{
    EXPECT_EQ(as_ll(shift(ints({1, 1}), 1)), (std::vector<long long>{0, 1, 1}));
    const auto s = ints({4, 5});
    EXPECT_EQ(shift(s, 0), s);
    // q * T2(q^8) against the discriminant mod 2.
    const auto t2 = expand_fquotient(FQuotient::tuple_regular(2, 3), 25, RingSpec::modulo(2));
    const auto lhs = truncate(shift(magnify(t2, 8), 1), 200);
    const auto delta = shift(pow(expand_f(1, 199, RingSpec::modulo(2)), 24), 1);
    EXPECT_EQ(lhs, delta);
}

TEST(Series, ExtractAp)
{
    EXPECT_EQ(as_ll(extract_ap(ints({0, 1, 2, 3, 4, 5}), 3, 1)), (std::vector<long long>{1, 4}));
    const auto s = ints({9, 8, 7});
    EXPECT_EQ(extract_ap(s, 1, 0), s);
    EXPECT_EQ(kind_of([&] { extract_ap(s, 3, 3); }), ErrorKind::DomainError);
    EXPECT_EQ(kind_of([&] { extract_ap(s, 0, 0); }), ErrorKind::DomainError);
    EXPECT_EQ(kind_of([&] { extract_ap(s, 5, 4); }), ErrorKind::TruncationTooSmall);
    EXPECT_EQ(extract_ap(s, 5, 2).trunc(), 0u);
}

TEST(Series, ReduceMod)
{
    EXPECT_EQ(as_ll(reduce_mod(ints({7, -1}), 5)), (std::vector<long long>{2, 4}));
    const auto s = expand_fquotient(FQuotient::tuple_regular(2, 3), 100);
    EXPECT_EQ(reduce_mod(reduce_mod(s, 24), 12), reduce_mod(s, 12));
    EXPECT_EQ(kind_of([&] { reduce_mod(reduce_mod(s, 24), 5); }), ErrorKind::IncompatibleModulus);
    EXPECT_EQ(kind_of([&] { reduce_mod(s, 1); }), ErrorKind::DomainError);

    const auto lhs = expand_fquotient(FQuotient(3, {{2, 4}, {3, 5}, {1, -8}, {6, -1}}), 500);
    const auto rhs = expand_fquotient(FQuotient(3, {{3, 5}, {6, -1}}), 500);
    EXPECT_EQ(reduce_mod(lhs, 24), reduce_mod(rhs, 24));
}

TEST(Series, TruncateAndFirstDifference)
{
    const auto s = ints({1, 2, 3, 4});
    EXPECT_EQ(as_ll(truncate(s, 1)), (std::vector<long long>{1, 2}));
    EXPECT_EQ(kind_of([&] { truncate(s, 9); }), ErrorKind::TruncationTooSmall);
    EXPECT_EQ(first_difference(s, ints({1, 2, 0})), std::optional<std::size_t>(2));
    EXPECT_EQ(first_difference(s, ints({1, 2})), std::nullopt);
}

TEST(Series, LargeModulusArithmetic)
{
    // Close to 2^63: exercises the 128-bit reduction path.
    const std::uint64_t m = (std::uint64_t{1} << 63) - 25;
    const auto ring = RingSpec::modulo(m);
    std::mt19937_64 rng(7);
    const auto a = brute::random_series(rng, Z, 40, true);
    const auto b = brute::random_series(rng, Z, 40, false);
    EXPECT_EQ(reduce_mod(a * b, m), reduce_mod(a, m) * reduce_mod(b, m));
    EXPECT_EQ(reduce_mod(divide(b, a), m), divide(reduce_mod(b, m), reduce_mod(a, m)));
    EXPECT_EQ(ring.modulus(), m);
}

// --- properties ---------------------------------------------------------------

class SeriesProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(SeriesProperties, RingLaws)
{
    std::mt19937_64 rng(GetParam());
    std::uniform_int_distribution<std::size_t> len(0, 64);
    for (int round = 0; round < 20; ++round) {
        const std::size_t n = len(rng);
        const auto a = brute::random_series(rng, Z, n, false);
        const auto b = brute::random_series(rng, Z, n, false);
        const auto c = brute::random_series(rng, Z, n, false);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(make_constant(Z, 1, n) * a, a);
        for (std::uint64_t m : {2ull, 24ull, 1000003ull, (1ull << 40) + 15}) {
            EXPECT_EQ(reduce_mod(a * b, m), reduce_mod(a, m) * reduce_mod(b, m));
            EXPECT_EQ(reduce_mod(a + b, m), reduce_mod(a, m) + reduce_mod(b, m));
        }
    }
}

TEST_P(SeriesProperties, InverseAndPowers)
{
    std::mt19937_64 rng(GetParam());
    for (int round = 0; round < 10; ++round) {
        const auto u = brute::random_series(rng, Z, 30, true);
        const auto one = make_constant(Z, 1, 30);
        EXPECT_EQ(u * invert(u), one);
        EXPECT_EQ(invert(u) * u, one);
        for (int e1 = -3; e1 <= 3; ++e1) {
            for (int e2 = -3; e2 <= 3; ++e2) {
                EXPECT_EQ(pow(u, e1 + e2), pow(u, e1) * pow(u, e2));
            }
        }
        const auto um = reduce_mod(u, 24);
        EXPECT_EQ(um * invert(um), make_constant(RingSpec::modulo(24), 1, 30));
    }
}

TEST_P(SeriesProperties, DissectionCompleteness)
{
    std::mt19937_64 rng(GetParam());
    for (std::size_t m = 1; m <= 6; ++m) {
        const auto s = brute::random_series(rng, Z, 59, false);
        std::vector<Integer> acc(s.trunc() + 1, 0);
        for (std::size_t r = 0; r < m; ++r) {
            const auto piece = shift(magnify(extract_ap(s, m, r), m), r);
            for (std::size_t i = 0; i <= std::min(piece.trunc(), s.trunc()); ++i) {
                acc[i] += piece.coeff(static_cast<std::int64_t>(i));
            }
        }
        EXPECT_EQ(Series::from_integers(Z, acc), s) << "m = " << m;
    }
}

TEST_P(SeriesProperties, SparseAndDenseMultiplyAgree)
{
    std::mt19937_64 rng(GetParam());
    const std::size_t n = 300;
    const auto dense = brute::random_series(rng, Z, n, true);
    const auto sparse = expand_f(3, n);
    std::vector<Integer> c(n + 1, 0);
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; i + j <= n; ++j) {
            c[i + j] += dense.coeff(static_cast<std::int64_t>(i)) * sparse.coeff(static_cast<std::int64_t>(j));
        }
    }
    EXPECT_EQ(dense * sparse, Series::from_integers(Z, c));
    EXPECT_EQ(sparse * dense, Series::from_integers(Z, c));
    for (std::uint64_t m : {6ull, 4294967311ull}) {
        EXPECT_EQ(reduce_mod(dense, m) * reduce_mod(sparse, m), reduce_mod(Series::from_integers(Z, c), m));
        EXPECT_EQ(divide(reduce_mod(Series::from_integers(Z, c), m), reduce_mod(sparse, m)), reduce_mod(dense, m));
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, SeriesProperties, ::testing::Values(1u, 2u, 3u, 20240611u));

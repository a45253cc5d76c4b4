#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "regulus/error.hpp"
#include "regulus/etaq.hpp"
#include "regulus/numtheory.hpp"
#include "support/brute.hpp"

using namespace regulus;

namespace {

std::vector<std::uint64_t> primes_upto(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p <= n; ++p) {
        if (is_prime(p)) {
            out.push_back(p);
        }
    }
    return out;
}

// eta(4z)^6 = q f4^6.
Series eta4z6(std::size_t trunc) { return shift(expand_fquotient(FQuotient::f(4, 6), trunc - 1), 1); }

} // namespace

TEST(Symbols, Legendre)
{
    EXPECT_EQ(legendre(3, 7), -1);
    EXPECT_EQ(legendre(14, 7), 0);
    EXPECT_EQ(legendre(4, 5), 1);
    EXPECT_EQ(legendre(-1, 5), 1);
    EXPECT_THROW(legendre(3, 2), Error);
    EXPECT_THROW(legendre(3, 9), Error);
    // Euler's criterion, independently.
    for (std::uint64_t p : {3u, 5u, 7u, 11u, 13u, 101u}) {
        for (long a = -30; a <= 30; ++a) {
            Integer e;
            Integer base = a;
            mpz_powm_ui(e.get_mpz_t(), base.get_mpz_t(), (p - 1) / 2, Integer(static_cast<unsigned long>(p)).get_mpz_t());
            const int expect = e == 0 ? 0 : (e == 1 ? 1 : -1);
            EXPECT_EQ(legendre(a, p), expect) << a << " " << p;
        }
    }
}

TEST(Symbols, LegendreMultiplicative)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> d(-1000, 1000);
    for (std::uint64_t p : {3u, 5u, 7u, 11u, 13u}) {
        for (int i = 0; i < 200; ++i) {
            const long a = d(rng);
            const long b = d(rng);
            EXPECT_EQ(legendre(Integer(a) * b, p), legendre(a, p) * legendre(b, p));
        }
    }
}

TEST(Symbols, Kronecker)
{
    EXPECT_EQ(kronecker(-4, 1), 1);
    EXPECT_EQ(kronecker(2, 7), 1);
    EXPECT_EQ(kronecker(2, 7), legendre(2, 7));
    for (long d = 1; d <= 200; d += 4) {
        EXPECT_EQ(kronecker(-1, d), 1) << d;
    }
    EXPECT_EQ(kronecker(-4, 3), -1);
    EXPECT_EQ(kronecker(-4, 2), 0);
    EXPECT_EQ(kronecker(5, 2), -1);
}

TEST(Tau, SmallValues)
{
    const auto t = tau_exact(12);
    EXPECT_EQ(t[1], 1);
    EXPECT_EQ(t[2], -24);
    EXPECT_EQ(t[3], 252);
    EXPECT_EQ(t[6], t[2] * t[3]);
    EXPECT_EQ(t[12], -370944);
    EXPECT_THROW(tau_exact(5001), Error);
    try {
        tau_exact(5001);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::CostLimit);
    }
}

TEST(Tau, MultiplicativityAndPrimePowers)
{
    const auto t = tau_exact(3000);
    for (std::size_t m = 1; m <= 3000; ++m) {
        for (std::size_t n = m; m * n <= 3000; ++n) {
            if (std::gcd(m, n) == 1) {
                ASSERT_EQ(t[m * n], t[m] * t[n]) << m << " " << n;
            }
        }
    }
    for (std::uint64_t p : {2u, 3u, 5u}) {
        const Integer p11 = [&] {
            Integer v;
            mpz_ui_pow_ui(v.get_mpz_t(), p, 11);
            return v;
        }();
        for (std::uint64_t a = p * p, b = p, c = 1; a <= 3000; c = b, b = a, a *= p) {
            EXPECT_EQ(t[a], t[p] * t[b] - p11 * t[c]) << a;
        }
    }
}

TEST(Tau, ParityOracle)
{
    EXPECT_EQ(tau_mod2(9), 1);
    EXPECT_THROW(tau_mod2(0), Error);
    const auto t = tau_exact(3000);
    for (std::uint64_t n = 1; n <= 3000; ++n) {
        Integer r;
        mpz_fdiv_r_ui(r.get_mpz_t(), t[n].get_mpz_t(), 2);
        ASSERT_EQ(tau_mod2(n), r.get_si()) << n;
    }
    for (auto p : primes_upto(500)) {
        EXPECT_EQ(tau_mod2(p), 0);
    }
}

TEST(Hecke, DiscriminantEigenform)
{
    const auto t = tau_exact(1000);
    const Series delta = Series::from_integers(RingSpec::exact(), t);
    for (std::uint64_t p : {2u, 3u, 5u}) {
        const Series img = hecke_Tp(delta, p, 12, CharacterSpec::trivial());
        EXPECT_EQ(img.trunc(), 1000 / p);
        EXPECT_EQ(img, scale(truncate(delta, 1000 / p), t[p])) << p;
    }
    EXPECT_TRUE(hecke_Tp(Series::zero(RingSpec::exact(), 30), 3, 12, CharacterSpec::trivial()).is_zero());
    // Coefficient identity tau(pn) + p^11 tau(n/p) = tau(p) tau(n) for pn <= 3000.
    const auto big = tau_exact(3000);
    for (std::uint64_t p : {2u, 3u, 5u, 7u}) {
        Integer p11;
        mpz_ui_pow_ui(p11.get_mpz_t(), p, 11);
        for (std::uint64_t n = 1; p * n <= 3000; ++n) {
            Integer lhs = big[p * n] + (n % p == 0 ? p11 * big[n / p] : Integer(0));
            ASSERT_EQ(lhs, big[p] * big[n]);
        }
    }
}

TEST(Hecke, Eta4zSixth)
{
    const std::size_t N = 2000;
    const Series f = eta4z6(N);
    const CharacterSpec chi{-4, 16};
    EXPECT_EQ(chi(3), -1);
    EXPECT_EQ(chi(2), 0);
    EXPECT_TRUE(hecke_Tp(f, 3, 3, chi).is_zero());
    for (std::uint64_t p : {5u, 7u, 13u, 17u}) {
        const Series img = hecke_Tp(f, p, 3, chi);
        EXPECT_EQ(img, scale(truncate(f, N / p), f.coeff(static_cast<std::int64_t>(p)))) << p;
    }
    // Support of q f4^6 is n ≡ 1 (mod 4): a(p) vanishes for p ≡ 3 (mod 4) and p = 2,
    // but only its parity vanishes for p ≡ 5 (mod 8), e.g. a(5) = -6, a(13) = 10.
    for (auto p : primes_upto(100)) {
        const Integer ap = f.coeff(static_cast<std::int64_t>(p));
        if (p % 4 != 1) {
            EXPECT_EQ(ap, 0) << p;
        } else if (p % 8 == 5) {
            EXPECT_EQ(ap % 2, 0) << p;
        }
    }
    EXPECT_EQ(f.coeff(5), -6);
    EXPECT_EQ(f.coeff(13), 10);
    // Mod 2 it agrees with eta(8z)^3 = q f8^3, which is supported on n ≡ 1 (mod 8).
    EXPECT_EQ(reduce_mod(f, 2), reduce_mod(shift(jacobi_cube_series(N - 1, RingSpec::exact(), 8), 1), 2));
    // Modular ring gives the same image.
    EXPECT_EQ(hecke_Tp(reduce_mod(f, 6), 5, 3, chi), reduce_mod(hecke_Tp(f, 5, 3, chi), 6));
}

TEST(Newman, Params)
{
    const auto np = NewmanParams::f3_6_over_f1(5);
    EXPECT_EQ(np.epsilon(), Rational(5, 2));
    EXPECT_EQ(np.t(), Rational(17, 24));
    EXPECT_EQ(np.delta(), 17);
    EXPECT_EQ(np.theta(), 2 * 729);
    EXPECT_EQ(np.outer_power(), 125);
    EXPECT_EQ(np.inner_power(), 5);
    for (std::uint64_t p : {5u, 7u, 11u, 13u, 17u, 19u, 23u}) {
        const auto q = NewmanParams::f3_6_over_f1(p);
        EXPECT_EQ(q.delta(), static_cast<std::int64_t>(17 * (p * p - 1) / 24));
        EXPECT_EQ(legendre(q.theta(), p), legendre(2, p)) << p;
    }
    EXPECT_THROW(NewmanParams::make(-1, 6, 3, 3), Error);  // p = q
    EXPECT_THROW(NewmanParams::make(-1, 5, 3, 5), Error);  // same parity
    EXPECT_THROW(NewmanParams::make(0, 5, 3, 5), Error);
    EXPECT_THROW(NewmanParams::make(-1, 6, 4, 5), Error);  // q not prime
    EXPECT_THROW(NewmanParams::make(1, 6, 3, 2), Error);   // Delta = 19*3/24 not integral
}

TEST(Newman, OmegaAtFiveAndSeven)
{
    const Series a = expand_fquotient(FQuotient(1, {{3, 6}, {1, -1}}), 200);
    EXPECT_EQ(a.coeff(17) % 2, 1);
    const Integer w5 = omega(5, a);
    EXPECT_EQ(w5 % 2, 0);
    EXPECT_EQ(w5, a.coeff(17) + 5 * legendre(2, 5) * legendre(-17, 5));
    EXPECT_THROW(omega(11, truncate(a, 50)), Error);
}

TEST(Newman, RecurrenceHoldsExactly)
{
    for (auto [p, nmax] : {std::pair<std::uint64_t, std::size_t>{5, 300}, {7, 300}}) {
        const auto params = NewmanParams::f3_6_over_f1(p);
        const auto trunc = static_cast<std::size_t>(p * p * nmax + params.delta());
        const Series a = newman_product(params, trunc);
        const auto r = newman_verify(params, a, nmax);
        EXPECT_TRUE(r.passed()) << to_json_line(r);
        EXPECT_EQ(r.checked_count, nmax + 1);
        // n = 0 reduces to a(Delta) = gamma(0).
        const Integer gamma0 = omega(params, a) - params.inner_power() * legendre(params.theta(), p) *
                                                      legendre(Integer(-params.delta()), p);
        EXPECT_EQ(a.coeff(params.delta()), gamma0);
    }
}

TEST(Newman, CorruptedSeriesFails)
{
    const auto params = NewmanParams::f3_6_over_f1(5);
    Series a = newman_product(params, 25 * 20 + 17);
    auto c = a.to_integers();
    c[25 * 3 + 17] += 1;
    const auto r = newman_verify(params, Series::from_integers(RingSpec::exact(), c), 20);
    EXPECT_FALSE(r.passed());
    ASSERT_TRUE(r.counterexample.has_value());
    EXPECT_EQ(r.counterexample->n, 3);
    EXPECT_THROW(newman_verify(params, truncate(a, 100), 20), Error);
}

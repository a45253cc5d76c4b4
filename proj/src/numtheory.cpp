#include "regulus/numtheory.hpp"

#include <cmath>

#include "regulus/error.hpp"
#include "regulus/etaq.hpp"

namespace regulus {

namespace {

Integer upow(std::uint64_t base, unsigned long e)
{
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), base, e);
    return out;
}

Integer big(std::uint64_t v)
{
    Integer out;
    mpz_import(out.get_mpz_t(), 1, 1, sizeof v, 0, 0, &v);
    return out;
}

// Integral value of a rational known to be an integer.
Integer as_integer(const Rational& q, const char* what)
{
    if (q.get_den() != 1) {
        fail(ErrorKind::DomainError, std::string(what) + " is not an integer: " + q.get_str());
    }
    return q.get_num();
}

} // namespace

bool is_prime(std::uint64_t n) { return n >= 2 && mpz_probab_prime_p(big(n).get_mpz_t(), 40) != 0; }

int legendre(const Integer& a, std::uint64_t p)
{
    if (p == 2 || !is_prime(p)) {
        fail(ErrorKind::DomainError, "legendre needs an odd prime, got " + std::to_string(p));
    }
    return mpz_legendre(Integer(a).get_mpz_t(), big(p).get_mpz_t());
}

int kronecker(const Integer& a, const Integer& n) { return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t()); }

int CharacterSpec::operator()(const Integer& d) const
{
    if (gcd(d, big(level)) != 1) {
        return 0;
    }
    return kronecker(discriminant, d);
}

std::string CharacterSpec::to_string() const
{
    if (is_trivial()) {
        return "trivial mod " + std::to_string(level);
    }
    return "kronecker(" + discriminant.get_str() + ", .) mod " + std::to_string(level);
}

std::vector<Integer> tau_exact(std::size_t nmax)
{
    if (nmax > kTauLimit) {
        fail(ErrorKind::CostLimit, "tau_exact is capped at n <= " + std::to_string(kTauLimit));
    }
    if (nmax == 0) {
        return {Integer(0)};
    }
    // 24 = 8 Jacobi cubes; each multiplication is sparse.
    const Series cube = jacobi_cube_series(nmax - 1);
    Series acc = cube;
    for (int i = 1; i < 8; ++i) {
        acc = mul(acc, cube);
    }
    return shift(acc, 1).to_integers();
}

int tau_mod2(std::uint64_t n)
{
    if (n == 0) {
        fail(ErrorKind::DomainError, "tau(0) is not defined");
    }
    if (n % 2 == 0) {
        return 0;
    }
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) {
        --r;
    }
    while ((r + 1) * (r + 1) <= n) {
        ++r;
    }
    return r * r == n ? 1 : 0;
}

Series hecke_Tp(const Series& f, std::uint64_t p, unsigned weight, const CharacterSpec& chi)
{
    if (!is_prime(p)) {
        fail(ErrorKind::DomainError, "hecke_Tp needs a prime, got " + std::to_string(p));
    }
    if (weight < 1) {
        fail(ErrorKind::DomainError, "hecke_Tp needs weight >= 1");
    }
    const std::size_t out_trunc = f.trunc() / p;
    const Integer factor = chi(big(p)) * upow(p, weight - 1);
    std::vector<Integer> c(out_trunc + 1);
    for (std::size_t n = 0; n <= out_trunc; ++n) {
        c[n] = f.coeff(static_cast<std::int64_t>(p * n));
        if (n % p == 0 && factor != 0) {
            c[n] += factor * f.coeff(static_cast<std::int64_t>(n / p));
        }
    }
    return Series::from_integers(f.ring(), std::move(c));
}

// ---------------------------------------------------------------------------

NewmanParams NewmanParams::make(int r, int s, std::uint64_t qprime, std::uint64_t p)
{
    auto violated = [](const std::string& what) { fail(ErrorKind::HypothesisViolated, what); };
    if (!is_prime(p) || !is_prime(qprime)) {
        violated("p and q must be primes");
    }
    if (p == qprime) {
        violated("p and q must be distinct");
    }
    if (r == 0 || s == 0) {
        violated("r and s must be nonzero");
    }
    if ((r - s) % 2 == 0) {
        violated("r and s must have opposite parity");
    }
    if (r + s < 3) {
        violated("r + s >= 3 is needed for the integral powers p^{2eps-2}, p^{eps-3/2}");
    }
    NewmanParams out{r, s, qprime, p};
    const Integer num = (Integer(r) + Integer(s) * big(qprime)) * (big(p) * big(p) - 1);
    if (num % 24 != 0) {
        violated("Delta = (r + s q)(p^2 - 1)/24 must be an integer");
    }
    return out;
}

Rational NewmanParams::epsilon() const { return Rational(r + s, 2); }

Rational NewmanParams::t() const
{
    Rational out(Integer(r) + Integer(s) * big(qprime), 24);
    out.canonicalize();
    return out;
}

std::int64_t NewmanParams::delta() const
{
    return as_integer(t() * (big(p) * big(p) - 1), "Delta").get_si();
}

Integer NewmanParams::theta() const
{
    // (1 - r - s)/2 is an integer because r + s is odd.
    const int sign_exp = (1 - r - s) / 2;
    const int sign = (sign_exp % 2 == 0) ? 1 : -1;
    // For s < 0 only the Legendre symbol of theta is ever used, and (q^{-1}/p) = (q/p),
    // so q^{|s|} is a valid integer representative.
    const Integer qs = upow(qprime, static_cast<unsigned long>(std::abs(s)));
    return sign * 2 * qs;
}

Integer NewmanParams::outer_power() const { return upow(p, static_cast<unsigned long>(r + s - 2)); }
Integer NewmanParams::inner_power() const { return upow(p, static_cast<unsigned long>((r + s - 3) / 2)); }

Integer omega(const NewmanParams& params, const Series& aseries)
{
    const std::int64_t d = params.delta();
    if (aseries.trunc() < static_cast<std::size_t>(d)) {
        fail(ErrorKind::TruncationTooSmall, "omega needs the a-series to q^" + std::to_string(d));
    }
    return aseries.coeff(d) +
           params.inner_power() * legendre(params.theta(), params.p) * legendre(Integer(-d), params.p);
}

Integer omega(std::uint64_t p, const Series& aseries) { return omega(NewmanParams::f3_6_over_f1(p), aseries); }

Series newman_product(const NewmanParams& params, std::size_t trunc)
{
    FQuotient fq;
    fq.times(1, params.r).times(static_cast<int>(params.qprime), params.s);
    return expand_fquotient(fq, trunc);
}

VerificationReport newman_verify(const NewmanParams& params, const Series& phiseries, std::size_t nmax)
{
    if (!phiseries.ring().is_exact()) {
        fail(ErrorKind::RingMismatch, "newman_verify needs an exact series");
    }
    const auto p = static_cast<std::int64_t>(params.p);
    const std::int64_t d = params.delta();
    const auto need = static_cast<std::size_t>(p * p * static_cast<std::int64_t>(nmax) + d);
    if (phiseries.trunc() < need) {
        fail(ErrorKind::TruncationTooSmall, "newman_verify needs trunc >= " + std::to_string(need));
    }
    const Integer w = omega(params, phiseries);
    const int theta_symbol = legendre(params.theta(), params.p);
    const Integer inner = params.inner_power() * theta_symbol;
    const Integer outer = params.outer_power();

    VerificationReport r;
    r.id = "newman(r=" + std::to_string(params.r) + ",s=" + std::to_string(params.s) +
           ",q=" + std::to_string(params.qprime) + ",p=" + std::to_string(params.p) + ")";
    r.tag = ClaimTag::Theorem;
    r.trunc = phiseries.trunc();
    r.notes.push_back("omega=" + w.get_str());
    r.notes.push_back("Delta=" + std::to_string(d));
    r.notes.push_back("(theta/p)=" + std::to_string(theta_symbol) +
                      ", (2/p)=" + std::to_string(legendre(2, params.p)));
    {
        Integer rem;
        mpz_tdiv_r(rem.get_mpz_t(), w.get_mpz_t(), outer.get_mpz_t());
        r.notes.push_back(std::string("p^{2eps-2} | omega: ") + (rem == 0 ? "yes" : "no"));
    }
    for (std::int64_t n = 0; n <= static_cast<std::int64_t>(nmax); ++n) {
        const std::int64_t shifted = n - d;
        Integer rhs = (w - inner * legendre(Integer(shifted), params.p)) * phiseries.coeff(n);
        if (shifted >= 0 && shifted % (p * p) == 0) {
            rhs -= outer * phiseries.coeff(shifted / (p * p));
        }
        const Integer lhs = phiseries.coeff(p * p * n + d);
        ++r.checked_count;
        r.checked_upto = n;
        if (lhs != rhs) {
            r.status = Status::Fail;
            r.counterexample = Counterexample{n, p * p * n + d, lhs, rhs};
            break;
        }
    }
    return r;
}

} // namespace regulus

#include "regulus/modform.hpp"

#include <numeric>
#include <sstream>

#include "regulus/error.hpp"
#include "regulus/etaq.hpp"

namespace regulus {

namespace {

Integer big(std::uint64_t v)
{
    Integer out;
    mpz_import(out.get_mpz_t(), 1, 1, sizeof v, 0, 0, &v);
    return out;
}

Integer upow(std::uint64_t base, unsigned long e)
{
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), base, e);
    return out;
}

Rational frac(const Integer& num, const Integer& den)
{
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::map<std::uint64_t, int> factor(std::uint64_t n)
{
    std::map<std::uint64_t, int> out;
    for (std::uint64_t f = 2; f * f <= n; ++f) {
        while (n % f == 0) {
            ++out[f];
            n /= f;
        }
    }
    if (n > 1) {
        ++out[n];
    }
    return out;
}

int valuation(std::uint64_t n, std::uint64_t p)
{
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

} // namespace

EtaQuotientSpec EtaQuotientSpec::make(std::uint64_t level, const std::map<std::uint64_t, std::int64_t>& exps)
{
    if (level == 0) {
        fail(ErrorKind::DomainError, "level must be positive");
    }
    EtaQuotientSpec spec{level, {}};
    for (const auto& [delta, r] : exps) {
        if (delta == 0 || level % delta != 0) {
            fail(ErrorKind::DomainError,
                 "eta(" + std::to_string(delta) + ") does not divide the level " + std::to_string(level));
        }
        if (r != 0) {
            spec.exps[delta] = r;
        }
    }
    if (spec.exps.empty()) {
        fail(ErrorKind::DomainError, "eta quotient needs at least one nonzero exponent");
    }
    return spec;
}

std::string EtaQuotientSpec::to_string() const
{
    std::ostringstream os;
    os << "N=" << level << ";";
    for (const auto& [delta, r] : exps) {
        os << " eta(" << delta << ")^" << r;
    }
    return os.str();
}

Rational weight(const EtaQuotientSpec& spec)
{
    Integer sum = 0;
    for (const auto& [delta, r] : spec.exps) {
        sum += r;
    }
    return frac(sum, 2);
}

Rational q_offset(const EtaQuotientSpec& spec)
{
    Integer sum = 0;
    for (const auto& [delta, r] : spec.exps) {
        sum += big(delta) * r;
    }
    return frac(sum, 24);
}

OnoCheck check_ono_conditions(const EtaQuotientSpec& spec)
{
    OnoCheck c;
    c.sum_delta_r = 0;
    c.sum_codelta_r = 0;
    for (const auto& [delta, r] : spec.exps) {
        c.sum_delta_r += big(delta) * r;
        c.sum_codelta_r += big(spec.level / delta) * r;
    }
    c.integral_weight = weight(spec).get_den() == 1;
    if (!c.integral_weight) {
        c.reasons.push_back("weight " + weight(spec).get_str() + " is not an integer");
    }
    if (c.sum_delta_r % 24 != 0) {
        c.reasons.push_back("sum delta r_delta = " + c.sum_delta_r.get_str() + " is not 0 mod 24");
    }
    if (c.sum_codelta_r % 24 != 0) {
        c.reasons.push_back("sum (N/delta) r_delta = " + c.sum_codelta_r.get_str() + " is not 0 mod 24");
    }
    c.pass = c.reasons.empty();
    return c;
}

CharacterSpec character_of(const EtaQuotientSpec& spec)
{
    const OnoCheck c = check_ono_conditions(spec);
    if (!c.pass) {
        fail(ErrorKind::ConditionsNotMet, spec.to_string() + ": " + c.reasons.front());
    }
    const Integer k = weight(spec).get_num();
    // Only the square class of prod delta^{r_delta} matters, so track prime parities.
    std::map<std::uint64_t, int> parity;
    for (const auto& [delta, r] : spec.exps) {
        for (const auto& [prime, e] : factor(delta)) {
            parity[prime] ^= static_cast<int>((e * (r % 2 == 0 ? 0 : 1)) & 1);
        }
    }
    Integer s = (k % 2 == 0) ? 1 : -1;
    for (const auto& [prime, odd] : parity) {
        if (odd) {
            s *= big(prime);
        }
    }
    Integer r4;
    mpz_fdiv_r_ui(r4.get_mpz_t(), s.get_mpz_t(), 4);
    const Integer disc = (r4 == 1) ? s : 4 * s;
    return CharacterSpec{disc, spec.level};
}

Rational cusp_order(const EtaQuotientSpec& spec, std::uint64_t d)
{
    if (d == 0 || spec.level % d != 0) {
        fail(ErrorKind::NotADivisor, std::to_string(d) + " does not divide " + std::to_string(spec.level));
    }
    const std::uint64_t n = spec.level;
    Rational sum = 0;
    for (const auto& [delta, r] : spec.exps) {
        const std::uint64_t g = std::gcd(d, delta);
        sum += frac(big(g) * big(g) * r, big(delta));
    }
    Rational out = sum * frac(big(n), big(24) * big(std::gcd(d, n / d)) * big(d));
    out.canonicalize();
    return out;
}

std::vector<std::uint64_t> divisors(std::uint64_t n)
{
    std::vector<std::uint64_t> small;
    std::vector<std::uint64_t> large;
    for (std::uint64_t f = 1; f * f <= n; ++f) {
        if (n % f == 0) {
            small.push_back(f);
            if (f != n / f) {
                large.push_back(n / f);
            }
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

std::string HolomorphyVerdict::to_string() const
{
    switch (kind) {
    case Kind::Cusp:
        return "cusp";
    case Kind::Holomorphic:
        return "holomorphic";
    case Kind::Fail:
        return "fail(d=" + std::to_string(offending ? offending->d : 0) +
               ", order=" + (offending ? offending->order.get_str() : std::string("?")) + ")";
    }
    return "?";
}

HolomorphyVerdict is_holomorphic(const EtaQuotientSpec& spec)
{
    const OnoCheck c = check_ono_conditions(spec);
    if (!c.pass) {
        fail(ErrorKind::ConditionsNotMet, spec.to_string() + ": " + c.reasons.front());
    }
    HolomorphyVerdict v;
    bool all_positive = true;
    for (std::uint64_t d : divisors(spec.level)) {
        CuspOrder co{d, cusp_order(spec, d)};
        if (co.order < 0 && !v.offending) {
            v.offending = co;
        }
        all_positive = all_positive && co.order > 0;
        v.orders.push_back(std::move(co));
    }
    v.kind = v.offending ? HolomorphyVerdict::Kind::Fail
                         : (all_positive ? HolomorphyVerdict::Kind::Cusp : HolomorphyVerdict::Kind::Holomorphic);
    return v;
}

// ---------------------------------------------------------------------------

Rational lemma_cusp_expression(const BSeriesParams& b, std::uint64_t t, int s)
{
    const Integer pma = upow(b.p, static_cast<unsigned long>(b.m + b.a));
    const Integer pm_a = upow(b.p, static_cast<unsigned long>(b.m - b.a));
    const Integer p2s = upow(b.p, static_cast<unsigned long>(2 * s));
    return frac(Integer(b.ell), big(t) * big(t)) * (frac(pma - b.k, p2s) - Rational(pm_a)) + Rational(b.k);
}

Rational lemma_cusp_inequality(const BSeriesParams& b, std::uint64_t d)
{
    const auto ell = static_cast<std::uint64_t>(b.ell);
    const Integer pma = upow(b.p, static_cast<unsigned long>(b.m + b.a));
    const Integer pm_a = upow(b.p, static_cast<unsigned long>(b.m - b.a));
    const std::uint64_t pa = upow(b.p, static_cast<unsigned long>(b.a)).get_ui();
    const Integer g24 = big(std::gcd(d, std::uint64_t{24}));
    const Integer g24l = big(std::gcd(d, 24 * ell));
    const Integer g24pa = big(std::gcd(d, 24 * pa));
    return frac(Integer(b.ell) * (pma - b.k) * g24 * g24, g24l * g24l) -
           frac(Integer(b.ell) * pm_a * g24pa * g24pa, g24l * g24l) + Rational(b.k);
}

BSeriesReport b_series_check(const BSeriesParams& b, std::size_t trunc, bool enforce_bound)
{
    auto violated = [](const std::string& what) { fail(ErrorKind::HypothesisViolated, what); };
    if (b.ell < 2) {
        violated("l >= 2");
    }
    if (!is_prime(b.p)) {
        violated("p must be prime");
    }
    if (b.a < 1 || valuation(static_cast<std::uint64_t>(b.ell), b.p) != b.a) {
        violated("p^a must exactly divide l (a >= 1)");
    }
    if (b.m <= b.a) {
        violated("m > a");
    }
    if (b.k < 1) {
        violated("k >= 1");
    }
    if (b.m + b.a > 40 || upow(b.p, static_cast<unsigned long>(b.m + b.a)) > Integer(1) << 20) {
        violated("p^{m+a} too large for desk-scale expansion (limit 2^20)");
    }
    const std::uint64_t pa = upow(b.p, static_cast<unsigned long>(b.a)).get_ui();
    const std::uint64_t pm = upow(b.p, static_cast<unsigned long>(b.m)).get_ui();
    const std::uint64_t pma = pa * pm;
    const auto ell = static_cast<std::uint64_t>(b.ell);

    BSeriesReport out;
    auto& rep = out.report;
    rep.id = "bseries(l=" + std::to_string(b.ell) + ",p=" + std::to_string(b.p) + ",a=" + std::to_string(b.a) +
             ",m=" + std::to_string(b.m) + ",k=" + std::to_string(b.k) + ")";
    rep.tag = ClaimTag::Theorem;
    rep.trunc = trunc;

    if (pa * pa < ell) {
        violated("p^{2a} >= l");
    }
    // The bound is taken for every s in [0, a); the tightest is s = a - 1.
    out.k_bound_holds = true;
    for (int s = 0; s < b.a; ++s) {
        const Rational bound = Rational(big(pma)) * (Rational(1) - frac(upow(b.p, 2 * s), upow(b.p, 2 * b.a)));
        if (Rational(b.k) > bound) {
            out.k_bound_holds = false;
            if (enforce_bound) {
                violated("k <= p^{m+a}(1 - p^{2s-2a}) fails at s = " + std::to_string(s) + " (bound " +
                         bound.get_str() + ")");
            }
        }
    }
    rep.notes.push_back("k bound taken for all s in [0, a): " + std::string(out.k_bound_holds ? "holds" : "violated"));

    auto spec_at = [&](std::uint64_t level) {
        std::map<std::uint64_t, std::int64_t> e;
        e[24 * ell] += b.k;
        e[24] += static_cast<std::int64_t>(pma) - b.k;
        e[24 * pa] -= static_cast<std::int64_t>(pm);
        return EtaQuotientSpec::make(level, e);
    };

    // (ii) level: smallest 24 l u meeting the conditions, against the adopted 576 l.
    out.adopted_level = 576 * ell;
    const std::int64_t level_term =
        static_cast<std::int64_t>(b.k) * (1 - b.ell) + b.ell * static_cast<std::int64_t>(pm / pa) *
                                                            static_cast<std::int64_t>(pa * pa - 1);
    for (std::uint64_t u = 1; u <= 24; ++u) {
        if ((static_cast<std::int64_t>(u) * level_term) % 24 == 0) {
            out.minimal_level = 24 * ell * u;
            break;
        }
    }
    out.minimal_divides_adopted = out.minimal_level != 0 && out.adopted_level % out.minimal_level == 0;
    out.spec = spec_at(out.adopted_level);
    out.weight = weight(out.spec);
    out.conditions = check_ono_conditions(out.spec);
    rep.notes.push_back("weight=" + out.weight.get_str());
    rep.notes.push_back("minimal_level=" + std::to_string(out.minimal_level));
    rep.notes.push_back("adopted_level=" + std::to_string(out.adopted_level));

    bool ok = out.conditions.pass && out.minimal_divides_adopted;
    if (out.conditions.pass) {
        out.character = character_of(out.spec);
        out.holomorphy = is_holomorphic(out.spec);
        rep.notes.push_back("character=" + out.character->to_string());
        rep.notes.push_back("cusps=" + out.holomorphy.to_string());
        ok = ok && out.holomorphy.kind != HolomorphyVerdict::Kind::Fail;
    } else {
        for (const auto& why : out.conditions.reasons) {
            rep.notes.push_back("conditions: " + why);
        }
    }

    // (i) congruence mod p^m with the q^{k(l-1)} offset.
    const RingSpec ring = RingSpec::modulo(pm);
    const std::size_t offset = static_cast<std::size_t>(b.k) * (ell - 1);
    Series lhs = Series::zero(ring, trunc);
    Series rhs = Series::zero(ring, trunc);
    if (trunc >= offset) {
        FQuotient fq;
        for (const auto& [delta, r] : out.spec.exps) {
            fq.times(static_cast<int>(delta), static_cast<int>(r));
        }
        lhs = shift(expand_fquotient(fq, trunc - offset, ring), offset);
        const std::size_t inner = (trunc - offset + 23) / 24;
        const Series t = expand_fquotient(FQuotient::tuple_regular(b.ell, b.k), inner, ring);
        rhs = truncate(shift(magnify(t, 24), offset), trunc);
    }
    out.congruence_checked = lhs.trunc() + 1;
    rep.checked_count = out.congruence_checked;
    rep.checked_upto = static_cast<std::int64_t>(lhs.trunc());
    if (auto diff = first_difference(lhs, rhs)) {
        const auto i = static_cast<std::int64_t>(*diff);
        rep.counterexample = Counterexample{i, i, lhs.coeff(i), rhs.coeff(i)};
        ok = false;
    }
    rep.status = ok ? Status::Pass : Status::Fail;
    return out;
}

} // namespace regulus

#include "regulus/congruence.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <future>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "regulus/error.hpp"
#include "regulus/numtheory.hpp"
#include "regulus/oracles.hpp"

namespace regulus {

namespace {

using json = nlohmann::json;

const FQuotient& t2_series()
{
    static const FQuotient q = FQuotient::tuple_regular(2, 3);
    return q;
}

const FQuotient& t4_series()
{
    static const FQuotient q = FQuotient::tuple_regular(4, 3);
    return q;
}

// Parameters become progression constants; anything past 2^62 is out of reach anyway.
std::uint64_t to_u64(const Integer& v, const std::string& what)
{
    if (sgn(v) < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 62) {
        fail(ErrorKind::DomainError, what + " = " + v.get_str() + " is out of range");
    }
    return static_cast<std::uint64_t>(mpz_get_ui(v.get_mpz_t()));
}

Integer ipow(std::uint64_t base, std::int64_t e)
{
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), base, static_cast<unsigned long>(e));
    return out;
}

/// (num - sub) / 8, which every family guarantees to be integral.
Integer eighth(const Integer& num, long sub)
{
    Integer v = num - sub;
    if (v % 8 != 0) {
        fail(ErrorKind::DomainError, "offset " + v.get_str() + "/8 is not integral");
    }
    return v / 8;
}

std::string join_params(std::initializer_list<std::pair<const char*, std::int64_t>> kv)
{
    std::string s;
    for (const auto& [k, v] : kv) {
        s += (s.empty() ? "" : ",") + std::string(k) + "=" + std::to_string(v);
    }
    return s;
}

CongruenceClaim make_claim(std::string id, const FQuotient& fq, const Integer& a, const Integer& b,
                           std::uint64_t m, std::string provenance, ClaimTag tag = ClaimTag::Theorem)
{
    CongruenceClaim c;
    c.id = std::move(id);
    c.progression.series = fq;
    c.progression.a = to_u64(a, "a");
    c.progression.b = to_u64(b, "b");
    c.modulus = m;
    c.provenance = std::move(provenance);
    c.tag = tag;
    c.validate();
    return c;
}

[[noreturn]] void side_condition(std::string_view family, const std::string& what)
{
    fail(ErrorKind::SideConditionViolated, std::string(family) + ": " + what);
}

std::int64_t need(const std::optional<std::int64_t>& v, std::string_view family, const char* name)
{
    if (!v) {
        side_condition(family, std::string("parameter ") + name + " is required");
    }
    return *v;
}

std::int64_t nonneg(const std::optional<std::int64_t>& v, std::string_view family, const char* name,
                    std::int64_t dflt = 0)
{
    const std::int64_t x = v.value_or(dflt);
    if (x < 0) {
        side_condition(family, std::string(name) + " >= 0 required, got " + std::to_string(x));
    }
    return x;
}

std::uint64_t prime_at_least(const std::optional<std::int64_t>& v, std::string_view family, std::int64_t lo)
{
    const std::int64_t p = need(v, family, "p");
    if (p < lo || !is_prime(static_cast<std::uint64_t>(p))) {
        side_condition(family, "p must be a prime >= " + std::to_string(lo) + ", got " + std::to_string(p));
    }
    return static_cast<std::uint64_t>(p);
}

/// Explicit value checked by `ok`, or every v in [lo, hi] that passes it.
std::vector<std::int64_t> enumerate(const std::optional<std::int64_t>& v, std::int64_t lo, std::int64_t hi,
                                    const std::function<bool(std::int64_t)>& ok, std::string_view family,
                                    const std::string& condition)
{
    if (v) {
        if (*v < lo || *v > hi || !ok(*v)) {
            side_condition(family, condition + " fails at " + std::to_string(*v));
        }
        return {*v};
    }
    std::vector<std::int64_t> out;
    for (std::int64_t x = lo; x <= hi; ++x) {
        if (ok(x)) {
            out.push_back(x);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<CongruenceClaim> family_c1_4(const FamilyParams& fp)
{
    const std::int64_t al = nonneg(fp.alpha, "c1.4", "alpha");
    Integer sum_even = 0; // sum_{i=0}^{2 alpha} 9^i
    for (std::int64_t i = 0; i <= 2 * al; ++i) {
        sum_even += ipow(9, i);
    }
    const Integer sum_odd = sum_even + ipow(9, 2 * al + 1);
    const Integer a1 = ipow(3, 4 * al + 2);
    const Integer a2 = ipow(3, 4 * al + 4);
    const Integer t1 = ipow(3, 4 * al + 1);
    const Integer t3 = ipow(3, 4 * al + 3);
    const std::string tag = "[alpha=" + std::to_string(al) + "]";
    return {
        make_claim("c1.4/c0.1.4" + tag, t2_series(), a1, sum_even + t1, 24, "c1.4, first progression"),
        make_claim("c1.4/c1.1.4" + tag, t2_series(), a1, sum_even + 2 * t1, 24, "c1.4, second progression"),
        make_claim("c1.4/c2.1.4" + tag, t2_series(), a2, sum_odd + t3, 24, "c1.4, third progression"),
        make_claim("c1.4/c3.1.4" + tag, t2_series(), a2, sum_odd + 2 * t3, 24, "c1.4, fourth progression"),
    };
}

std::vector<CongruenceClaim> family_c1_4_1(const FamilyParams& fp)
{
    const std::int64_t al = nonneg(fp.alpha, "c1.4.1", "alpha");
    const std::string tag = "[alpha=" + std::to_string(al) + "]";
    const Integer p25 = ipow(25, al);
    return {
        make_claim("c1.4.1/e3.0" + tag, t4_series(), ipow(3, 2 * al + 2), eighth(17 * ipow(3, 2 * al + 1), 3), 3,
                   "c1.4.1, powers of 3 (even)"),
        make_claim("c1.4.1/e3.1" + tag, t4_series(), ipow(3, 2 * al + 3), eighth(19 * ipow(3, 2 * al + 2), 3), 3,
                   "c1.4.1, powers of 3 (odd)"),
        make_claim("c1.4.1/e2.9" + tag, t4_series(), 27 * p25, eighth(171 * p25, 3), 3, "c1.4.1, powers of 5"),
    };
}

std::vector<CongruenceClaim> family_t0_1_0_0(const FamilyParams& fp)
{
    const std::uint64_t p = prime_at_least(fp.p, "t0.1.0.0", 3);
    const auto rs = enumerate(
        fp.r, 1, static_cast<std::int64_t>(p) - 1, [p](std::int64_t r) { return legendre(8 * r + 1, p) == -1; },
        "t0.1.0.0", "Legendre symbol ((8r+1)/p) = -1");
    std::vector<CongruenceClaim> out;
    for (const auto r : rs) {
        out.push_back(make_claim("t0.1.0.0[" + join_params({{"p", static_cast<std::int64_t>(p)}, {"r", r}}) + "]", t2_series(), 9 * p,
                                 9 * r + 1, 6, "t0.1.0.0: T2(9(pn+r)+1) with ((8r+1)/p) = -1"));
    }
    return out;
}

std::vector<CongruenceClaim> family_t0_0_1(const FamilyParams& fp)
{
    const std::uint64_t p = prime_at_least(fp.p, "t0.0.1", 5);
    if (legendre(-2, p) != -1) {
        side_condition("t0.0.1", "(-2/p) = -1 fails at p = " + std::to_string(p));
    }
    const std::int64_t al = nonneg(fp.alpha, "t0.0.1", "alpha");
    auto c = make_claim("t0.0.1[" + join_params({{"p", static_cast<std::int64_t>(p)}, {"alpha", al}}) + "]", t2_series(),
                        9 * ipow(p, 2 * al + 1), eighth(9 * ipow(p, 2 * al + 2), 1), 6,
                        "t0.0.1: p-power progressions, p does not divide n");
    c.filter = IndexFilter{p, 1, 0};
    return {c};
}

std::vector<CongruenceClaim> family_t2(const FamilyParams& fp, bool remark)
{
    const std::string_view fam = remark ? "t2-remark" : "t2";
    const std::uint64_t p = remark ? 5 : prime_at_least(fp.p, fam, 5);
    if (remark && fp.p && *fp.p != 5) {
        side_condition(fam, "the remark is stated at p = 5");
    }
    if (remark && fp.j && *fp.j != 1) {
        side_condition(fam, "the remark is stated at j = 1");
    }
    const std::int64_t k = nonneg(fp.k, fam, "k");
    const Integer w = t2_omega(p);
    const bool even = mpz_even_p(w.get_mpz_t()) != 0;
    const std::string wnote = "omega(" + std::to_string(p) + ") = " + w.get_str() + (even ? " (even)" : " (odd)");
    const auto pi = static_cast<std::int64_t>(p);
    std::vector<CongruenceClaim> out;
    if (even) {
        const auto js = remark ? std::vector<std::int64_t>{1}
                               : enumerate(fp.j, 1, pi - 1, [](std::int64_t) { return true; }, fam, "1 <= j <= p-1");
        for (const auto j : js) {
            out.push_back(make_claim(std::string(fam) + "/t3.1[" + join_params({{"p", pi}, {"k", k}, {"j", j}}) + "]",
                                     t2_series(), 3 * ipow(p, 4 * k + 4),
                                     3 * ipow(p, 4 * k + 3) * j + eighth(17 * ipow(p, 4 * k + 4), 1), 12,
                                     "t2 case (i); " + wnote));
        }
        return out;
    }
    if (remark) {
        side_condition(fam, "omega(5) is odd");
    }
    const auto js = enumerate(fp.j, 1, pi - 1, [](std::int64_t) { return true; }, fam, "1 <= j <= p-1");
    for (const auto j : js) {
        out.push_back(make_claim("t2/t3.2[" + join_params({{"p", pi}, {"k", k}, {"j", j}}) + "]", t2_series(),
                                 3 * ipow(p, 6 * k + 6),
                                 3 * ipow(p, 6 * k + 5) * j + eighth(17 * ipow(p, 6 * k + 6), 1), 12,
                                 "t2 case (ii); " + wnote));
    }
    auto c = make_claim("t2/t3.3[" + join_params({{"p", pi}, {"k", k}}) + "]", t2_series(), 3 * ipow(p, 6 * k + 2),
                        eighth(17 * ipow(p, 6 * k + 2), 1), 12, "t2 case (ii), p does not divide 24n+17; " + wnote);
    c.filter = IndexFilter{p, 24, 17};
    out.push_back(c);
    return out;
}

std::vector<CongruenceClaim> family_t4(const FamilyParams& fp)
{
    const std::uint64_t p = prime_at_least(fp.p, "t4", 3);
    const auto pi = static_cast<std::int64_t>(p);
    const std::int64_t k = nonneg(fp.k, "t4", "k", 1);
    // No prime is an odd square, so tau(p) is always even; checked rather than assumed.
    if (tau_mod2(p) != 0) {
        side_condition("t4", "tau(p) == 0 (mod 2) fails");
    }
    std::vector<CongruenceClaim> out;
    const bool want_s = !fp.r;
    const bool want_r = !fp.s;
    if (want_s) {
        const auto ss = enumerate(
            fp.s, 1, 8 * pi, [p](std::int64_t s) { return s % 8 == 1 && legendre(s, p) == -1; }, "t4",
            "s == 1 (mod 8) and (s/p) = -1");
        for (const auto s : ss) {
            out.push_back(make_claim("t4/e12.0.1[" + join_params({{"p", pi}, {"s", s}}) + "]", t2_series(), p,
                                     (s - 1) / 8, 2, "t4 (i): 8pn+s is never an odd square"));
            if (k >= 1) {
                out.push_back(make_claim("t4/e12.0.2[" + join_params({{"p", pi}, {"s", s}, {"k", k}}) + "]",
                                         t2_series(), ipow(p, 2 * k + 1), eighth(s * ipow(p, 2 * k), 1), 2,
                                         "t4 (i), lifted by the Hecke relation at p"));
            }
        }
    }
    if (want_r && k >= 1) {
        const auto rs = enumerate(
            fp.r, 1, 8 * pi,
            [pi](std::int64_t r) { return (r * pi) % 8 == 1 && std::gcd(r, pi) == 1; }, "t4",
            "rp == 1 (mod 8) and gcd(r, p) = 1");
        for (const auto r : rs) {
            out.push_back(make_claim("t4/e12.0.3[" + join_params({{"p", pi}, {"r", r}, {"k", k}}) + "]",
                                     t2_series(), ipow(p, 2 * k + 2), eighth(r * ipow(p, 2 * k + 1), 1), 2,
                                     "t4 (ii): tau(p^{2k+1}) is even"));
        }
    }
    return out;
}

std::vector<CongruenceClaim> family_thm1_00(const FamilyParams& fp)
{
    std::vector<std::uint64_t> primes = fp.primes;
    bool corollary = primes.empty();
    if (corollary) {
        const std::uint64_t p = prime_at_least(fp.p, "thm1.00", 5);
        primes.assign(static_cast<std::size_t>(nonneg(fp.k, "thm1.00", "k")) + 1, p);
    } else if (fp.k && static_cast<std::size_t>(*fp.k) + 1 != primes.size()) {
        side_condition("thm1.00", "k + 1 must equal the number of primes");
    }
    for (const auto p : primes) {
        if (p < 5 || !is_prime(p)) {
            side_condition("thm1.00", "p_i must be a prime >= 5, got " + std::to_string(p));
        }
        if (p % 8 == 1) {
            side_condition("thm1.00", "p_i == 1 (mod 8) at p = " + std::to_string(p));
        }
    }
    corollary = std::all_of(primes.begin(), primes.end(), [&](std::uint64_t p) { return p == primes.front(); });
    const std::uint64_t last = primes.back();
    Integer inner = 1; // p_1 ... p_k
    for (std::size_t i = 0; i + 1 < primes.size(); ++i) {
        inner *= primes[i];
    }
    const Integer all = inner * last;
    const auto li = static_cast<std::int64_t>(last);
    const auto js = enumerate(fp.j, 1, li - 1, [li](std::int64_t j) { return j % li != 0; }, "thm1.00",
                              "j != 0 (mod p_{k+1})");
    std::string plist;
    for (const auto p : primes) {
        plist += (plist.empty() ? "" : "*") + std::to_string(p);
    }
    std::vector<CongruenceClaim> out;
    for (const auto j : js) {
        const std::string id = corollary ? "thm1.00/corollary[" +
                                               join_params({{"p", li}, {"k", static_cast<std::int64_t>(primes.size()) - 1},
                                                            {"j", j}}) +
                                               "]"
                                         : "thm1.00[primes=" + plist + ",j=" + std::to_string(j) + "]";
        out.push_back(make_claim(id, t2_series(), 9 * all * all,
                                 eighth(9 * inner * inner * last * (8 * j + li), 1), 6,
                                 "thm1.00: primes not 1 mod 8, j not divisible by p_{k+1}"));
    }
    return out;
}

std::vector<CongruenceClaim> family_conjp(const FamilyParams& fp)
{
    const std::uint64_t p = prime_at_least(fp.p, "conjp", 5);
    if (legendre(-2, p) != -1) {
        side_condition("conjp", "(-2/p) = -1 fails at p = " + std::to_string(p));
    }
    const std::int64_t t = need(fp.t, "conjp", "t");
    const auto pi = static_cast<std::int64_t>(p);
    if (t < 1 || std::gcd(t, std::int64_t{6}) != 1 || t % pi != 0) {
        side_condition("conjp", "t >= 1 with gcd(t, 6) = 1 and p | t fails at t = " + std::to_string(t));
    }
    const auto js = enumerate(fp.j, 1, pi - 1, [](std::int64_t) { return true; }, "conjp", "1 <= j <= p-1");
    const Integer t2 = Integer(t) * t;
    std::vector<CongruenceClaim> out;
    for (const auto j : js) {
        out.push_back(make_claim("conjp[" + join_params({{"p", pi}, {"t", t}, {"j", j}}) + "]", t2_series(),
                                 9 * t2, 9 * t2 * j / pi + eighth(57 * t2, 1), 6, "conjecture on p-square progressions",
                                 ClaimTag::Conjecture));
    }
    return out;
}

std::vector<CongruenceClaim> family_cong_p(const FamilyParams& fp)
{
    const std::uint64_t p = prime_at_least(fp.p, "cong-p", 2);
    const std::int64_t ell = need(fp.ell, "cong-p", "ell");
    if (ell < 2) {
        side_condition("cong-p", "ell >= 2 required");
    }
    const auto pi = static_cast<std::int64_t>(p);
    const auto rs = enumerate(fp.r, 1, pi - 1, [](std::int64_t) { return true; }, "cong-p", "1 <= r <= p-1");
    std::vector<CongruenceClaim> out;
    for (const auto r : rs) {
        out.push_back(make_claim("cong-p[" + join_params({{"ell", ell}, {"p", pi}, {"r", r}}) + "]",
                                 FQuotient::tuple_regular(static_cast<int>(ell), static_cast<int>(p)), p, r, p,
                                 "p-tuple ell-regular partitions vanish mod p off multiples of p"));
    }
    return out;
}

// ---------------------------------------------------------------------------

json series_to_json(const FQuotient& fq)
{
    json factors = json::object();
    for (const auto& [d, r] : fq.factors()) {
        factors[std::to_string(d)] = r;
    }
    return {{"scalar", fq.scalar().get_str()}, {"factors", factors}};
}

FQuotient series_from_json(const json& j)
{
    FQuotient fq;
    if (j.contains("scalar")) {
        const auto& s = j.at("scalar");
        fq = FQuotient(s.is_string() ? Integer(s.get<std::string>()) : Integer(s.get<long>()));
    }
    for (const auto& [d, r] : j.at("factors").items()) {
        fq.times(std::stoi(d), r.get<int>());
    }
    return fq;
}

json filter_to_json(const CongruenceClaim& c)
{
    if (!c.filter) {
        return nullptr;
    }
    return {{"kind", "not_divisible"},
            {"p", c.filter->p},
            {"mul", c.filter->mul},
            {"add", c.filter->add},
            {"text", c.filter->to_string()}};
}

ClaimTag tag_from_string(const std::string& s)
{
    for (const auto t : {ClaimTag::Theorem, ClaimTag::Identity, ClaimTag::Conjecture, ClaimTag::Empirical}) {
        if (to_string(t) == s) {
            return t;
        }
    }
    fail(ErrorKind::ParseError, "unknown tag '" + s + "'");
}

CongruenceClaim claim_from(const json& j)
{
    CongruenceClaim c;
    c.id = j.at("claim_id").get<std::string>();
    c.progression.series = series_from_json(j.at("series"));
    c.progression.a = j.at("a").get<std::uint64_t>();
    c.progression.b = j.at("b").get<std::uint64_t>();
    c.modulus = j.at("modulus").get<std::uint64_t>();
    c.expected_residue = j.value("expected_residue", std::uint64_t{0});
    if (j.contains("filter") && !j["filter"].is_null()) {
        const auto& f = j["filter"];
        if (f.value("kind", std::string("not_divisible")) != "not_divisible") {
            fail(ErrorKind::ParseError, "unknown filter kind in claim " + c.id);
        }
        c.filter = IndexFilter{f.at("p").get<std::uint64_t>(), f.value("mul", std::uint64_t{1}),
                               f.value("add", std::uint64_t{0})};
        if (c.filter->p < 2) {
            fail(ErrorKind::DomainError, "filter modulus must be >= 2");
        }
    }
    if (j.contains("residue_rule") && !j["residue_rule"].is_null()) {
        const auto& r = j["residue_rule"];
        c.rule = ResidueRule{r.at("triangular").get<std::uint64_t>(), r.at("otherwise").get<std::uint64_t>()};
    }
    c.provenance = j.value("provenance", std::string());
    c.tag = tag_from_string(j.value("tag", std::string("THEOREM")));
    c.validate();
    return c;
}

void check_index_reach(const Series& s, std::uint64_t index, const std::string& what)
{
    if (index > s.trunc()) {
        fail(ErrorKind::TruncationTooSmall, what + " needs index " + std::to_string(index) + " but the series stops at " +
                                                std::to_string(s.trunc()));
    }
}

/// The series reduced mod m, reusing the input when it already is.
Series in_ring(const Series& s, std::uint64_t m)
{
    if (!s.ring().is_exact() && s.ring().modulus() == m) {
        return s;
    }
    if (!s.ring().is_exact() && s.ring().modulus() % m != 0) {
        fail(ErrorKind::IncompatibleModulus,
             "series over " + s.ring().to_string() + " cannot be read mod " + std::to_string(m));
    }
    return reduce_mod(s, m);
}

std::uint64_t mulmod_small(const Integer& c, std::uint64_t v, std::uint64_t m)
{
    Integer x = c * v;
    return reduce_integer(x, m);
}

} // namespace

// ---------------------------------------------------------------------------

std::string Progression::to_string() const
{
    std::string s;
    if (multiplier != 1) {
        s = multiplier.get_str() + "*";
    }
    s += "[" + series.to_string() + "](";
    s += (a == 1 ? "" : std::to_string(a)) + "n";
    if (b != 0) {
        s += "+" + std::to_string(b);
    }
    return s + ")";
}

std::string IndexFilter::to_string() const
{
    std::string inner = (mul == 1 ? "" : std::to_string(mul)) + "n";
    if (add != 0) {
        inner = "(" + inner + "+" + std::to_string(add) + ")";
    }
    return std::to_string(p) + " does not divide " + inner;
}

std::uint64_t ResidueRule::at(std::uint64_t n) const { return is_triangular(n) ? hit : miss; }

std::string ResidueRule::to_string() const
{
    return "residue " + std::to_string(hit) + " at triangular n, else " + std::to_string(miss);
}

void CongruenceClaim::validate() const
{
    if (progression.a < 1) {
        fail(ErrorKind::DomainError, id + ": progression step a must be >= 1");
    }
    if (modulus < 2) {
        fail(ErrorKind::DomainError, id + ": modulus must be >= 2");
    }
    if (expected_residue >= modulus || (rule && (rule->hit >= modulus || rule->miss >= modulus))) {
        fail(ErrorKind::DomainError, id + ": expected residues must lie in [0, M)");
    }
}

std::optional<std::uint64_t> CongruenceClaim::nmax_within(std::size_t trunc) const
{
    if (progression.b > trunc) {
        return std::nullopt;
    }
    return (trunc - progression.b) / progression.a;
}

std::optional<std::uint64_t> RelationClaim::nmax_within(std::size_t trunc) const
{
    if (lhs.b > trunc || rhs.b > trunc) {
        return std::nullopt;
    }
    return std::min((trunc - lhs.b) / lhs.a, (trunc - rhs.b) / rhs.a);
}

// ---------------------------------------------------------------------------

std::string claim_to_json(const CongruenceClaim& c)
{
    json j;
    j["claim_id"] = c.id;
    j["series"] = series_to_json(c.progression.series);
    j["a"] = c.progression.a;
    j["b"] = c.progression.b;
    j["modulus"] = c.modulus;
    j["expected_residue"] = c.expected_residue;
    j["filter"] = filter_to_json(c);
    j["residue_rule"] =
        c.rule ? json{{"triangular", c.rule->hit}, {"otherwise", c.rule->miss}} : json(nullptr);
    j["provenance"] = c.provenance;
    j["tag"] = to_string(c.tag);
    return j.dump();
}

CongruenceClaim claim_from_json(std::string_view text)
{
    auto v = claims_from_json(text);
    if (v.size() != 1) {
        fail(ErrorKind::ParseError, "expected exactly one claim, found " + std::to_string(v.size()));
    }
    return std::move(v.front());
}

std::vector<CongruenceClaim> claims_from_json(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::ParseError, std::string("claim file: ") + e.what());
    }
    std::vector<CongruenceClaim> out;
    try {
        if (doc.is_array()) {
            for (const auto& item : doc) {
                out.push_back(claim_from(item));
            }
        } else {
            out.push_back(claim_from(doc));
        }
    } catch (const json::exception& e) {
        fail(ErrorKind::ParseError, std::string("claim file: ") + e.what());
    }
    return out;
}

// ---------------------------------------------------------------------------

struct SeriesCache::Slot {
    FQuotient fq;
    RingSpec ring;
    std::size_t trunc;
    std::shared_future<std::shared_ptr<const Series>> ready;

    bool serves(const FQuotient& q, RingSpec r, std::size_t n) const
    {
        if (fq != q || trunc < n) {
            return false;
        }
        return ring.is_exact() || (!r.is_exact() && ring.modulus() % r.modulus() == 0);
    }
};

std::shared_ptr<const Series> SeriesCache::get(const FQuotient& fq, RingSpec ring, std::size_t trunc)
{
    if (trunc > budget_) {
        fail(ErrorKind::TruncationBudgetExceeded,
             "expansion to " + std::to_string(trunc) + " exceeds the budget of " + std::to_string(budget_));
    }
    std::shared_ptr<Slot> slot;
    std::promise<std::shared_ptr<const Series>> promise;
    bool builder = false;
    {
        std::lock_guard lock(mu_);
        for (const auto& s : slots_) {
            if (s->serves(fq, ring, trunc)) {
                slot = s;
                break;
            }
        }
        if (!slot) {
            slot = std::make_shared<Slot>(Slot{fq, ring, trunc, promise.get_future().share()});
            slots_.push_back(slot);
            ++constructions_;
            builder = true;
        }
    }
    if (builder) {
        try {
            promise.set_value(std::make_shared<const Series>(expand_fquotient(fq, trunc, ring)));
        } catch (...) {
            {
                std::lock_guard lock(mu_);
                std::erase(slots_, slot);
            }
            promise.set_exception(std::current_exception());
        }
    }
    auto series = slot->ready.get();
    if (slot->ring == ring) {
        return series;
    }
    return std::make_shared<const Series>(ring.is_exact() ? *series : reduce_mod(*series, ring.modulus()));
}

std::size_t SeriesCache::constructions() const
{
    std::lock_guard lock(mu_);
    return constructions_;
}

// ---------------------------------------------------------------------------

VerificationReport verify_instance(const CongruenceClaim& claim, const Series& series, std::uint64_t nmax)
{
    claim.validate();
    const auto& pr = claim.progression;
    check_index_reach(series, pr.index(nmax), claim.id);
    const Series s = in_ring(series, claim.modulus);

    VerificationReport rep;
    rep.id = claim.id;
    rep.tag = claim.tag;
    rep.trunc = series.trunc();
    rep.checked_upto = static_cast<std::int64_t>(nmax);
    for (std::uint64_t n = 0; n <= nmax; ++n) {
        if (claim.filter && !claim.filter->admits(n)) {
            continue;
        }
        const std::uint64_t idx = pr.index(n);
        const std::uint64_t got = mulmod_small(pr.multiplier, s.residue(static_cast<std::int64_t>(idx)), claim.modulus);
        const std::uint64_t want = claim.expected_at(n);
        ++rep.checked_count;
        if (got != want) {
            rep.status = Status::Fail;
            rep.counterexample = Counterexample{static_cast<std::int64_t>(n), static_cast<std::int64_t>(idx),
                                                Integer(static_cast<unsigned long>(got)),
                                                Integer(static_cast<unsigned long>(want))};
            break;
        }
    }
    rep.notes.push_back(pr.to_string() + " mod " + std::to_string(claim.modulus));
    if (claim.rule) {
        rep.notes.push_back(claim.rule->to_string());
    }
    if (claim.filter) {
        rep.notes.push_back("filter: " + claim.filter->to_string());
    }
    if (!claim.provenance.empty()) {
        rep.notes.push_back(claim.provenance);
    }
    return rep;
}

VerificationReport verify_instance(const CongruenceClaim& claim, std::uint64_t nmax, SeriesCache& cache)
{
    claim.validate();
    const auto s = cache.get(claim.progression.series, RingSpec::modulo(claim.modulus), claim.progression.index(nmax));
    return verify_instance(claim, *s, nmax);
}

VerificationReport verify_conditional(const CongruenceClaim& claim, std::uint64_t nmax, SeriesCache& cache)
{
    if (!claim.rule) {
        fail(ErrorKind::DomainError, claim.id + " has no residue rule");
    }
    return verify_instance(claim, nmax, cache);
}

VerificationReport verify_relation(const RelationClaim& rel, std::uint64_t nmax, SeriesCache& cache)
{
    if (rel.modulus < 2) {
        fail(ErrorKind::DomainError, rel.id + ": modulus must be >= 2");
    }
    const RingSpec ring = RingSpec::modulo(rel.modulus);
    const auto ls = cache.get(rel.lhs.series, ring, rel.lhs.index(nmax));
    const auto rs = cache.get(rel.rhs.series, ring, rel.rhs.index(nmax));

    VerificationReport rep;
    rep.id = rel.id;
    rep.tag = rel.tag;
    rep.trunc = std::max(ls->trunc(), rs->trunc());
    rep.checked_upto = static_cast<std::int64_t>(nmax);
    for (std::uint64_t n = 0; n <= nmax; ++n) {
        if (rel.filter && !rel.filter->admits(n)) {
            continue;
        }
        const auto li = rel.lhs.index(n);
        const auto ri = rel.rhs.index(n);
        const auto lv = mulmod_small(rel.lhs.multiplier, ls->residue(static_cast<std::int64_t>(li)), rel.modulus);
        const auto rv = mulmod_small(rel.rhs.multiplier, rs->residue(static_cast<std::int64_t>(ri)), rel.modulus);
        ++rep.checked_count;
        if (lv != rv) {
            rep.status = Status::Fail;
            rep.counterexample = Counterexample{static_cast<std::int64_t>(n), static_cast<std::int64_t>(ri),
                                                Integer(static_cast<unsigned long>(rv)),
                                                Integer(static_cast<unsigned long>(lv))};
            break;
        }
    }
    rep.notes.push_back(rel.lhs.to_string() + " == " + rel.rhs.to_string() + " mod " + std::to_string(rel.modulus));
    if (rel.filter) {
        rep.notes.push_back("filter: " + rel.filter->to_string());
    }
    if (!rel.provenance.empty()) {
        rep.notes.push_back(rel.provenance);
    }
    return rep;
}

std::vector<VerificationReport> verify_batch(std::span<const CongruenceClaim> claims, std::size_t trunc,
                                             SeriesCache& cache, unsigned jobs)
{
    for (const auto& c : claims) {
        if (!c.nmax_within(trunc)) {
            fail(ErrorKind::TruncationBudgetExceeded,
                 c.id + " starts at index " + std::to_string(c.progression.b) + ", beyond trunc " + std::to_string(trunc));
        }
    }
    // Build each quotient once, modulo the lcm of every modulus it is read at.
    std::vector<std::pair<FQuotient, std::uint64_t>> needs;
    for (const auto& c : claims) {
        auto it = std::find_if(needs.begin(), needs.end(),
                               [&](const auto& e) { return e.first == c.progression.series; });
        if (it == needs.end()) {
            needs.emplace_back(c.progression.series, c.modulus);
        } else {
            it->second = std::lcm(it->second, c.modulus);
        }
    }
    auto run = [&](std::size_t count, const std::function<void(std::size_t)>& body) {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(count);
        auto worker = [&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
        for (unsigned t = 1; t < n; ++t) {
            pool.emplace_back(worker);
        }
        worker();
        for (auto& t : pool) {
            t.join();
        }
        for (const auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    };
    run(needs.size(), [&](std::size_t i) { cache.get(needs[i].first, RingSpec::modulo(needs[i].second), trunc); });

    std::vector<VerificationReport> out(claims.size());
    run(claims.size(), [&](std::size_t i) {
        const auto& c = claims[i];
        const auto it = std::find_if(needs.begin(), needs.end(),
                                     [&](const auto& e) { return e.first == c.progression.series; });
        const auto s = cache.get(c.progression.series, RingSpec::modulo(it->second), trunc);
        out[i] = verify_instance(c, *s, *c.nmax_within(trunc));
    });
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
    return out;
}

// ---------------------------------------------------------------------------

std::string DensityReport::to_csv() const
{
    std::ostringstream os;
    os << "X,count,proportion\n";
    os.precision(10);
    for (const auto& p : points) {
        os << p.x << ',' << p.count << ',' << p.proportion << '\n';
    }
    return os.str();
}

DensityReport density_scan(const Progression& prog, std::uint64_t modulus, std::uint64_t residue,
                           std::vector<std::uint64_t> checkpoints, SeriesCache& cache)
{
    if (modulus < 2) {
        fail(ErrorKind::DomainError, "density modulus must be >= 2");
    }
    if (residue >= modulus) {
        fail(ErrorKind::DomainError, "residue must lie in [0, M)");
    }
    if (checkpoints.empty()) {
        fail(ErrorKind::DomainError, "density scan needs at least one checkpoint");
    }
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
    if (checkpoints.front() == 0) {
        fail(ErrorKind::DomainError, "density checkpoints need X >= 1");
    }
    const std::uint64_t top = checkpoints.back();
    const auto s = cache.get(prog.series, RingSpec::modulo(modulus), prog.index(top - 1));

    DensityReport rep{prog, modulus, residue, {}};
    std::uint64_t count = 0;
    std::size_t next = 0;
    for (std::uint64_t n = 0; n < top; ++n) {
        const auto v = mulmod_small(prog.multiplier, s->residue(static_cast<std::int64_t>(prog.index(n))), modulus);
        count += (v == residue);
        if (n + 1 == checkpoints[next]) {
            rep.points.push_back({n + 1, count, static_cast<double>(count) / static_cast<double>(n + 1)});
            ++next;
        }
    }
    return rep;
}

std::vector<DiscoveryCandidate> discover(const FQuotient& fq, std::uint64_t modulus, std::uint64_t a_max,
                                         std::uint64_t nmax, std::uint64_t min_support, SeriesCache& cache)
{
    if (modulus < 2) {
        fail(ErrorKind::DomainError, "discovery needs M >= 2 (every progression vanishes mod 1)");
    }
    if (a_max == 0) {
        fail(ErrorKind::DomainError, "discovery needs a_max >= 1");
    }
    const std::uint64_t reach = a_max * nmax;
    const auto s = cache.get(fq, RingSpec::modulo(modulus), 2 * reach + a_max);
    const auto vanishes = [&](std::uint64_t a, std::uint64_t b, std::uint64_t limit, std::uint64_t& checked) {
        checked = 0;
        for (std::uint64_t i = b; i <= limit; i += a) {
            if (s->residue(static_cast<std::int64_t>(i)) != 0) {
                return false;
            }
            ++checked;
        }
        return true;
    };
    std::vector<DiscoveryCandidate> out;
    for (std::uint64_t a = 1; a <= a_max; ++a) {
        for (std::uint64_t b = 0; b < a; ++b) {
            std::uint64_t checked = 0;
            std::uint64_t again = 0;
            if (!vanishes(a, b, std::max(reach, b), checked) || checked < std::max<std::uint64_t>(min_support, 1)) {
                continue;
            }
            if (!vanishes(a, b, 2 * reach + (a_max - 1), again)) {
                continue;
            }
            out.push_back({a, b, checked, true});
        }
    }
    for (auto& c : out) {
        c.primitive = std::none_of(out.begin(), out.end(), [&](const DiscoveryCandidate& d) {
            return d.a < c.a && c.a % d.a == 0 && c.b % d.a == d.b;
        });
    }
    return out;
}

// ---------------------------------------------------------------------------

Integer t2_omega(std::uint64_t p)
{
    const auto params = NewmanParams::f3_6_over_f1(p);
    const auto a = newman_product(params, static_cast<std::size_t>(params.delta()));
    return omega(params, a);
}

std::vector<std::string> family_ids()
{
    return {"c1.4", "c1.4.1", "cong-p", "conjp", "t0.0.1", "t0.1.0.0", "t2", "t2-remark", "t4", "thm1.00"};
}

std::vector<CongruenceClaim> generate_family(std::string_view id, const FamilyParams& params)
{
    if (id == "c1.4") {
        return family_c1_4(params);
    }
    if (id == "c1.4.1") {
        return family_c1_4_1(params);
    }
    if (id == "t0.1.0.0") {
        return family_t0_1_0_0(params);
    }
    if (id == "t0.0.1") {
        return family_t0_0_1(params);
    }
    if (id == "t2" || id == "t2-remark") {
        return family_t2(params, id == "t2-remark");
    }
    if (id == "t4") {
        return family_t4(params);
    }
    if (id == "thm1.00") {
        return family_thm1_00(params);
    }
    if (id == "conjp") {
        return family_conjp(params);
    }
    if (id == "cong-p") {
        return family_cong_p(params);
    }
    fail(ErrorKind::UnknownSelection, "no theorem family '" + std::string(id) + "'");
}

std::vector<CongruenceClaim> default_family_instances(std::string_view id)
{
    std::vector<CongruenceClaim> out;
    auto add = [&](const FamilyParams& fp) {
        auto v = generate_family(id, fp);
        out.insert(out.end(), v.begin(), v.end());
    };
    if (id == "c1.4") {
        for (std::int64_t al : {0, 1}) {
            add({.alpha = al});
        }
    } else if (id == "c1.4.1") {
        for (std::int64_t al : {0, 1, 2}) {
            add({.alpha = al});
        }
    } else if (id == "t0.1.0.0") {
        for (std::int64_t p : {3, 5, 7, 11, 13, 17}) {
            add({.p = p});
        }
    } else if (id == "t0.0.1") {
        for (std::int64_t p : {5, 7, 13}) {
            for (std::int64_t al : {0, 1}) {
                add({.alpha = al, .p = p});
            }
        }
    } else if (id == "t2") {
        // Case (ii) needs an odd omega(p); none occurs for p < 100, so only (i) has defaults.
        for (std::int64_t p : {5, 7, 11, 13}) {
            add({.k = 0, .p = p});
        }
    } else if (id == "t2-remark") {
        add({.k = 0});
    } else if (id == "t4") {
        for (std::int64_t p : {3, 5, 7, 11, 13}) {
            add({.k = 1, .p = p});
        }
    } else if (id == "thm1.00") {
        for (std::int64_t p : {5, 7, 11, 13}) {
            add({.k = 0, .p = p});
        }
        for (std::int64_t p : {5, 7}) {
            add({.k = 1, .p = p});
        }
    } else if (id == "conjp") {
        for (const auto& [p, t] : std::initializer_list<std::pair<std::int64_t, std::int64_t>>{
                 {5, 5}, {5, 25}, {5, 35}, {7, 7}, {7, 35}, {13, 13}}) {
            add({.p = p, .t = t});
        }
    } else if (id == "cong-p") {
        for (std::int64_t p : {2, 3, 5, 7}) {
            for (std::int64_t ell : {2, 3, 4}) {
                add({.p = p, .ell = ell});
            }
        }
    } else {
        fail(ErrorKind::UnknownSelection, "no theorem family '" + std::string(id) + "'");
    }
    return out;
}

std::span<const CongruenceClaim> named_claims()
{
    static const std::vector<CongruenceClaim> claims = [] {
        const FQuotient partitions = FQuotient::f(1, -1);
        const FQuotient ped{1, {{4, 1}, {1, -1}}};
        std::vector<CongruenceClaim> v{
            make_claim("e0.5", t2_series(), 9, 4, 24, "T2(9n+4) == 0 mod 24"),
            make_claim("e0.6", t2_series(), 9, 7, 24, "T2(9n+7) == 0 mod 24"),
            make_claim("e1.2", t2_series(), 81, 37, 24, "T2(81n+37) == 0 mod 24"),
            make_claim("e1.3", t2_series(), 81, 64, 24, "T2(81n+64) == 0 mod 24"),
            // The cited ped lemma at alpha = 0 and 1; alpha = 0 of e2.7 is false (ped(2) = 2).
            make_claim("e2.7[alpha=0]", ped, 3, 2, 6, "ped(3n+2) == 0 mod 6 (cited lemma)"),
            make_claim("e2.7[alpha=1]", ped, 27, 19, 6, "ped(27n+19) == 0 mod 6 (cited lemma)"),
            make_claim("e2.8[alpha=0]", ped, 9, 7, 6, "ped(9n+7) == 0 mod 6 (cited lemma)"),
            make_claim("e2.8[alpha=1]", ped, 81, 64, 6, "ped(81n+64) == 0 mod 6 (cited lemma)"),
            make_claim("ramanujan-11", partitions, 11, 6, 11, "p(11n+6) == 0 mod 11"),
            make_claim("ramanujan-5", partitions, 5, 4, 5, "p(5n+4) == 0 mod 5"),
            make_claim("ramanujan-7", partitions, 7, 5, 7, "p(7n+5) == 0 mod 7"),
            make_claim("remark-t4-81n+57", t4_series(), 81, 57, 12, "T4(81n+57) == 0 mod 12 (concluding remark)"),
        };
        auto t01 = make_claim("t0.1", t2_series(), 9, 1, 6, "T2(9n+1) mod 6: 3 at triangular n, 0 elsewhere");
        t01.rule = ResidueRule{3, 0};
        v.push_back(t01);
        std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
        return v;
    }();
    return claims;
}

RelationClaim t3_3_1_relation(std::int64_t k)
{
    if (k < 0) {
        side_condition("t3.3.1", "k >= 0 required");
    }
    if (mpz_even_p(t2_omega(17).get_mpz_t()) == 0) {
        side_condition("t3.3.1", "omega(17) must be even");
    }
    RelationClaim r;
    r.id = "t2/t3.3.1[k=" + std::to_string(k) + "]";
    r.lhs = Progression{t2_series(), 3, 2, 1};
    r.rhs = Progression{t2_series(), to_u64(3 * ipow(17, 4 * k + 2), "a"), to_u64(eighth(ipow(17, 4 * k + 3), 1), "b"), 1};
    r.modulus = 12;
    // 17 | (24n + 17) iff 17 | n, so the two stated hypotheses are one filter.
    r.filter = IndexFilter{17, 1, 0};
    r.provenance = "t2 (i) at p = 17; the conditions 17 !| (24n+17) and n !== 0 (mod 17) coincide";
    return r;
}

std::span<const RelationClaim> named_relations()
{
    static const std::vector<RelationClaim> rels = [] {
        std::vector<RelationClaim> v;
        v.push_back({"e1.5", Progression{t2_series(), 3, 1, 3}, Progression{t2_series(), 27, 10, 1}, 24, std::nullopt,
                     "3 T2(3n+1) == T2(27n+10) mod 24"});
        v.push_back({"e1.6", Progression{t2_series(), 3, 1, 1}, Progression{t2_series(), 243, 91, 1}, 24, std::nullopt,
                     "T2(3n+1) == T2(243n+91) mod 24"});
        v.push_back(t3_3_1_relation(0));
        return v;
    }();
    return rels;
}

const CongruenceClaim& find_claim(std::string_view id)
{
    for (const auto& c : named_claims()) {
        if (c.id == id) {
            return c;
        }
    }
    fail(ErrorKind::UnknownSelection, "no claim '" + std::string(id) + "'");
}

const RelationClaim& find_relation(std::string_view id)
{
    for (const auto& r : named_relations()) {
        if (r.id == id) {
            return r;
        }
    }
    fail(ErrorKind::UnknownSelection, "no relation '" + std::string(id) + "'");
}

} // namespace regulus

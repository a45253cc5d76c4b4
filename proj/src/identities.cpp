#include "regulus/identities.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"
#include "regulus/error.hpp"

namespace regulus {

namespace {

Series expand_direct(const FQuotient& fq, std::size_t trunc, RingSpec ring)
{
    Series out = make_constant(ring, fq.scalar(), trunc);
    for (const auto& [delta, r] : fq.factors()) {
        out = mul(out, pow(expand_f_product(delta, trunc, ring), r));
    }
    return out;
}

Series expand_theta(const ThetaFactor& t, std::size_t trunc, RingSpec ring)
{
    Series base;
    switch (t.kind) {
    case ThetaKind::BorweinA:
        base = borwein_a_series(t.scale, trunc, ring);
        break;
    case ThetaKind::JacobiCube:
        base = jacobi_cube_series(trunc, ring, t.scale);
        break;
    case ThetaKind::Pentagonal:
        base = expand_f(t.scale, trunc, ring);
        break;
    }
    return pow(base, t.power);
}

Series evaluate_term(const Term& t, std::size_t trunc, RingSpec ring, Expansion how)
{
    if (t.qpower > trunc) {
        return Series::zero(ring, trunc);
    }
    const std::size_t body = trunc - t.qpower;
    FQuotient fq = t.quotient;
    Series s = how == Expansion::Pentagonal ? expand_fquotient(fq, body, ring) : expand_direct(fq, body, ring);
    s = scale(s, t.scalar);
    for (const auto& theta : t.thetas) {
        s = mul(s, expand_theta(theta, body, ring));
    }
    return shift(s, t.qpower);
}

std::string theta_string(const ThetaFactor& t)
{
    std::string name;
    switch (t.kind) {
    case ThetaKind::BorweinA:
        name = "a(q^" + std::to_string(t.scale) + ")";
        break;
    case ThetaKind::JacobiCube:
        name = "jacobi3(q^" + std::to_string(t.scale) + ")";
        break;
    case ThetaKind::Pentagonal:
        name = "pentagonal(q^" + std::to_string(t.scale) + ")";
        break;
    }
    return t.power == 1 ? name : name + "^" + std::to_string(t.power);
}

FQuotient factors_only(const FQuotient& fq)
{
    FQuotient out;
    for (const auto& [delta, r] : fq.factors()) {
        out.times(delta, r);
    }
    return out;
}

std::string term_string(const Term& t)
{
    std::string s;
    const bool bare_quotient = t.quotient.factors().empty();
    Integer scalar = t.scalar * t.quotient.scalar();
    if (scalar != 1 || (bare_quotient && t.thetas.empty() && t.qpower == 0)) {
        s += scalar.get_str();
    }
    if (t.qpower > 0) {
        s += (s.empty() ? "" : " * ") + std::string("q^") + std::to_string(t.qpower);
    }
    for (const auto& th : t.thetas) {
        s += (s.empty() ? "" : " * ") + theta_string(th);
    }
    if (!bare_quotient) {
        s += (s.empty() ? "" : " * ") + factors_only(t.quotient).to_string();
    }
    return s;
}

Term term(long scalar, std::size_t qpower, FQuotient fq, std::vector<ThetaFactor> thetas = {})
{
    return Term{Integer(scalar), qpower, std::move(fq), std::move(thetas)};
}

FQuotient fq(std::initializer_list<std::pair<const int, int>> factors) { return FQuotient(1, factors); }

const FQuotient kT2 = FQuotient::tuple_regular(2, 3);
const FQuotient kT4 = FQuotient::tuple_regular(4, 3);

std::vector<IdentityEntry> build_catalog()
{
    std::vector<IdentityEntry> c;
    auto add = [&](std::string id, Expression lhs, Expression rhs, std::optional<std::uint64_t> mod,
                   std::string anchor, std::string notes = {}, std::size_t dissection = 0) {
        c.push_back(IdentityEntry{std::move(id), std::move(lhs), std::move(rhs), mod, std::move(anchor),
                                  std::move(notes), dissection});
    };

    {
        Expression lhs = Expression::of(FQuotient::f(1));
        lhs.expansion = Expansion::DirectProduct;
        Expression rhs;
        rhs.plus(term(1, 0, {}, {{ThetaKind::Pentagonal, 1, 1}}));
        add("e2.0.3.4", lhs, rhs, std::nullopt, "pentagonal number theorem for f1");
    }
    {
        Expression lhs = Expression::of(FQuotient::f(1, 3));
        lhs.expansion = Expansion::DirectProduct;
        Expression rhs;
        rhs.plus(term(1, 0, {}, {{ThetaKind::JacobiCube, 1, 1}}));
        add("e2.0.3.3", lhs, rhs, std::nullopt, "Jacobi triple product for f1^3");
    }
    {
        Expression rhs;
        rhs.plus(term(1, 0, fq({{9, 2}, {18, -1}}))).plus(term(-2, 1, fq({{3, 1}, {18, 2}, {6, -1}, {9, -1}})));
        add("e0.7", Expression::of(fq({{1, 2}, {2, -1}})), rhs, std::nullopt, "3-dissection of f1^2/f2", {}, 3);
    }
    {
        Expression rhs;
        rhs.plus(term(1, 0, fq({{6, 1}, {9, 6}, {3, -1}, {18, -3}})))
            .plus(term(-3, 1, fq({{9, 3}})))
            .plus(term(4, 3, fq({{3, 2}, {18, 6}, {6, -2}, {9, -3}})));
        add("e0.8", Expression::of(FQuotient::f(1, 3)), rhs, std::nullopt, "3-dissection of f1^3",
            "printed denominator f_{18^3} is read as f18^3", 3);
    }
    {
        Expression rhs;
        rhs.plus(term(1, 0, fq({{9, 3}, {3, -10}}), {{ThetaKind::BorweinA, 3, 2}}))
            .plus(term(3, 1, fq({{9, 6}, {3, -11}}), {{ThetaKind::BorweinA, 3, 1}}))
            .plus(term(9, 2, fq({{9, 9}, {3, -12}})));
        add("e0.8.0", Expression::of(FQuotient::f(1, -3)), rhs, std::nullopt, "3-dissection of 1/f1^3", {}, 3);
    }
    {
        Expression lhs;
        lhs.plus(term(1, 0, {}, {{ThetaKind::BorweinA, 1, 1}}));
        Expression rhs;
        rhs.plus(term(1, 0, {}, {{ThetaKind::BorweinA, 3, 1}})).plus(term(6, 1, fq({{9, 3}, {3, -1}})));
        add("e0.7.0", lhs, rhs, std::nullopt, "3-dissection of the cubic theta a(q)", {}, 3);
    }
    add("e0.2", Expression::of(kT2).extract(3, 1), Expression::of(FQuotient(3, {{2, 4}, {3, 5}, {1, -8}, {6, -1}})),
        std::nullopt, "generating function of T2(3n+1)");
    add("e0.2.1", Expression::of(kT2).extract(3, 2), Expression::of(FQuotient(6, {{2, 3}, {3, 2}, {6, 2}, {1, -7}})),
        std::nullopt, "generating function of T2(3n+2)");
    add("e0.3", Expression::of(kT2).extract(3, 1), Expression::of(FQuotient(3, {{3, 5}, {6, -1}})), 24,
        "T2(3n+1) mod 24");
    add("e0.4", Expression::of(kT2).extract(9, 1), Expression::of(FQuotient(3, {{1, 5}, {2, -1}})), 24,
        "T2(9n+1) mod 24");
    add("e1.0", Expression::of(kT2).extract(27, 10), Expression::of(FQuotient(9, {{3, 5}, {6, -1}})), 24,
        "T2(27n+10) mod 24");
    add("e1.1", Expression::of(kT2).extract(81, 10), Expression::of(FQuotient(9, {{1, 5}, {2, -1}})), 24,
        "T2(81n+10) mod 24");
    add("e1.4", Expression::of(kT2).extract(243, 91), Expression::of(FQuotient(3, {{3, 5}, {6, -1}})), 24,
        "T2(243n+91) mod 24");
    add("e50.1", Expression::of(kT2).extract(9, 1), Expression::of(FQuotient(3, {{1, 1}, {2, 1}})), 6,
        "T2(9n+1) mod 6");
    add("e10", Expression::of(kT2).extract(3, 2), Expression::of(FQuotient(6, {{3, 6}, {1, -1}})), 12,
        "T2(3n+2) mod 12 through f3^6/f1");
    add("e2.0", Expression::of(kT4), Expression::of(fq({{12, 1}, {3, -1}})), 3, "T4 mod 3");
    add("e2.5", Expression::of(kT4).extract(3, 0), Expression::of(fq({{4, 1}, {1, -1}})), 3,
        "T4(3n) mod 3 through the ped generating function");
    add("e4", Expression::of(kT2).magnified(8).shifted(1), Expression::of(FQuotient::f(1, 24), 1), 2,
        "T2 magnified by 8 and shifted by q is the discriminant mod 2");

    // Supporting identities used by the congruence proofs.
    add("e4.eta", Expression::of(kT2).magnified(8).shifted(1), Expression::of(fq({{16, 3}, {8, -3}}), 1),
        std::nullopt, "T2 magnified by 8 and shifted by q as the eta quotient q f16^3/f8^3");
    {
        Expression rhs;
        rhs.plus(term(1, 1, {}, {{ThetaKind::JacobiCube, 8, 1}}));
        add("e5", Expression::of(kT2).magnified(8).shifted(1), rhs, 2,
            "T2 magnified by 8 and shifted by q is supported on odd squares mod 2");
    }
    {
        Expression rhs = Expression::of(FQuotient(3, {{4, 6}}), 1);
        rhs.extract(8, 1);
        add("1_1", Expression::of(kT2).extract(9, 1), rhs, 6, "T2(9n+1) against eta(4z)^6 coefficients a(8n+1)");
    }
    add("e0.1/p2k1l3", Expression::of(FQuotient::f(1, 8)), Expression::of(FQuotient::f(2, 4)), 8,
        "f1^8 against f2^4 mod 8");
    add("e0.1/p3k1l2", Expression::of(FQuotient::f(1, 9)), Expression::of(FQuotient::f(3, 3)), 9,
        "f1^9 against f3^3 mod 9");
    add("e0.1/p5k2l1", Expression::of(FQuotient::f(2, 5)), Expression::of(FQuotient::f(10, 1)), 5,
        "f2^5 against f10 mod 5");
    return c;
}

// Exponent of the undissected lhs series that index i of the wrapped series reads.
std::int64_t underlying_index(const Dissection& d, std::int64_t i)
{
    if (d.magnify != 1 || d.shift != 0) {
        return i;
    }
    return static_cast<std::int64_t>(d.modulus) * i + static_cast<std::int64_t>(d.residue);
}

} // namespace

// ---------------------------------------------------------------------------

Expression Expression::of(FQuotient fq, std::size_t qpower)
{
    Expression e;
    Term t;
    t.scalar = fq.scalar();
    t.qpower = qpower;
    t.quotient = factors_only(fq);
    e.terms.push_back(std::move(t));
    return e;
}

Expression& Expression::extract(std::size_t m, std::size_t r)
{
    dissection.modulus = m;
    dissection.residue = r;
    return *this;
}

Expression& Expression::magnified(std::size_t t)
{
    dissection.magnify = t;
    return *this;
}

Expression& Expression::shifted(std::size_t d)
{
    dissection.shift = d;
    return *this;
}

Expression& Expression::plus(Term t)
{
    terms.push_back(std::move(t));
    return *this;
}

std::string Expression::to_string() const
{
    std::string body;
    for (const auto& t : terms) {
        std::string ts = term_string(t);
        if (body.empty()) {
            body = ts;
        } else if (!ts.empty() && ts[0] == '-') {
            body += " - " + ts.substr(1);
        } else {
            body += " + " + ts;
        }
    }
    if (body.empty()) {
        body = "0";
    }
    if (expansion == Expansion::DirectProduct) {
        body = "product(" + body + ")";
    }
    if (dissection.modulus != 1) {
        body = "extract_ap(" + body + ", " + std::to_string(dissection.modulus) + ", " +
               std::to_string(dissection.residue) + ")";
    }
    if (dissection.magnify != 1) {
        body = "magnify(" + body + ", " + std::to_string(dissection.magnify) + ")";
    }
    if (dissection.shift != 0) {
        body = "shift(" + body + ", " + std::to_string(dissection.shift) + ")";
    }
    return body;
}

Series evaluate(const Expression& e, std::size_t trunc, RingSpec ring)
{
    const auto& d = e.dissection;
    if (d.modulus == 0 || d.residue >= d.modulus || d.magnify == 0) {
        fail(ErrorKind::DomainError, "malformed dissection wrapper");
    }
    const std::size_t after_shift = trunc >= d.shift ? trunc - d.shift : 0;
    const std::size_t extracted = (after_shift + d.magnify - 1) / d.magnify;
    const std::size_t inner = d.modulus * extracted + d.residue;

    Series sum = Series::zero(ring, inner);
    for (const auto& t : e.terms) {
        sum = add(sum, evaluate_term(t, inner, ring, e.expansion));
    }
    Series out = shift(magnify(extract_ap(sum, d.modulus, d.residue), d.magnify), d.shift);
    if (out.trunc() < trunc) {
        // Only possible when the shift exceeds the requested truncation.
        return Series::zero(ring, trunc);
    }
    return truncate(out, trunc);
}

std::span<const IdentityEntry> identity_catalog()
{
    static const std::vector<IdentityEntry> catalog = build_catalog();
    return catalog;
}

const IdentityEntry& find_identity(std::string_view id)
{
    for (const auto& e : identity_catalog()) {
        if (e.id == id) {
            return e;
        }
    }
    fail(ErrorKind::UnknownIdentity, "no identity with id '" + std::string(id) + "'");
}

VerificationReport verify_identity(const IdentityEntry& entry, std::size_t trunc)
{
    if (trunc < 16) {
        fail(ErrorKind::DomainError, "identity checks need trunc >= 16");
    }
    const RingSpec ring = entry.modulus ? RingSpec::modulo(*entry.modulus) : RingSpec::exact();
    const Series lhs = evaluate(entry.lhs, trunc, ring);
    const Series rhs = evaluate(entry.rhs, trunc, ring);

    VerificationReport r;
    r.id = entry.id;
    r.tag = ClaimTag::Identity;
    r.checked_upto = static_cast<std::int64_t>(trunc);
    r.checked_count = trunc + 1;
    r.trunc = trunc;
    r.notes.push_back(entry.modulus ? "mod " + std::to_string(*entry.modulus) : "exact");
    if (!entry.notes.empty()) {
        r.notes.push_back(entry.notes);
    }
    if (auto diff = first_difference(lhs, rhs)) {
        const auto i = static_cast<std::int64_t>(*diff);
        r.status = Status::Fail;
        r.counterexample = Counterexample{i, underlying_index(entry.lhs.dissection, i), lhs.coeff(i), rhs.coeff(i)};
    }
    return r;
}

VerificationReport verify_identity(std::string_view id, std::size_t trunc)
{
    return verify_identity(find_identity(id), trunc);
}

VerificationReport verify_dissection_components(const IdentityEntry& entry, std::size_t trunc)
{
    const std::size_t m = entry.dissection_modulus;
    if (m < 2) {
        fail(ErrorKind::DomainError, "identity '" + entry.id + "' is not a dissection");
    }
    const RingSpec ring = entry.modulus ? RingSpec::modulo(*entry.modulus) : RingSpec::exact();
    const Series lhs = evaluate(entry.lhs, trunc, ring);

    // Group rhs terms by the residue class of their q-prefactor.
    std::map<std::size_t, Expression> classes;
    for (const auto& t : entry.rhs.terms) {
        auto& e = classes[t.qpower % m];
        e.expansion = entry.rhs.expansion;
        e.terms.push_back(t);
    }

    VerificationReport r;
    r.id = entry.id + "/components";
    r.tag = ClaimTag::Identity;
    r.trunc = trunc;
    for (std::size_t j = 0; j < m && j <= trunc; ++j) {
        const Series part = extract_ap(lhs, m, j);
        Series expected = Series::zero(ring, part.trunc());
        if (auto it = classes.find(j); it != classes.end()) {
            Expression e = it->second;
            e.extract(m, j);
            expected = evaluate(e, part.trunc(), ring);
            // Every term must vanish off its own class.
            for (std::size_t other = 0; other < m; ++other) {
                if (other == j || other > trunc) {
                    continue;
                }
                Expression off = it->second;
                off.extract(m, other);
                const Series stray = evaluate(off, (trunc - other) / m, ring);
                if (!stray.is_zero()) {
                    r.status = Status::Fail;
                    r.notes.push_back("terms of class " + std::to_string(j) + " leak into class " +
                                      std::to_string(other));
                }
            }
        }
        r.checked_count += part.trunc() + 1;
        if (auto diff = first_difference(part, expected)) {
            const auto n = static_cast<std::int64_t>(*diff);
            r.status = Status::Fail;
            if (!r.counterexample) {
                r.counterexample = Counterexample{n, static_cast<std::int64_t>(m) * n + static_cast<std::int64_t>(j),
                                                  part.coeff(n), expected.coeff(n)};
            }
        }
    }
    r.checked_upto = static_cast<std::int64_t>(trunc);
    return r;
}

std::string catalog_json()
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : identity_catalog()) {
        nlohmann::json j;
        j["id"] = e.id;
        j["anchor"] = e.anchor;
        j["modulus"] = e.modulus ? nlohmann::json(*e.modulus) : nlohmann::json(nullptr);
        j["lhs"] = e.lhs.to_string();
        j["rhs"] = e.rhs.to_string();
        if (!e.notes.empty()) {
            j["notes"] = e.notes;
        }
        out.push_back(std::move(j));
    }
    return out.dump(2);
}

} // namespace regulus

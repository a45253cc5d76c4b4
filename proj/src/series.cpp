#include "regulus/series.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <utility>

#include "regulus/error.hpp"

namespace regulus {

namespace {

using Residues = std::vector<std::uint64_t>;
using Integers = std::vector<Integer>;

constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 63;
constexpr std::uint64_t kSmallModulus = std::uint64_t{1} << 31;

// A nonzero term of the sparse operand, with the coefficient lifted to the
// symmetric range (-M/2, M/2] so products stay small.
struct SparseTerm {
    std::size_t index;
    std::int64_t value;
};

std::int64_t symmetric(std::uint64_t r, std::uint64_t m)
{
    return r > m / 2 ? static_cast<std::int64_t>(r) - static_cast<std::int64_t>(m) : static_cast<std::int64_t>(r);
}

std::uint64_t canonical(std::int64_t v, std::uint64_t m)
{
    auto sm = static_cast<std::int64_t>(m);
    std::int64_t r = v % sm;
    return static_cast<std::uint64_t>(r < 0 ? r + sm : r);
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::vector<SparseTerm> support(const Residues& c, std::uint64_t m, std::size_t from, std::size_t upto)
{
    std::vector<SparseTerm> out;
    for (std::size_t i = from; i <= upto && i < c.size(); ++i) {
        if (c[i] != 0) {
            out.push_back({i, symmetric(c[i], m)});
        }
    }
    return out;
}

// Number of products of size <= M * M/2 that can be summed into an int64
// accumulator already holding a value of magnitude < M.
std::size_t batch_size(std::uint64_t m)
{
    const unsigned __int128 prod = static_cast<unsigned __int128>(m / 2 + 1) * m;
    const unsigned __int128 room = (static_cast<unsigned __int128>(1) << 62);
    auto b = room / prod;
    return b == 0 ? 1 : static_cast<std::size_t>(std::min<unsigned __int128>(b, 1u << 30));
}

std::size_t count_nonzero(const Residues& c)
{
    return static_cast<std::size_t>(std::count_if(c.begin(), c.end(), [](std::uint64_t v) { return v != 0; }));
}

std::size_t count_nonzero(const Integers& c)
{
    return static_cast<std::size_t>(std::count_if(c.begin(), c.end(), [](const Integer& v) { return sgn(v) != 0; }));
}

Residues mul_mod(const Residues& a, const Residues& b, std::size_t n, std::uint64_t m)
{
    const bool a_sparser = count_nonzero(a) <= count_nonzero(b);
    const Residues& sp = a_sparser ? a : b;
    const Residues& dn = a_sparser ? b : a;
    const auto terms = support(sp, m, 0, n);

    Residues out(n + 1, 0);
    if (m <= kSmallModulus) {
        std::vector<std::int64_t> acc(n + 1, 0);
        const std::size_t batch = batch_size(m);
        std::size_t pending = 0;
        const auto sm = static_cast<std::int64_t>(m);
        for (const auto& t : terms) {
            const std::int64_t c = t.value;
            const std::uint64_t* src = dn.data();
            std::int64_t* dst = acc.data() + t.index;
            const std::size_t len = n + 1 - t.index;
            for (std::size_t i = 0; i < len; ++i) {
                dst[i] += c * static_cast<std::int64_t>(src[i]);
            }
            if (++pending == batch) {
                for (auto& v : acc) {
                    v %= sm;
                }
                pending = 0;
            }
        }
        for (std::size_t i = 0; i <= n; ++i) {
            out[i] = canonical(acc[i], m);
        }
    } else {
        for (const auto& t : terms) {
            const std::uint64_t c = canonical(t.value, m);
            for (std::size_t i = t.index; i <= n; ++i) {
                out[i] = (out[i] + mulmod(c, dn[i - t.index], m)) % m;
            }
        }
    }
    return out;
}

Integers mul_exact(const Integers& a, const Integers& b, std::size_t n)
{
    const bool a_sparser = count_nonzero(a) <= count_nonzero(b);
    const Integers& sp = a_sparser ? a : b;
    const Integers& dn = a_sparser ? b : a;
    Integers out(n + 1, 0);
    for (std::size_t j = 0; j <= n; ++j) {
        const Integer& c = sp[j];
        if (sgn(c) == 0) {
            continue;
        }
        if (c.fits_slong_p()) {
            const long cv = c.get_si();
            const unsigned long mag = cv < 0 ? 0UL - static_cast<unsigned long>(cv) : static_cast<unsigned long>(cv);
            for (std::size_t i = j; i <= n; ++i) {
                if (cv > 0) {
                    mpz_addmul_ui(out[i].get_mpz_t(), dn[i - j].get_mpz_t(), mag);
                } else {
                    mpz_submul_ui(out[i].get_mpz_t(), dn[i - j].get_mpz_t(), mag);
                }
            }
        } else {
            for (std::size_t i = j; i <= n; ++i) {
                mpz_addmul(out[i].get_mpz_t(), c.get_mpz_t(), dn[i - j].get_mpz_t());
            }
        }
    }
    return out;
}

Residues divide_mod(const Residues& num, const Residues& den, std::size_t n, std::uint64_t m)
{
    const auto inv0 = inverse_mod(den[0], m);
    if (!inv0) {
        fail(ErrorKind::NonUnitConstantTerm,
             "constant term " + std::to_string(den[0]) + " is not a unit mod " + std::to_string(m));
    }
    const auto terms = support(den, m, 1, n);
    Residues out(n + 1, 0);
    if (m <= kSmallModulus) {
        const std::size_t batch = batch_size(m);
        const auto sm = static_cast<std::int64_t>(m);
        for (std::size_t i = 0; i <= n; ++i) {
            std::int64_t acc = static_cast<std::int64_t>(num[i]);
            std::size_t pending = 0;
            for (const auto& t : terms) {
                if (t.index > i) {
                    break;
                }
                acc -= t.value * static_cast<std::int64_t>(out[i - t.index]);
                if (++pending == batch) {
                    acc %= sm;
                    pending = 0;
                }
            }
            out[i] = mulmod(canonical(acc, m), *inv0, m);
        }
    } else {
        for (std::size_t i = 0; i <= n; ++i) {
            std::uint64_t acc = num[i];
            for (const auto& t : terms) {
                if (t.index > i) {
                    break;
                }
                const std::uint64_t c = canonical(t.value, m);
                acc = (acc + m - mulmod(c, out[i - t.index], m)) % m;
            }
            out[i] = mulmod(acc, *inv0, m);
        }
    }
    return out;
}

Integers divide_exact(const Integers& num, const Integers& den, std::size_t n)
{
    if (abs(den[0]) != 1) {
        fail(ErrorKind::NonUnitConstantTerm, "constant term " + den[0].get_str() + " is not a unit in Z");
    }
    const bool negate = sgn(den[0]) < 0;
    std::vector<std::pair<std::size_t, const Integer*>> terms;
    for (std::size_t j = 1; j <= n; ++j) {
        if (sgn(den[j]) != 0) {
            terms.emplace_back(j, &den[j]);
        }
    }
    Integers out(n + 1, 0);
    for (std::size_t i = 0; i <= n; ++i) {
        Integer acc = num[i];
        for (const auto& [j, c] : terms) {
            if (j > i) {
                break;
            }
            mpz_submul(acc.get_mpz_t(), c->get_mpz_t(), out[i - j].get_mpz_t());
        }
        if (negate) {
            acc = -acc;
        }
        out[i] = std::move(acc);
    }
    return out;
}

void require_same_ring(const Series& a, const Series& b, const char* op)
{
    if (a.ring() != b.ring()) {
        fail(ErrorKind::RingMismatch,
             std::string(op) + " of series over " + a.ring().to_string() + " and " + b.ring().to_string());
    }
}

} // namespace

// Gives the free functions access to the storage without widening the public API.
class SeriesAccess {
public:
    static const Series::Storage& data(const Series& s) { return s.data_; }
    static Series make(RingSpec ring, Integers c) { return Series(ring, Series::Storage(std::move(c))); }
    static Series make(RingSpec ring, Residues c) { return Series(ring, Series::Storage(std::move(c))); }

    static const Integers& ints(const Series& s) { return std::get<Integers>(s.data_); }
    static const Residues& res(const Series& s) { return std::get<Residues>(s.data_); }
};

namespace {

template <typename ExactFn, typename ModFn>
Series dispatch(const Series& a, ExactFn&& exact, ModFn&& mod)
{
    if (a.ring().is_exact()) {
        return SeriesAccess::make(a.ring(), exact(SeriesAccess::ints(a)));
    }
    return SeriesAccess::make(a.ring(), mod(SeriesAccess::res(a), a.ring().modulus()));
}

} // namespace

// ---------------------------------------------------------------------------

RingSpec RingSpec::modulo(std::uint64_t m)
{
    if (m < 2 || m >= kMaxModulus) {
        fail(ErrorKind::DomainError, "modulus must satisfy 2 <= M < 2^63, got " + std::to_string(m));
    }
    RingSpec r;
    r.kind_ = Kind::IntegerModM;
    r.modulus_ = m;
    return r;
}

std::string RingSpec::to_string() const
{
    return is_exact() ? std::string("Z") : "Z/" + std::to_string(modulus_) + "Z";
}

std::uint64_t reduce_integer(const Integer& v, std::uint64_t m)
{
    static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));
    return mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(m));
}

std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t m)
{
    // Extended Euclid on signed 128-bit values.
    __int128 old_r = a % m;
    __int128 r = m;
    __int128 old_s = 1;
    __int128 s = 0;
    while (r != 0) {
        const __int128 q = old_r / r;
        old_r -= q * r;
        std::swap(old_r, r);
        old_s -= q * s;
        std::swap(old_s, s);
    }
    if (old_r != 1) {
        return std::nullopt;
    }
    __int128 inv = old_s % static_cast<__int128>(m);
    if (inv < 0) {
        inv += m;
    }
    return static_cast<std::uint64_t>(inv);
}

Series::Series() : ring_(RingSpec::exact()), data_(Integers{Integer(0)}) {}

Series Series::from_integers(RingSpec ring, std::vector<Integer> coeffs)
{
    if (coeffs.empty()) {
        fail(ErrorKind::DomainError, "a truncated series needs at least one coefficient");
    }
    if (ring.is_exact()) {
        return Series(ring, Storage(std::move(coeffs)));
    }
    Residues r(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        r[i] = reduce_integer(coeffs[i], ring.modulus());
    }
    return Series(ring, Storage(std::move(r)));
}

Series Series::from_ints(RingSpec ring, std::initializer_list<long long> coeffs)
{
    std::vector<Integer> c;
    c.reserve(coeffs.size());
    for (long long v : coeffs) {
        c.emplace_back(static_cast<long>(v));
    }
    return from_integers(ring, std::move(c));
}

Series Series::from_residues(std::uint64_t modulus, std::vector<std::uint64_t> residues)
{
    const auto ring = RingSpec::modulo(modulus);
    if (residues.empty()) {
        fail(ErrorKind::DomainError, "a truncated series needs at least one coefficient");
    }
    for (auto v : residues) {
        if (v >= modulus) {
            fail(ErrorKind::DomainError, "residue " + std::to_string(v) + " out of range");
        }
    }
    return Series(ring, Storage(std::move(residues)));
}

Series Series::zero(RingSpec ring, std::size_t trunc)
{
    if (ring.is_exact()) {
        return Series(ring, Storage(Integers(trunc + 1, 0)));
    }
    return Series(ring, Storage(Residues(trunc + 1, 0)));
}

std::size_t Series::trunc() const noexcept
{
    return std::visit([](const auto& v) { return v.size() - 1; }, data_);
}

Integer Series::coeff(std::int64_t n) const
{
    if (n < 0) {
        return 0;
    }
    if (static_cast<std::uint64_t>(n) > trunc()) {
        fail(ErrorKind::TruncationTooSmall,
             "coefficient " + std::to_string(n) + " requested from series truncated at " + std::to_string(trunc()));
    }
    if (ring_.is_exact()) {
        return std::get<Integers>(data_)[static_cast<std::size_t>(n)];
    }
    return Integer(static_cast<unsigned long>(std::get<Residues>(data_)[static_cast<std::size_t>(n)]));
}

std::uint64_t Series::residue(std::int64_t n) const
{
    const auto& r = residues();
    if (n < 0) {
        return 0;
    }
    if (static_cast<std::uint64_t>(n) >= r.size()) {
        fail(ErrorKind::TruncationTooSmall,
             "coefficient " + std::to_string(n) + " requested from series truncated at " + std::to_string(trunc()));
    }
    return r[static_cast<std::size_t>(n)];
}

std::span<const Integer> Series::exact_coeffs() const
{
    if (!ring_.is_exact()) {
        fail(ErrorKind::RingMismatch, "exact coefficients requested from a series over " + ring_.to_string());
    }
    return std::get<Integers>(data_);
}

std::span<const std::uint64_t> Series::residues() const
{
    if (ring_.is_exact()) {
        fail(ErrorKind::RingMismatch, "residues requested from a series over Z");
    }
    return std::get<Residues>(data_);
}

std::vector<Integer> Series::to_integers() const
{
    if (ring_.is_exact()) {
        return std::get<Integers>(data_);
    }
    const auto& r = std::get<Residues>(data_);
    Integers out;
    out.reserve(r.size());
    for (auto v : r) {
        out.emplace_back(static_cast<unsigned long>(v));
    }
    return out;
}

std::size_t Series::nonzero_count() const
{
    return std::visit([](const auto& v) { return count_nonzero(v); }, data_);
}

bool Series::is_zero() const { return nonzero_count() == 0; }

bool operator==(const Series& a, const Series& b) { return a.ring_ == b.ring_ && a.data_ == b.data_; }

// ---------------------------------------------------------------------------

Series make_constant(RingSpec ring, const Integer& value, std::size_t trunc)
{
    Integers c(trunc + 1, 0);
    c[0] = value;
    return Series::from_integers(ring, std::move(c));
}

Series add(const Series& a, const Series& b)
{
    require_same_ring(a, b, "add");
    const std::size_t n = std::min(a.trunc(), b.trunc());
    if (a.ring().is_exact()) {
        const auto& x = SeriesAccess::ints(a);
        const auto& y = SeriesAccess::ints(b);
        Integers out(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            out[i] = x[i] + y[i];
        }
        return SeriesAccess::make(a.ring(), std::move(out));
    }
    const auto m = a.ring().modulus();
    const auto& x = SeriesAccess::res(a);
    const auto& y = SeriesAccess::res(b);
    Residues out(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const std::uint64_t s = x[i] + y[i]; // both < 2^63
        out[i] = s >= m ? s - m : s;
    }
    return SeriesAccess::make(a.ring(), std::move(out));
}

Series neg(const Series& a)
{
    return dispatch(
        a,
        [](const Integers& c) {
            Integers out(c.size());
            for (std::size_t i = 0; i < c.size(); ++i) {
                out[i] = -c[i];
            }
            return out;
        },
        [](const Residues& c, std::uint64_t m) {
            Residues out(c.size());
            for (std::size_t i = 0; i < c.size(); ++i) {
                out[i] = c[i] == 0 ? 0 : m - c[i];
            }
            return out;
        });
}

Series sub(const Series& a, const Series& b)
{
    require_same_ring(a, b, "sub");
    return add(a, neg(b));
}

Series scale(const Series& a, const Integer& c)
{
    return dispatch(
        a,
        [&](const Integers& v) {
            Integers out(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) {
                out[i] = v[i] * c;
            }
            return out;
        },
        [&](const Residues& v, std::uint64_t m) {
            const std::uint64_t cr = reduce_integer(c, m);
            Residues out(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) {
                out[i] = mulmod(v[i], cr, m);
            }
            return out;
        });
}

Series mul(const Series& a, const Series& b)
{
    require_same_ring(a, b, "mul");
    const std::size_t n = std::min(a.trunc(), b.trunc());
    if (a.ring().is_exact()) {
        return SeriesAccess::make(a.ring(), mul_exact(SeriesAccess::ints(a), SeriesAccess::ints(b), n));
    }
    return SeriesAccess::make(a.ring(), mul_mod(SeriesAccess::res(a), SeriesAccess::res(b), n, a.ring().modulus()));
}

Series divide(const Series& a, const Series& b)
{
    require_same_ring(a, b, "divide");
    const std::size_t n = std::min(a.trunc(), b.trunc());
    if (a.ring().is_exact()) {
        return SeriesAccess::make(a.ring(), divide_exact(SeriesAccess::ints(a), SeriesAccess::ints(b), n));
    }
    return SeriesAccess::make(a.ring(),
                              divide_mod(SeriesAccess::res(a), SeriesAccess::res(b), n, a.ring().modulus()));
}

Series invert(const Series& a) { return divide(make_constant(a.ring(), 1, a.trunc()), a); }

Series pow(const Series& a, long long e)
{
    if (e == 0) {
        return make_constant(a.ring(), 1, a.trunc());
    }
    if (e < 0) {
        return pow(invert(a), -e);
    }
    // A sparse base is cheaper to multiply in one factor at a time than to
    // square into a dense intermediate.
    const std::size_t nnz = a.nonzero_count();
    const auto steps = static_cast<std::size_t>(e - 1);
    const auto log2e = static_cast<std::size_t>(std::bit_width(static_cast<unsigned long long>(e)));
    if (steps * nnz <= log2e * (a.trunc() + 1) / 2) {
        Series out = a;
        for (std::size_t i = 0; i < steps; ++i) {
            out = mul(out, a);
        }
        return out;
    }
    Series result = make_constant(a.ring(), 1, a.trunc());
    Series base = a;
    auto k = static_cast<unsigned long long>(e);
    while (true) {
        if (k & 1ULL) {
            result = mul(result, base);
        }
        k >>= 1;
        if (k == 0) {
            break;
        }
        base = mul(base, base);
    }
    return result;
}

Series magnify(const Series& a, std::size_t t)
{
    if (t == 0) {
        fail(ErrorKind::DomainError, "magnify factor must be >= 1");
    }
    const std::size_t n = a.trunc() * t;
    return dispatch(
        a,
        [&](const Integers& c) {
            Integers out(n + 1, 0);
            for (std::size_t i = 0; i < c.size(); ++i) {
                out[i * t] = c[i];
            }
            return out;
        },
        [&](const Residues& c, std::uint64_t) {
            Residues out(n + 1, 0);
            for (std::size_t i = 0; i < c.size(); ++i) {
                out[i * t] = c[i];
            }
            return out;
        });
}

Series shift(const Series& a, std::size_t d)
{
    return dispatch(
        a,
        [&](const Integers& c) {
            Integers out(c.size() + d, 0);
            std::copy(c.begin(), c.end(), out.begin() + static_cast<std::ptrdiff_t>(d));
            return out;
        },
        [&](const Residues& c, std::uint64_t) {
            Residues out(c.size() + d, 0);
            std::copy(c.begin(), c.end(), out.begin() + static_cast<std::ptrdiff_t>(d));
            return out;
        });
}

Series extract_ap(const Series& a, std::size_t m, std::size_t r)
{
    if (m == 0 || r >= m) {
        fail(ErrorKind::DomainError, "extract_ap needs m >= 1 and 0 <= r < m");
    }
    if (r > a.trunc()) {
        fail(ErrorKind::TruncationTooSmall,
             "residue " + std::to_string(r) + " beyond truncation " + std::to_string(a.trunc()));
    }
    const std::size_t n = (a.trunc() - r) / m;
    return dispatch(
        a,
        [&](const Integers& c) {
            Integers out(n + 1);
            for (std::size_t i = 0; i <= n; ++i) {
                out[i] = c[m * i + r];
            }
            return out;
        },
        [&](const Residues& c, std::uint64_t) {
            Residues out(n + 1);
            for (std::size_t i = 0; i <= n; ++i) {
                out[i] = c[m * i + r];
            }
            return out;
        });
}

Series truncate(const Series& a, std::size_t trunc)
{
    if (trunc > a.trunc()) {
        fail(ErrorKind::TruncationTooSmall,
             "cannot extend truncation " + std::to_string(a.trunc()) + " to " + std::to_string(trunc));
    }
    return dispatch(
        a, [&](const Integers& c) { return Integers(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(trunc + 1)); },
        [&](const Residues& c, std::uint64_t) {
            return Residues(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(trunc + 1));
        });
}

Series reduce_mod(const Series& a, std::uint64_t m)
{
    const auto ring = RingSpec::modulo(m);
    if (a.ring().is_exact()) {
        const auto& c = SeriesAccess::ints(a);
        Residues out(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            out[i] = reduce_integer(c[i], m);
        }
        return SeriesAccess::make(ring, std::move(out));
    }
    const auto mm = a.ring().modulus();
    if (mm % m != 0) {
        fail(ErrorKind::IncompatibleModulus,
             "cannot reduce a series mod " + std::to_string(mm) + " to mod " + std::to_string(m));
    }
    const auto& c = SeriesAccess::res(a);
    Residues out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        out[i] = c[i] % m;
    }
    return SeriesAccess::make(ring, std::move(out));
}

std::optional<std::size_t> first_difference(const Series& a, const Series& b)
{
    require_same_ring(a, b, "comparison");
    const std::size_t n = std::min(a.trunc(), b.trunc());
    if (a.ring().is_exact()) {
        const auto& x = SeriesAccess::ints(a);
        const auto& y = SeriesAccess::ints(b);
        for (std::size_t i = 0; i <= n; ++i) {
            if (x[i] != y[i]) {
                return i;
            }
        }
        return std::nullopt;
    }
    const auto& x = SeriesAccess::res(a);
    const auto& y = SeriesAccess::res(b);
    for (std::size_t i = 0; i <= n; ++i) {
        if (x[i] != y[i]) {
            return i;
        }
    }
    return std::nullopt;
}

} // namespace regulus

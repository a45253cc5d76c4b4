#include "regulus/etaq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "regulus/error.hpp"

namespace regulus {

namespace {

void require_positive_delta(int delta)
{
    if (delta < 1) {
        fail(ErrorKind::DomainError, "f_delta needs delta >= 1, got " + std::to_string(delta));
    }
}

// |r| = 3 * cubes + singles; cubes come from the sparser Jacobi series.
struct FactorPlan {
    int delta;
    int cubes;
    int singles;
};

FactorPlan plan_factor(int delta, int magnitude) { return {delta, magnitude / 3, magnitude % 3}; }

using SparseTerms = std::vector<std::pair<std::size_t, long>>;

Series materialize(RingSpec ring, std::size_t trunc, const SparseTerms& terms)
{
    if (ring.is_exact()) {
        std::vector<Integer> c(trunc + 1, 0);
        for (const auto& [i, v] : terms) {
            c[i] += v;
        }
        return Series::from_integers(ring, std::move(c));
    }
    const auto m = ring.modulus();
    std::vector<std::uint64_t> c(trunc + 1, 0);
    for (const auto& [i, v] : terms) {
        c[i] = (c[i] + reduce_integer(Integer(v), m)) % m;
    }
    return Series::from_residues(m, std::move(c));
}

} // namespace

FQuotient::FQuotient(Integer scalar, std::initializer_list<std::pair<const int, int>> factors)
    : scalar_(std::move(scalar))
{
    for (const auto& [delta, r] : factors) {
        times(delta, r);
    }
}

FQuotient FQuotient::f(int delta, int exponent)
{
    FQuotient q;
    q.times(delta, exponent);
    return q;
}

FQuotient FQuotient::tuple_regular(int ell, int k)
{
    if (ell < 2 || k < 1) {
        fail(ErrorKind::DomainError, "tuple-regular generating function needs ell >= 2 and k >= 1");
    }
    FQuotient q;
    q.times(ell, k);
    q.times(1, -k);
    return q;
}

FQuotient& FQuotient::times(int delta, int exponent)
{
    require_positive_delta(delta);
    if (exponent == 0) {
        return *this;
    }
    const int r = (factors_[delta] += exponent);
    if (r == 0) {
        factors_.erase(delta);
    }
    return *this;
}

FQuotient FQuotient::operator*(const FQuotient& other) const
{
    FQuotient out = *this;
    out.scalar_ *= other.scalar_;
    for (const auto& [delta, r] : other.factors_) {
        out.times(delta, r);
    }
    return out;
}

FQuotient FQuotient::inverse_factors() const
{
    FQuotient out(scalar_);
    for (const auto& [delta, r] : factors_) {
        out.times(delta, -r);
    }
    return out;
}

std::string FQuotient::to_string() const
{
    auto render = [](const std::vector<std::pair<int, int>>& fs) {
        std::string s;
        for (const auto& [delta, r] : fs) {
            if (!s.empty()) {
                s += ' ';
            }
            s += "f" + std::to_string(delta);
            if (r != 1) {
                s += "^" + std::to_string(r);
            }
        }
        return s;
    };
    std::vector<std::pair<int, int>> num;
    std::vector<std::pair<int, int>> den;
    for (const auto& [delta, r] : factors_) {
        (r > 0 ? num : den).emplace_back(delta, std::abs(r));
    }
    std::string out;
    if (scalar_ != 1 || num.empty()) {
        out = scalar_.get_str();
        if (!num.empty()) {
            out += " * ";
        }
    }
    out += render(num);
    if (!den.empty()) {
        out += den.size() == 1 ? " / " + render(den) : " / (" + render(den) + ")";
    }
    return out;
}

// ---------------------------------------------------------------------------

Series expand_f(int delta, std::size_t trunc, RingSpec ring)
{
    require_positive_delta(delta);
    const auto d = static_cast<std::size_t>(delta);
    SparseTerms terms{{0, 1}};
    // n and -n contribute the pentagonal pair n(3n-1)/2 and n(3n+1)/2.
    for (std::size_t n = 1;; ++n) {
        const std::size_t e1 = d * (n * (3 * n - 1) / 2);
        const std::size_t e2 = d * (n * (3 * n + 1) / 2);
        if (e1 > trunc) {
            break;
        }
        const long sign = (n % 2 == 0) ? 1 : -1;
        terms.emplace_back(e1, sign);
        if (e2 <= trunc) {
            terms.emplace_back(e2, sign);
        }
    }
    return materialize(ring, trunc, terms);
}

Series expand_f_product(int delta, std::size_t trunc, RingSpec ring)
{
    require_positive_delta(delta);
    // Multiply by (1 - q^k) in place, highest index first.
    std::vector<Integer> c(trunc + 1, 0);
    c[0] = 1;
    const auto d = static_cast<std::size_t>(delta);
    for (std::size_t k = d; k <= trunc; k += d) {
        for (std::size_t i = trunc; i >= k; --i) {
            c[i] -= c[i - k];
        }
    }
    return Series::from_integers(ring, std::move(c));
}

Series jacobi_cube_series(std::size_t trunc, RingSpec ring, int scale)
{
    require_positive_delta(scale);
    const auto sc = static_cast<std::size_t>(scale);
    SparseTerms terms;
    for (std::size_t n = 0;; ++n) {
        const std::size_t e = sc * (n * (n + 1) / 2);
        if (e > trunc) {
            break;
        }
        const auto v = static_cast<long>(2 * n + 1);
        terms.emplace_back(e, (n % 2 == 0) ? v : -v);
    }
    return materialize(ring, trunc, terms);
}

Series borwein_a_series(int scale, std::size_t trunc, RingSpec ring)
{
    require_positive_delta(scale);
    const auto s = static_cast<std::size_t>(scale);
    const std::size_t top = trunc / s;
    const auto bound = static_cast<long>(std::ceil(std::sqrt(4.0 * static_cast<double>(top) / 3.0))) + 1;
    std::vector<long> counts(top + 1, 0);
    for (long j = -bound; j <= bound; ++j) {
        for (long k = -bound; k <= bound; ++k) {
            const long m = j * j + j * k + k * k;
            if (m >= 0 && static_cast<std::size_t>(m) <= top) {
                ++counts[static_cast<std::size_t>(m)];
            }
        }
    }
    SparseTerms terms;
    for (std::size_t m = 0; m <= top; ++m) {
        if (counts[m] != 0) {
            terms.emplace_back(m * s, counts[m]);
        }
    }
    return materialize(ring, trunc, terms);
}

Series expand_fquotient(const FQuotient& fq, std::size_t trunc, RingSpec ring)
{
    std::vector<Series> numerator;
    std::vector<Series> denominator;
    for (const auto& [delta, r] : fq.factors()) {
        const FactorPlan plan = plan_factor(delta, std::abs(r));
        auto& dest = r > 0 ? numerator : denominator;
        if (plan.cubes > 0) {
            const Series cube = jacobi_cube_series(trunc, ring, delta);
            for (int i = 0; i < plan.cubes; ++i) {
                dest.push_back(cube);
            }
        }
        if (plan.singles > 0) {
            const Series single = expand_f(delta, trunc, ring);
            for (int i = 0; i < plan.singles; ++i) {
                dest.push_back(single);
            }
        }
    }
    auto by_sparsity = [](const Series& a, const Series& b) { return a.nonzero_count() < b.nonzero_count(); };
    std::sort(numerator.begin(), numerator.end(), by_sparsity);
    std::sort(denominator.begin(), denominator.end(), by_sparsity);

    Series out = make_constant(ring, fq.scalar(), trunc);
    for (const auto& s : numerator) {
        out = mul(out, s);
    }
    for (const auto& s : denominator) {
        out = divide(out, s);
    }
    return out;
}

} // namespace regulus

#pragma once

// Characteristic polynomials of adjacency matrices, the Eisenstein/newform
// eigenvalue checks, and newform orbit profiles.

#include "linalg.hpp"
#include "table1.hpp"

#include <map>
#include <optional>
#include <set>

namespace ssig::spectra {

// Integer polynomial, coefficients from the constant term up.
struct IntPolynomial {
    std::vector<bigint> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }
    const bigint &coeff(std::size_t k) const { return c[k]; }

    friend bool operator==(const IntPolynomial &, const IntPolynomial &) = default;

    std::string to_string(const std::string &var = "T") const
    {
        std::string s;
        for (int k = degree(); k >= 0; --k) {
            const bigint &v = c[static_cast<std::size_t>(k)];
            if (v == 0)
                continue;
            bigint m = abs(v);
            s += s.empty() ? (v < 0 ? "-" : "") : (v < 0 ? " - " : " + ");
            if (m != 1 || k == 0)
                s += m.str();
            if (k > 0)
                s += (m != 1 ? "*" : "") + var + (k > 1 ? "^" + std::to_string(k) : "");
        }
        return s.empty() ? "0" : s;
    }
};

inline IntPolynomial poly_from_roots(const std::vector<i64> &roots)
{
    IntPolynomial p{{1}};
    for (i64 a : roots) {
        std::vector<bigint> n(p.c.size() + 1, 0);
        for (std::size_t k = 0; k < p.c.size(); ++k) {
            n[k + 1] += p.c[k];
            n[k] -= a * p.c[k];
        }
        p.c = std::move(n);
    }
    return p;
}

// det(T I - A) by Faddeev-LeVerrier; all divisions are exact.
inline IntPolynomial charpoly_adjacency(const IntMatrix &a)
{
    const std::size_t n = a.size();
    const BigMatrix A = to_big(a);
    std::vector<bigint> c(n + 1, 0);
    c[n] = 1;
    BigMatrix m(n, std::vector<bigint>(n, 0));
    for (std::size_t k = 1; k <= n; ++k) {
        // m <- A m + c_{n-k+1} I
        BigMatrix am(n, std::vector<bigint>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                if (A[i][l] != 0)
                    for (std::size_t j = 0; j < n; ++j)
                        am[i][j] += A[i][l] * m[l][j];
        for (std::size_t i = 0; i < n; ++i)
            am[i][i] += c[n - k + 1];
        m = std::move(am);
        bigint tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                tr += A[i][l] * m[l][i];
        ensure(tr % static_cast<i64>(k) == 0, "Faddeev-LeVerrier trace not divisible");
        c[n - k] = -tr / static_cast<i64>(k);
    }
    return {c};
}

// det(T I - A) mod p via Hessenberg reduction.  Coefficients in [0, p).
inline std::vector<u64> charpoly_mod_p(const IntMatrix &a, u64 p)
{
    const std::size_t n = a.size();
    std::vector<std::vector<u64>> h(n, std::vector<u64>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h[i][j] = static_cast<u64>(mod_floor(bigint(a[i][j]), p));
    for (std::size_t m = 1; m + 1 < n; ++m) {
        std::size_t piv = m;
        while (piv < n && h[piv][m - 1] == 0)
            ++piv;
        if (piv == n)
            continue;
        if (piv != m) {
            std::swap(h[piv], h[m]);
            for (std::size_t i = 0; i < n; ++i)
                std::swap(h[i][piv], h[i][m]);
        }
        const u64 inv = invmod(h[m][m - 1], p);
        for (std::size_t i = m + 1; i < n; ++i) {
            u64 f = mulmod(h[i][m - 1], inv, p);
            if (!f)
                continue;
            for (std::size_t j = 0; j < n; ++j)
                h[i][j] = (h[i][j] + p - mulmod(f, h[m][j], p)) % p;
            for (std::size_t j = 0; j < n; ++j)
                h[j][m] = (h[j][m] + mulmod(f, h[j][i], p)) % p;
        }
    }
    // p_k(T) = charpoly of the leading k x k block.
    std::vector<std::vector<u64>> pk(n + 1);
    pk[0] = {1};
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<u64> cur(k + 1, 0);
        const auto &prev = pk[k - 1];
        for (std::size_t t = 0; t < prev.size(); ++t) {
            cur[t + 1] = (cur[t + 1] + prev[t]) % p;
            cur[t] = (cur[t] + p - mulmod(h[k - 1][k - 1], prev[t], p)) % p;
        }
        u64 prod = 1;
        for (std::size_t i = k - 1; i-- > 0;) {
            prod = mulmod(prod, h[i + 1][i], p);
            const u64 f = mulmod(prod, h[i][k - 1], p);
            if (!f)
                continue;
            for (std::size_t t = 0; t < pk[i].size(); ++t)
                cur[t] = (cur[t] + p - mulmod(f, pk[i][t], p)) % p;
        }
        pk[k] = std::move(cur);
    }
    return pk[n];
}

inline std::vector<u64> reduce_mod_p(const IntPolynomial &f, u64 p)
{
    std::vector<u64> out;
    for (const auto &v : f.c)
        out.push_back(static_cast<u64>(mod_floor(v, p)));
    return out;
}

// chi(A) = 0.
inline bool cayley_hamilton_holds(const IntMatrix &a, const IntPolynomial &cp)
{
    const std::size_t n = a.size();
    const BigMatrix A = to_big(a);
    BigMatrix acc(n, std::vector<bigint>(n, 0));
    for (int k = cp.degree(); k >= 0; --k) {
        BigMatrix next(n, std::vector<bigint>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                if (acc[i][l] != 0)
                    for (std::size_t j = 0; j < n; ++j)
                        next[i][j] += acc[i][l] * A[l][j];
        for (std::size_t i = 0; i < n; ++i)
            next[i][i] += cp.c[static_cast<std::size_t>(k)];
        acc = std::move(next);
    }
    for (const auto &row : acc)
        for (const auto &v : row)
            if (v != 0)
                return false;
    return true;
}

inline bool eisenstein_check(const IntMatrix &a, i64 ell)
{
    for (const auto &row : a) {
        i64 s = 0;
        for (i64 v : row)
            s += v;
        if (s != ell + 1)
            return false;
    }
    return true;
}

// f / (T - v) when exact.
inline std::optional<IntPolynomial> divide_linear(const IntPolynomial &f, const bigint &v)
{
    if (f.degree() < 1)
        return std::nullopt;
    const std::size_t n = f.c.size() - 1;
    std::vector<bigint> q(n, 0);
    bigint carry = 0;
    for (std::size_t k = n; k-- > 0;) {
        carry = f.c[k + 1] + carry * v;
        q[k] = carry;
    }
    // remainder f(v)
    if (f.c[0] + carry * v != 0)
        return std::nullopt;
    return IntPolynomial{q};
}

inline unsigned root_multiplicity(IntPolynomial f, const bigint &v)
{
    unsigned m = 0;
    while (auto q = divide_linear(f, v)) {
        f = std::move(*q);
        ++m;
    }
    return m;
}

// Largest k with (T - value)^k | f over F_p.
inline unsigned multiplicity_mod_p(std::vector<u64> f, i64 value, u64 p)
{
    const u64 v = static_cast<u64>(mod_floor(bigint(value), p));
    while (!f.empty() && f.back() == 0)
        f.pop_back();
    unsigned m = 0;
    while (f.size() >= 2) {
        u64 val = 0;
        for (std::size_t k = f.size(); k-- > 0;)
            val = (mulmod(val, v, p) + f[k]) % p;
        if (val != 0)
            break;
        std::vector<u64> q(f.size() - 1, 0);
        u64 carry = 0;
        for (std::size_t k = f.size() - 1; k-- > 0;) {
            carry = (f[k + 1] + mulmod(carry, v, p)) % p;
            q[k] = carry;
        }
        f = std::move(q);
        ++m;
    }
    return m;
}

inline unsigned multiplicity_mod_p(const IntPolynomial &cp, i64 value, u64 p)
{
    return multiplicity_mod_p(reduce_mod_p(cp, p), value, p);
}

// The eigenspace of l+1 is one-dimensional.
inline bool connectedness_via_spectrum(const IntMatrix &a, i64 ell)
{
    return root_multiplicity(charpoly_adjacency(a), ell + 1) == 1;
}

namespace detail {

using QPoly = std::vector<rational>;

inline void trim(QPoly &f)
{
    while (!f.empty() && f.back() == 0)
        f.pop_back();
}

inline QPoly qrem(QPoly f, const QPoly &g)
{
    trim(f);
    while (f.size() >= g.size()) {
        const rational q = f.back() / g.back();
        const std::size_t s = f.size() - g.size();
        for (std::size_t k = 0; k < g.size(); ++k)
            f[s + k] -= q * g[k];
        f.pop_back();
        trim(f);
    }
    return f;
}

inline QPoly qderiv(const QPoly &f)
{
    QPoly d;
    for (std::size_t k = 1; k < f.size(); ++k)
        d.push_back(f[k] * static_cast<i64>(k));
    trim(d);
    return d;
}

inline QPoly qgcd(QPoly a, QPoly b)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        QPoly r = qrem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline QPoly qdiv(QPoly f, const QPoly &g)
{
    trim(f);
    if (f.size() < g.size())
        return {};
    QPoly q(f.size() - g.size() + 1, 0);
    while (f.size() >= g.size()) {
        const rational c = f.back() / g.back();
        const std::size_t s = f.size() - g.size();
        q[s] = c;
        for (std::size_t k = 0; k < g.size(); ++k)
            f[s + k] -= c * g[k];
        f.pop_back();
        trim(f);
    }
    return q;
}

inline int sign_at(const QPoly &f, const rational &x)
{
    rational v = 0;
    for (std::size_t k = f.size(); k-- > 0;)
        v = v * x + f[k];
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

inline int sign_at_infinity(const QPoly &f) { return f.empty() ? 0 : (f.back() > 0 ? 1 : -1); }

// Distinct real roots in (a, infinity), a not a root.
inline unsigned sturm_roots_above(const QPoly &f0, const rational &a)
{
    QPoly f = f0;
    trim(f);
    if (f.size() <= 1)
        return 0;
    std::vector<QPoly> seq{f, qderiv(f)};
    while (!seq.back().empty()) {
        QPoly r = qrem(seq[seq.size() - 2], seq.back());
        for (auto &c : r)
            c = -c;
        if (r.empty())
            break;
        seq.push_back(std::move(r));
    }
    auto changes = [&](auto sgn) {
        unsigned v = 0;
        int last = 0;
        for (const auto &p : seq) {
            int s = sgn(p);
            if (s == 0)
                continue;
            if (last != 0 && s != last)
                ++v;
            last = s;
        }
        return v;
    };
    const unsigned va = changes([&](const QPoly &p) { return sign_at(p, a); });
    const unsigned vinf = changes([](const QPoly &p) { return sign_at_infinity(p); });
    return va - vinf;
}

} // namespace detail

namespace detail {

// H with H(t^2) = g(t) g(-t) up to sign; its roots are the squares of the roots of g.
inline std::vector<bigint> even_part_square(const IntPolynomial &g)
{
    std::vector<bigint> prod(2 * g.c.size() - 1, 0);
    for (std::size_t i = 0; i < g.c.size(); ++i)
        for (std::size_t j = 0; j < g.c.size(); ++j)
            prod[i + j] += g.c[i] * (j % 2 ? -g.c[j] : g.c[j]);
    std::vector<bigint> h;
    for (std::size_t k = 0; k < prod.size(); k += 2)
        h.push_back(prod[k]);
    while (!h.empty() && h.back() == 0)
        h.pop_back();
    return h;
}

// Sturm count of distinct roots of H above 4l; valid for any integer polynomial g.
inline bool deligne_sturm(const IntPolynomial &g, i64 ell)
{
    const auto h0 = even_part_square(g);
    if (h0.size() <= 1)
        return true;
    QPoly h;
    for (const auto &c : h0)
        h.push_back(rational(c));
    // Squarefree part, with any root at exactly 4l removed.
    QPoly sf = qdiv(h, qgcd(h, qderiv(h)));
    const rational bound(4 * ell);
    while (sf.size() > 1 && sign_at(sf, bound) == 0)
        sf = qdiv(sf, QPoly{-bound, rational(1)});
    return sturm_roots_above(sf, bound) == 0;
}

// Descartes count of roots of H above 4l.  Exact because H is real-rooted
// whenever g is, e.g. for a symmetric adjacency matrix.
inline bool deligne_descartes(const IntPolynomial &g, i64 ell)
{
    auto h = even_part_square(g);
    const bigint c = 4 * ell;
    const std::size_t n = h.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = n - 1; j-- > i;)
            h[j] += c * h[j + 1];
    unsigned changes = 0;
    int last = 0;
    for (const auto &v : h) {
        const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (s == 0)
            continue;
        changes += last != 0 && s != last;
        last = s;
    }
    return changes == 0;
}

} // namespace detail

// Every real root of charpoly / (T - (l+1)) lies in [-2 sqrt(l), 2 sqrt(l)].
// With g the cofactor, H(t^2) = g(t) g(-t) up to sign, and the roots of H
// above 4l are the squares of the roots of g outside the interval.
inline bool deligne_bound_check(const IntMatrix &a, i64 ell)
{
    IntPolynomial cp = charpoly_adjacency(a);
    if (root_multiplicity(cp, ell + 1) != 1)
        return false;
    const IntPolynomial g = *divide_linear(cp, ell + 1);
    return is_symmetric(a) ? detail::deligne_descartes(g, ell) : detail::deligne_sturm(g, ell);
}

// Sorted set {1 + 2 * sum_{k in W} sizes[k] : W subset}.
inline std::vector<unsigned> admissible_lambdas(const std::vector<unsigned> &sizes)
{
    std::set<unsigned> sums{0};
    for (unsigned s : sizes) {
        std::set<unsigned> next = sums;
        for (unsigned v : sums)
            next.insert(v + s);
        sums = std::move(next);
    }
    std::vector<unsigned> out;
    for (unsigned v : sums)
        out.push_back(1 + 2 * v);
    return out;
}

struct OrbitProfile {
    u64 r = 0;
    std::vector<unsigned> sizes;
    std::string source;
};

inline void check_profile(const OrbitProfile &o)
{
    require(is_prime(o.r) && o.r % 12 == 1, "orbit profile: r must be a prime = 1 (mod 12)");
    unsigned s = 0;
    for (unsigned v : o.sizes) {
        require(v > 0, "orbit profile: orbit sizes must be positive");
        s += v;
    }
    require(s + 1 == o.r / 12, "orbit profile for r = " + std::to_string(o.r) + ": sizes must sum to floor(r/12) - 1");
}

inline std::optional<OrbitProfile> shipped_profile(u64 r)
{
    for (const auto &row : table1_rows())
        if (row.r == r)
            return OrbitProfile{row.r, row.sizes, "table1"};
    return std::nullopt;
}

// Rows whose printed odd values differ from the ones derived from the sizes.
inline std::vector<u64> table1_transcription_mismatches()
{
    std::vector<u64> bad;
    for (const auto &row : table1_rows())
        if (admissible_lambdas(row.sizes) != row.printed)
            bad.push_back(row.r);
    return bad;
}

// a_l(f_1), a_l(f_2) for the two rational newforms of level 37.
inline const std::map<unsigned, std::vector<i64>> &newform_coefficients_37()
{
    static const std::map<unsigned, std::vector<i64>> t = {
        {2, {-2, 0}}, {3, {-3, 1}}, {5, {-2, 0}}, {7, {-1, -1}}, {11, {-5, 3}},
    };
    return t;
}

// Non-Eisenstein eigenvalues of A(SI(37, l)) are the newform coefficients.
inline bool newform_crosscheck(const IntMatrix &a37, unsigned ell)
{
    const auto &t = newform_coefficients_37();
    auto it = t.find(ell);
    require(it != t.end(), "no level-37 newform coefficients for ell = " + std::to_string(ell));
    std::vector<i64> roots = it->second;
    roots.push_back(static_cast<i64>(ell) + 1);
    return charpoly_adjacency(a37) == poly_from_roots(roots);
}

} // namespace ssig::spectra

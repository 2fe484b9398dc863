#pragma once

// Brandt matrices of the quaternion algebra ramified at r and infinity, from
// left ideal classes of a maximal order and representation numbers of their
// norm forms.  For r = 1 mod 12 every right order has unit group {+-1}, so
// B(n)_{ij} = #{y in conj(I_i) I_j : N(y) = n N(I_i) N(I_j)} / 2.

#include "linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace ssig::brandt {

using QElt = std::array<rational, 4>;   // x0 + x1 i + x2 j + x3 k
using Vec4 = std::array<bigint, 4>;     // coordinates in the order basis
using Lattice = std::array<Vec4, 4>;    // HNF rows, upper triangular

// (a, b): i^2 = a, j^2 = b, k = ij = -ji.
inline QElt qmul(const QElt &x, const QElt &y, i64 a, i64 b)
{
    return {x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] - a * b * x[3] * y[3],
            x[0] * y[1] + x[1] * y[0] - b * x[2] * y[3] + b * x[3] * y[2],
            x[0] * y[2] + x[2] * y[0] + a * x[1] * y[3] - a * x[3] * y[1],
            x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]};
}

inline rational qnorm(const QElt &x, i64 a, i64 b)
{
    return x[0] * x[0] - a * x[1] * x[1] - b * x[2] * x[2] + a * b * x[3] * x[3];
}

struct MaximalOrder {
    u64 r = 0;
    i64 a = 0, b = 0;
    std::array<QElt, 4> basis;
    // e_s e_t = sum_u mult[s][t][u] e_u
    std::array<std::array<std::array<i64, 4>, 4>, 4> mult{};
    // conj(e_s) = sum_u conj[s][u] e_u
    std::array<std::array<i64, 4>, 4> conj{};
    // N(x) = x^T gram x / 2
    std::array<std::array<i64, 4>, 4> gram{};
};

namespace detail {

inline std::array<std::array<rational, 4>, 4> inverse4(std::array<std::array<rational, 4>, 4> m)
{
    std::array<std::array<rational, 4>, 4> inv{};
    for (int i = 0; i < 4; ++i)
        inv[i][i] = 1;
    for (int c = 0; c < 4; ++c) {
        int p = c;
        while (m[p][c] == 0)
            ++p;
        std::swap(m[p], m[c]);
        std::swap(inv[p], inv[c]);
        rational d = m[c][c];
        for (int k = 0; k < 4; ++k) {
            m[c][k] /= d;
            inv[c][k] /= d;
        }
        for (int rr = 0; rr < 4; ++rr) {
            if (rr == c || m[rr][c] == 0)
                continue;
            rational f = m[rr][c];
            for (int k = 0; k < 4; ++k) {
                m[rr][k] -= f * m[c][k];
                inv[rr][k] -= f * inv[c][k];
            }
        }
    }
    return inv;
}

inline i64 as_int(const rational &q)
{
    ensure(boost::multiprecision::denominator(q) == 1, "order is not closed under multiplication");
    return static_cast<i64>(boost::multiprecision::numerator(q));
}

} // namespace detail

// Maximal order of the definite algebra ramified at r, for r = 1 mod 4:
//   r = 5 mod 8: (-2, -r) with Z<(1+j+k)/2, (i+2j+k)/4, j, k>;
//   r = 1 mod 8: (-r, -q), q = 3 mod 4 prime with (r/q) = -1 and q | c^2 r + 1,
//                with Z<(1+j)/2, (i+k)/2, (j+ck)/q, k>.
inline MaximalOrder maximal_order(u64 r)
{
    require(is_prime(r) && r % 4 == 1, "maximal_order: r must be a prime = 1 mod 4");
    MaximalOrder o;
    o.r = r;
    const rational half(1, 2), quarter(1, 4);
    if (r % 8 == 5) {
        o.a = -2;
        o.b = -static_cast<i64>(r);
        o.basis = {QElt{half, 0, half, half}, QElt{0, quarter, half, quarter}, QElt{0, 0, 1, 0}, QElt{0, 0, 0, 1}};
    }
    else {
        u64 q = 3;
        while (!(is_prime(q) && q % 4 == 3 && powmod(r % q, (q - 1) / 2, q) == q - 1))
            ++q;
        u64 c = 0;
        while ((c * c % q * (r % q) + 1) % q != 0)
            ++c;
        o.a = -static_cast<i64>(r);
        o.b = -static_cast<i64>(q);
        const rational iq(1, static_cast<i64>(q)), cq(static_cast<i64>(c), static_cast<i64>(q));
        o.basis = {QElt{half, 0, half, 0}, QElt{0, half, 0, half}, QElt{0, 0, iq, cq}, QElt{0, 0, 0, 1}};
    }
    std::array<std::array<rational, 4>, 4> bm{};
    for (int s = 0; s < 4; ++s)
        for (int k = 0; k < 4; ++k)
            bm[s][k] = o.basis[s][k];
    const auto binv = detail::inverse4(bm);
    auto coords = [&](const QElt &x) {
        std::array<i64, 4> out{};
        for (int u = 0; u < 4; ++u) {
            rational acc = 0;
            for (int k = 0; k < 4; ++k)
                acc += x[k] * binv[k][u];
            out[u] = detail::as_int(acc);
        }
        return out;
    };
    for (int s = 0; s < 4; ++s) {
        for (int t = 0; t < 4; ++t)
            o.mult[s][t] = coords(qmul(o.basis[s], o.basis[t], o.a, o.b));
        const QElt &e = o.basis[s];
        o.conj[s] = coords(QElt{e[0], -e[1], -e[2], -e[3]});
    }
    for (int s = 0; s < 4; ++s) {
        for (int t = 0; t < 4; ++t) {
            QElt sum;
            for (int k = 0; k < 4; ++k)
                sum[k] = o.basis[s][k] + o.basis[t][k];
            rational v = s == t ? 2 * qnorm(o.basis[s], o.a, o.b)
                                : qnorm(sum, o.a, o.b) - qnorm(o.basis[s], o.a, o.b) - qnorm(o.basis[t], o.a, o.b);
            o.gram[s][t] = detail::as_int(v);
        }
    }
    return o;
}

inline Vec4 omul(const MaximalOrder &o, const Vec4 &x, const Vec4 &y)
{
    Vec4 z{0, 0, 0, 0};
    for (int s = 0; s < 4; ++s) {
        if (x[s] == 0)
            continue;
        for (int t = 0; t < 4; ++t) {
            if (y[t] == 0)
                continue;
            bigint xy = x[s] * y[t];
            for (int u = 0; u < 4; ++u)
                if (o.mult[s][t][u])
                    z[u] += xy * o.mult[s][t][u];
        }
    }
    return z;
}

inline Vec4 oconj(const MaximalOrder &o, const Vec4 &x)
{
    Vec4 z{0, 0, 0, 0};
    for (int s = 0; s < 4; ++s)
        for (int u = 0; u < 4; ++u)
            z[u] += x[s] * o.conj[s][u];
    return z;
}

// Hermite normal form of the lattice spanned by gens (must have rank 4).
inline Lattice hnf(std::vector<Vec4> rows)
{
    std::size_t pivot = 0;
    for (int c = 0; c < 4; ++c) {
        for (;;) {
            std::size_t best = rows.size();
            for (std::size_t i = pivot; i < rows.size(); ++i)
                if (rows[i][c] != 0 && (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c])))
                    best = i;
            ensure(best != rows.size(), "hnf: lattice is not of full rank");
            std::swap(rows[pivot], rows[best]);
            bool done = true;
            for (std::size_t i = pivot + 1; i < rows.size(); ++i) {
                if (rows[i][c] == 0)
                    continue;
                bigint q = rows[i][c] / rows[pivot][c];
                for (int k = c; k < 4; ++k)
                    rows[i][k] -= q * rows[pivot][k];
                if (rows[i][c] != 0)
                    done = false;
            }
            if (done)
                break;
        }
        if (rows[pivot][c] < 0)
            for (int k = c; k < 4; ++k)
                rows[pivot][k] = -rows[pivot][k];
        ++pivot;
    }
    Lattice l;
    for (int i = 0; i < 4; ++i)
        l[i] = rows[i];
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < i; ++j) {
            bigint q = l[j][i] / l[i][i];
            if (mod_floor(l[j][i], l[i][i]) != l[j][i] - q * l[i][i])
                q -= 1;
            for (int k = i; k < 4; ++k)
                l[j][k] -= q * l[i][k];
        }
    }
    return l;
}

inline bigint lattice_index(const Lattice &l) { return l[0][0] * l[1][1] * l[2][2] * l[3][3]; }

// Reduced norm of a left ideal: sqrt([O : I]).
inline bigint ideal_norm(const Lattice &l)
{
    bigint idx = lattice_index(l);
    bigint n = boost::multiprecision::sqrt(idx);
    ensure(n * n == idx, "ideal index is not a square");
    return n;
}

inline Lattice unit_ideal()
{
    Lattice l;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            l[i][k] = i == k ? 1 : 0;
    return l;
}

// conj(I) J.
inline Lattice product_lattice(const MaximalOrder &o, const Lattice &i, const Lattice &j)
{
    std::vector<Vec4> gens;
    for (const auto &x : i) {
        Vec4 cx = oconj(o, x);
        for (const auto &y : j)
            gens.push_back(omul(o, cx, y));
    }
    return hnf(std::move(gens));
}

// Gram matrix of 2N restricted to the lattice, divided by scale.
inline std::array<std::array<i64, 4>, 4> lattice_gram(const MaximalOrder &o, const Lattice &l, const bigint &scale)
{
    std::array<std::array<i64, 4>, 4> g{};
    for (int s = 0; s < 4; ++s) {
        for (int t = 0; t < 4; ++t) {
            bigint acc = 0;
            for (int u = 0; u < 4; ++u)
                for (int v = 0; v < 4; ++v)
                    acc += l[s][u] * o.gram[u][v] * l[t][v];
            ensure(acc % scale == 0, "norm form not divisible by the ideal norm");
            g[s][t] = static_cast<i64>(acc / scale);
        }
    }
    return g;
}

using Gram4 = std::array<std::array<i64, 4>, 4>;

// LLL on a positive definite integral Gram matrix (delta = 0.99).
inline Gram4 lll_gram(Gram4 g)
{
    auto gso = [&](std::array<std::array<double, 4>, 4> &mu, std::array<double, 4> &bstar) {
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < i; ++j) {
                double s = static_cast<double>(g[i][j]);
                for (int k = 0; k < j; ++k)
                    s -= mu[j][k] * mu[i][k] * bstar[k];
                mu[i][j] = s / bstar[j];
            }
            double s = static_cast<double>(g[i][i]);
            for (int k = 0; k < i; ++k)
                s -= mu[i][k] * mu[i][k] * bstar[k];
            bstar[i] = s;
        }
    };
    // b_i <- b_i - q b_j
    auto reduce = [&](int i, int j, i64 q) {
        if (!q)
            return;
        const i64 gij = g[i][j], gjj = g[j][j];
        for (int k = 0; k < 4; ++k) {
            if (k == i)
                continue;
            g[i][k] -= q * g[j][k];
            g[k][i] = g[i][k];
        }
        g[i][i] += q * q * gjj - 2 * q * gij;
    };
    auto swap_rows = [&](int i, int j) {
        std::swap(g[i], g[j]);
        for (int k = 0; k < 4; ++k)
            std::swap(g[k][i], g[k][j]);
    };
    std::array<std::array<double, 4>, 4> mu{};
    std::array<double, 4> bstar{};
    int k = 1;
    int guard = 0;
    while (k < 4 && ++guard < 100000) {
        gso(mu, bstar);
        for (int j = k - 1; j >= 0; --j) {
            i64 q = std::llround(mu[k][j]);
            if (q) {
                reduce(k, j, q);
                gso(mu, bstar);
            }
        }
        if (bstar[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1]) {
            ++k;
        }
        else {
            swap_rows(k, k - 1);
            k = std::max(k - 1, 1);
        }
    }
    return g;
}

// counts[n] for 0 <= n <= nmax: number of +-pairs x != 0 with x^T g x / 2 = n.
inline std::vector<u64> representation_counts(const Gram4 &g0, u64 nmax)
{
    const Gram4 g = lll_gram(g0);
    // Cholesky of g as doubles: x^T g x = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2.
    double q[4][4] = {};
    double a[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            a[i][j] = static_cast<double>(g[i][j]);
    for (int i = 0; i < 4; ++i) {
        q[i][i] = a[i][i];
        for (int j = i + 1; j < 4; ++j)
            q[i][j] = a[i][j] / a[i][i];
        for (int k = i + 1; k < 4; ++k)
            for (int l = k; l < 4; ++l)
                a[k][l] -= a[i][k] * a[i][l] / a[i][i];
    }
    std::vector<u64> counts(nmax + 1, 0);
    const double bound = 2.0 * static_cast<double>(nmax);
    const double eps = 1e-6 * (1.0 + bound);
    i64 x[4];
    // Level 3 outermost.
    auto exact = [&]() {
        __int128 s = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                s += static_cast<__int128>(g[i][j]) * x[i] * x[j];
        return s;
    };
    std::function<void(int, double)> rec = [&](int i, double rem) {
        double c = 0;
        for (int j = i + 1; j < 4; ++j)
            c += q[i][j] * static_cast<double>(x[j]);
        const double w = std::sqrt(std::max(0.0, (rem + eps) / q[i][i]));
        const i64 lo = static_cast<i64>(std::ceil(-c - w)), hi = static_cast<i64>(std::floor(-c + w));
        for (i64 v = lo; v <= hi; ++v) {
            x[i] = v;
            const double t = static_cast<double>(v) + c;
            const double nrem = rem - q[i][i] * t * t;
            if (nrem < -eps)
                continue;
            if (i == 0) {
                __int128 s = exact();
                if (s > 0 && s <= static_cast<__int128>(2 * nmax)) {
                    ensure(s % 2 == 0, "odd value of an even form");
                    ++counts[static_cast<std::size_t>(s / 2)];
                }
            }
            else {
                rec(i - 1, nrem);
            }
        }
        x[i] = 0;
    };
    rec(3, bound);
    for (auto &c : counts) {
        ensure(c % 2 == 0, "vector counts must come in +-pairs");
        c /= 2;
    }
    return counts;
}

class BrandtModule {
public:
    explicit BrandtModule(u64 r) : order_(maximal_order(r))
    {
        require(r % 12 == 1, "Brandt module: r must be 1 mod 12");
        const std::size_t h = static_cast<std::size_t>(r / 12);
        classes_.push_back(unit_ideal());
        norms_.push_back(1);
        for (std::size_t head = 0; head < classes_.size() && classes_.size() < h; ++head) {
            for (const Lattice &j : two_neighbours(classes_[head])) {
                bool fresh = true;
                for (std::size_t c = 0; c < classes_.size() && fresh; ++c)
                    fresh = !equivalent(j, c);
                if (fresh) {
                    classes_.push_back(j);
                    norms_.push_back(ideal_norm(j));
                }
                if (classes_.size() == h)
                    break;
            }
        }
        ensure(classes_.size() == h, "ideal class enumeration did not reach r/12 classes");
    }

    u64 r() const { return order_.r; }
    const MaximalOrder &order() const { return order_; }
    std::size_t class_count() const { return classes_.size(); }
    const std::vector<Lattice> &ideals() const { return classes_; }
    const std::vector<bigint> &norms() const { return norms_; }

    // Representation numbers up to at least nmax for every pair of classes.
    void extend(u64 nmax)
    {
        std::lock_guard lk(mu_);
        extend_locked(nmax);
    }

    IntMatrix matrix(u64 n)
    {
        require(n >= 1, "Brandt matrix index must be positive");
        std::lock_guard lk(mu_);
        extend_locked(n);
        const std::size_t h = classes_.size();
        IntMatrix b(h, std::vector<i64>(h, 0));
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < h; ++j)
                b[i][j] = static_cast<i64>(counts_[i * h + j][n]);
        return b;
    }

private:
    void extend_locked(u64 nmax)
    {
        if (nmax <= nmax_)
            return;
        nmax = std::max(nmax, 2 * nmax_);
        const std::size_t h = classes_.size();
        counts_.assign(h * h, {});
        for (std::size_t i = 0; i < h; ++i) {
            for (std::size_t j = i; j < h; ++j) {
                Lattice p = product_lattice(order_, classes_[i], classes_[j]);
                auto c = representation_counts(lattice_gram(order_, p, norms_[i] * norms_[j]), nmax);
                counts_[i * h + j] = c;
                counts_[j * h + i] = std::move(c);
            }
        }
        nmax_ = nmax;
    }

    std::vector<Lattice> two_neighbours(const Lattice &l) const
    {
        std::vector<Lattice> out;
        const bigint want = lattice_index(l) * 4;
        for (int mask = 1; mask < 16; ++mask) {
            Vec4 beta{0, 0, 0, 0};
            for (int s = 0; s < 4; ++s)
                if (mask >> s & 1)
                    for (int u = 0; u < 4; ++u)
                        beta[u] += l[s][u];
            std::vector<Vec4> gens;
            for (int s = 0; s < 4; ++s) {
                Vec4 e{0, 0, 0, 0};
                e[s] = 1;
                gens.push_back(omul(order_, e, beta));
            }
            for (const auto &v : l)
                gens.push_back(Vec4{2 * v[0], 2 * v[1], 2 * v[2], 2 * v[3]});
            Lattice j = hnf(std::move(gens));
            if (lattice_index(j) == want && std::find(out.begin(), out.end(), j) == out.end())
                out.push_back(j);
        }
        ensure(out.size() == 3, "expected three 2-neighbours");
        return out;
    }

    bool equivalent(const Lattice &j, std::size_t c) const
    {
        const bigint nj = ideal_norm(j);
        Lattice p = product_lattice(order_, classes_[c], j);
        return representation_counts(lattice_gram(order_, p, norms_[c] * nj), 1)[1] > 0;
    }

    MaximalOrder order_;
    std::vector<Lattice> classes_;
    std::vector<bigint> norms_;
    std::mutex mu_;
    u64 nmax_ = 0;
    std::vector<std::vector<u64>> counts_;
};

// Shared module per r.
inline std::shared_ptr<BrandtModule> brandt_module(u64 r)
{
    static std::mutex mu;
    static std::map<u64, std::shared_ptr<BrandtModule>> cache;
    std::lock_guard lk(mu);
    auto &slot = cache[r];
    if (!slot)
        slot = std::make_shared<BrandtModule>(r);
    return slot;
}

} // namespace ssig::brandt

#pragma once

// Truncated power series over Z_p, characteristic elements of Z_p-towers,
// p-adic valuations of spanning-tree counts and the Iwasawa invariants.

#include "graph.hpp"
#include "isogeny_graph.hpp"
#include "spectra.hpp"

namespace ssig::iwasawa {

// Element of Z_p[[T]] modulo (p^M, T^K).
class PadicTruncSeries {
public:
    PadicTruncSeries(u64 p, unsigned M, unsigned K) : p_(p), M_(M), K_(K), mod_(ipow(p, M)), c_(K, 0)
    {
        require(p >= 2 && is_prime(p), "series prime must be prime");
        require(M >= 1 && K >= 1, "series precision must be positive");
    }

    static PadicTruncSeries from_coeffs(u64 p, unsigned M, unsigned K, const std::vector<bigint> &c)
    {
        PadicTruncSeries s(p, M, K);
        for (std::size_t k = 0; k < c.size() && k < K; ++k)
            s.c_[k] = mod_floor(c[k], s.mod_);
        return s;
    }

    static PadicTruncSeries constant(u64 p, unsigned M, unsigned K, const bigint &v)
    {
        return from_coeffs(p, M, K, {v});
    }

    u64 p() const { return p_; }
    unsigned M() const { return M_; }
    unsigned K() const { return K_; }
    const bigint &modulus() const { return mod_; }
    const bigint &coeff(std::size_t k) const { return c_.at(k); }
    const std::vector<bigint> &coeffs() const { return c_; }

    bool is_zero() const
    {
        for (const auto &v : c_)
            if (v != 0)
                return false;
        return true;
    }

    PadicTruncSeries operator+(const PadicTruncSeries &o) const
    {
        check(o);
        PadicTruncSeries s = *this;
        for (unsigned k = 0; k < K_; ++k)
            s.c_[k] = (s.c_[k] + o.c_[k]) % mod_;
        return s;
    }

    PadicTruncSeries operator-(const PadicTruncSeries &o) const
    {
        check(o);
        PadicTruncSeries s = *this;
        for (unsigned k = 0; k < K_; ++k)
            s.c_[k] = mod_floor(s.c_[k] - o.c_[k], mod_);
        return s;
    }

    PadicTruncSeries operator*(const PadicTruncSeries &o) const
    {
        check(o);
        PadicTruncSeries s(p_, M_, K_);
        for (unsigned i = 0; i < K_; ++i) {
            if (c_[i] == 0)
                continue;
            for (unsigned j = 0; i + j < K_; ++j)
                s.c_[i + j] += c_[i] * o.c_[j];
        }
        for (auto &v : s.c_)
            v %= mod_;
        return s;
    }

    PadicTruncSeries operator*(const bigint &a) const
    {
        PadicTruncSeries s = *this;
        for (auto &v : s.c_)
            v = mod_floor(v * a, mod_);
        return s;
    }

    // Inverse of a series with unit constant term.
    PadicTruncSeries inverse() const
    {
        require(c_[0] % p_ != 0, "series inverse needs a unit constant term");
        const bigint u = inverse_mod(c_[0]);
        PadicTruncSeries s(p_, M_, K_);
        s.c_[0] = u;
        for (unsigned k = 1; k < K_; ++k) {
            bigint acc = 0;
            for (unsigned j = 1; j <= k; ++j)
                acc += c_[j] * s.c_[k - j];
            s.c_[k] = mod_floor(-acc * u, mod_);
        }
        return s;
    }

    bigint inverse_mod(const bigint &a) const
    {
        // extended Euclid on bigints
        bigint r0 = mod_, r1 = mod_floor(a, mod_), s0 = 0, s1 = 1;
        while (r1 != 0) {
            bigint q = r0 / r1;
            bigint t = r0 - q * r1;
            r0 = r1;
            r1 = t;
            t = s0 - q * s1;
            s0 = s1;
            s1 = t;
        }
        require(r0 == 1, "not invertible mod p^M");
        return mod_floor(s0, mod_);
    }

    friend bool operator==(const PadicTruncSeries &a, const PadicTruncSeries &b)
    {
        return a.p_ == b.p_ && a.M_ == b.M_ && a.K_ == b.K_ && a.c_ == b.c_;
    }

    std::string to_string() const
    {
        std::string s;
        for (unsigned k = 0; k < K_; ++k) {
            if (c_[k] == 0)
                continue;
            if (!s.empty())
                s += " + ";
            s += c_[k].str();
            if (k == 1)
                s += "*T";
            else if (k > 1)
                s += "*T^" + std::to_string(k);
        }
        if (s.empty())
            s = "0";
        return s + " + O(T^" + std::to_string(K_) + ") (coeffs mod " + std::to_string(p_) + "^" + std::to_string(M_) + ")";
    }

private:
    void check(const PadicTruncSeries &o) const
    {
        ensure(p_ == o.p_ && M_ == o.M_ && K_ == o.K_, "series precision mismatch");
    }

    u64 p_;
    unsigned M_, K_;
    bigint mod_;
    std::vector<bigint> c_;
};

// (1 + T)^a; negative powers through the series inverse of (1 + T)^{|a|}.
inline PadicTruncSeries one_plus_T_pow(i64 a, u64 p, unsigned M, unsigned K)
{
    const u64 n = static_cast<u64>(a < 0 ? -a : a);
    std::vector<bigint> c;
    bigint binom = 1;
    for (u64 k = 0; k <= n && k < K; ++k) {
        c.push_back(binom);
        binom = binom * (n - k) / (k + 1);
    }
    auto s = PadicTruncSeries::from_coeffs(p, M, K, c);
    return a < 0 ? s.inverse() : s;
}

struct MuLambda {
    unsigned mu = 0;
    unsigned lambda = 0;
    friend bool operator==(const MuLambda &, const MuLambda &) = default;
};

inline MuLambda mu_lambda_of(const PadicTruncSeries &f)
{
    unsigned mu = f.M();
    for (const auto &v : f.coeffs())
        if (v != 0)
            mu = std::min(mu, valuation(v, f.p()));
    if (mu >= f.M())
        throw precision_error("series vanishes mod p^" + std::to_string(f.M()) + " up to T^" + std::to_string(f.K()));
    for (unsigned k = 0; k < f.K(); ++k)
        if (f.coeff(k) != 0 && valuation(f.coeff(k), f.p()) == mu)
            return {mu, k};
    ensure(false, "unreachable: minimal valuation not attained");
    return {};
}

namespace detail {

// det of the Laurent-polynomial matrix D - sum_e S^{alpha(e)} as an exact
// polynomial in S, together with the power C of S cleared from the rows.
inline std::pair<std::vector<bigint>, u64> char_det_in_S(const graph::SerreGraph &x, const std::vector<i64> &alpha)
{
    const std::size_t n = x.vertex_count();
    require(alpha.size() == x.edge_count(), "voltage must cover every edge");
    for (std::size_t e = 0; e < x.edge_count(); ++e)
        require(alpha[x.edge(e).bar] == -alpha[e], "integer voltage of bar e must be the negative");
    const auto deg = x.outdegrees();
    std::vector<u64> shift(n, 0), rowdeg(n, 0);
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        const std::size_t u = x.edge(e).o;
        if (alpha[e] < 0)
            shift[u] = std::max<u64>(shift[u], static_cast<u64>(-alpha[e]));
    }
    u64 total = 0, C = 0;
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        const std::size_t u = x.edge(e).o;
        rowdeg[u] = std::max<u64>(rowdeg[u], static_cast<u64>(static_cast<i64>(shift[u]) + alpha[e]));
    }
    for (std::size_t u = 0; u < n; ++u) {
        rowdeg[u] = std::max(rowdeg[u], shift[u]);
        total += rowdeg[u];
        C += shift[u];
    }
    // values at s = 0..total, then Newton interpolation
    std::vector<bigint> vals;
    for (u64 s = 0; s <= total; ++s) {
        BigMatrix m(n, std::vector<bigint>(n, 0));
        for (std::size_t u = 0; u < n; ++u)
            m[u][u] += deg[u] * ipow(s, static_cast<unsigned>(shift[u]));
        for (std::size_t e = 0; e < x.edge_count(); ++e) {
            const std::size_t u = x.edge(e).o;
            m[u][x.edge(e).t] -= ipow(s, static_cast<unsigned>(static_cast<i64>(shift[u]) + alpha[e]));
        }
        vals.push_back(det_bareiss(std::move(m)));
    }
    std::vector<rational> dd(vals.begin(), vals.end());
    const std::size_t N = dd.size();
    for (std::size_t j = 1; j < N; ++j)
        for (std::size_t i = N - 1; i >= j; --i)
            dd[i] = (dd[i] - dd[i - 1]) / static_cast<i64>(j);
    // Newton form -> monomial: P(S) = sum dd[i] prod_{k<i} (S - k)
    std::vector<rational> poly{dd[N - 1]};
    for (std::size_t i = N - 1; i-- > 0;) {
        std::vector<rational> next(poly.size() + 1, 0);
        for (std::size_t k = 0; k < poly.size(); ++k) {
            next[k + 1] += poly[k];
            next[k] -= poly[k] * static_cast<i64>(i);
        }
        next[0] += dd[i];
        poly = std::move(next);
    }
    std::vector<bigint> out;
    for (const auto &q : poly) {
        ensure(boost::multiprecision::denominator(q) == 1, "characteristic determinant is not integral");
        out.push_back(boost::multiprecision::numerator(q));
    }
    while (!out.empty() && out.back() == 0)
        out.pop_back();
    return {out, C};
}

} // namespace detail

// det(D(X) - (sum_{e in E_{u,v}} (1+T)^{alpha(e)})_{u,v}) at precision (p^M, T^K).
inline PadicTruncSeries characteristic_element(const graph::SerreGraph &x, const std::vector<i64> &alpha, u64 p,
                                               unsigned M, unsigned K)
{
    auto [P, C] = detail::char_det_in_S(x, alpha);
    if (P.empty())
        throw precision_error("characteristic element is zero");
    // P(1 + T)
    std::vector<bigint> t(std::min<std::size_t>(P.size(), K), 0);
    for (std::size_t i = 0; i < P.size(); ++i) {
        bigint binom = 1;
        for (std::size_t k = 0; k <= i && k < t.size(); ++k) {
            t[k] += P[i] * binom;
            binom = binom * (i - k) / (k + 1);
        }
    }
    auto s = PadicTruncSeries::from_coeffs(p, M, K, t);
    if (C)
        s = s * one_plus_T_pow(-static_cast<i64>(C), p, M, K);
    if (s.is_zero())
        throw precision_error("characteristic element vanishes at precision p^" + std::to_string(M) + ", T^" +
                              std::to_string(K));
    return s;
}

// l + 1 - a - (a/2) T^2 (1+T)^{-1}.
inline PadicTruncSeries delta_factor(i64 ell, i64 a, u64 p, unsigned M, unsigned K)
{
    require(p != 2, "p = 2 is not supported");
    PadicTruncSeries s = PadicTruncSeries::constant(p, M, K, ell + 1 - a);
    const bigint half_a = mod_floor(bigint(a) * s.inverse_mod(2), s.modulus());
    std::vector<bigint> tail(K, 0);
    for (unsigned k = 2; k < K; ++k)
        tail[k] = k % 2 ? -half_a : half_a;
    return s - PadicTruncSeries::from_coeffs(p, M, K, tail);
}

// sum_k c_k (2(l+1))^k u^{n-k} with u = 2 + T^2 (1+T)^{-1} and c_k the
// coefficients of the characteristic polynomial of A(SI(r, l)).
inline PadicTruncSeries charpoly_identity_series(const spectra::IntPolynomial &cp, i64 ell, u64 p, unsigned M,
                                                 unsigned K)
{
    const int n = cp.degree();
    std::vector<bigint> uc(K, 0);
    uc[0] = 2;
    for (unsigned k = 2; k < K; ++k)
        uc[k] = k % 2 ? -1 : 1;
    const auto u = PadicTruncSeries::from_coeffs(p, M, K, uc);
    std::vector<PadicTruncSeries> upow{PadicTruncSeries::constant(p, M, K, 1)};
    for (int k = 1; k <= n; ++k)
        upow.push_back(upow.back() * u);
    PadicTruncSeries acc(p, M, K);
    bigint c = 1;
    for (int k = 0; k <= n; ++k) {
        acc = acc + upow[static_cast<std::size_t>(n - k)] * (cp.c[static_cast<std::size_t>(k)] * c);
        c *= 2 * (ell + 1);
    }
    return acc;
}

// 2^{n} prod_i delta_factor(l, a_i).
inline PadicTruncSeries delta_product(const std::vector<i64> &eigenvalues, i64 ell, u64 p, unsigned M, unsigned K)
{
    PadicTruncSeries acc = PadicTruncSeries::constant(p, M, K, 1);
    for (i64 a : eigenvalues)
        acc = acc * delta_factor(ell, a, p, M, K) * bigint(2);
    return acc;
}

// 2 * multiplicity of l+1 as a root of the characteristic polynomial mod p.
inline unsigned lambda_from_charpoly(const std::vector<u64> &charpoly_mod_p, i64 ell, u64 p)
{
    require(p != 2 && is_prime(p), "p must be an odd prime");
    require((ell + 1) % static_cast<i64>(p) != 0,
            "hypothesis l + 1 != 0 (mod p) of the lambda formula fails for l = " + std::to_string(ell) +
                ", p = " + std::to_string(p));
    return 2 * spectra::multiplicity_mod_p(charpoly_mod_p, ell + 1, p);
}

namespace detail {

template <class Int> struct ModOps;

template <> struct ModOps<u64> {
    static u64 mul(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m); }
};

template <> struct ModOps<bigint> {
    static bigint mul(const bigint &a, const bigint &b, const bigint &m) { return a * b % m; }
};

template <class Int> Int inv_unit(const Int &a, const Int &m)
{
    bigint r0 = bigint(m), r1 = bigint(a), s0 = 0, s1 = 1;
    while (r1 != 0) {
        bigint q = r0 / r1, t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    ensure(r0 == 1, "pivot is not a unit");
    return static_cast<Int>(mod_floor(s0, bigint(m)));
}

// ord_p det(a) if it is below B; nullopt otherwise.
template <class Int> std::optional<unsigned> det_valuation_mod(const IntMatrix &a, u64 p, unsigned B)
{
    const std::size_t n = a.size();
    const Int P = static_cast<Int>(p);
    Int mod = 1;
    for (unsigned i = 0; i < B; ++i)
        mod = mod * P;
    std::vector<std::vector<Int>> m(n, std::vector<Int>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m[i][j] = static_cast<Int>(mod_floor(bigint(a[i][j]), bigint(mod)));
    auto val = [&](Int x) {
        unsigned v = 0;
        while (x % P == 0) {
            x /= P;
            ++v;
        }
        return v;
    };
    unsigned total = 0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pi = n, pj = n;
        unsigned best = B;
        for (std::size_t i = k; i < n && best; ++i)
            for (std::size_t j = k; j < n && best; ++j)
                if (m[i][j] != 0) {
                    unsigned v = val(m[i][j]);
                    if (v < best) {
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
        if (pi == n)
            return std::nullopt;
        std::swap(m[pi], m[k]);
        if (pj != k)
            for (auto &row : m)
                std::swap(row[pj], row[k]);
        total += best;
        if (total >= B)
            return std::nullopt;
        Int pv = 1;
        for (unsigned i = 0; i < best; ++i)
            pv = pv * P;
        const Int uinv = inv_unit<Int>(m[k][k] / pv, mod);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m[i][k] == 0)
                continue;
            const Int f = ModOps<Int>::mul(m[i][k] / pv, uinv, mod);
            for (std::size_t j = k; j < n; ++j)
                m[i][j] = (m[i][j] + mod - ModOps<Int>::mul(f, m[k][j], mod)) % mod;
        }
    }
    return total;
}

} // namespace detail

struct ValuationOptions {
    unsigned initial_B = 16;
    unsigned max_B = 4096;
};

// ord_p det(a) by elimination mod p^B with minimal-valuation pivots, doubling B.
inline unsigned det_valuation(const IntMatrix &a, u64 p, const ValuationOptions &opt = {})
{
    for (unsigned B = opt.initial_B; B <= opt.max_B; B *= 2) {
        const double bits = static_cast<double>(B) * std::log2(static_cast<double>(p));
        std::optional<unsigned> v =
            bits < 62 ? detail::det_valuation_mod<u64>(a, p, B) : detail::det_valuation_mod<bigint>(a, p, B);
        if (v)
            return *v;
    }
    throw precision_error("determinant valuation exceeds p^" + std::to_string(opt.max_B));
}

inline unsigned ordp_complexity(const graph::SerreGraph &x, u64 p, const ValuationOptions &opt = {})
{
    require(x.vertex_count() > 0 && x.connected(), "graph is disconnected, so its complexity is 0");
    return det_valuation(graph::reduced_laplacian(x), p, opt);
}

struct LayerValuation {
    unsigned n = 0;
    unsigned ord = 0;
};

// ord_p kappa(X_n) for n = n_min..n_max, X_n the derived graph over Z/p^n.
inline std::vector<LayerValuation> ordp_complexity_sequence(const graph::SerreGraph &x, const std::vector<i64> &alpha,
                                                            u64 p, unsigned n_max, unsigned n_min = 1,
                                                            const ValuationOptions &opt = {})
{
    require(p >= 3 && is_prime(p), "p must be an odd prime");
    std::vector<LayerValuation> out;
    for (unsigned n = n_min; n <= n_max; ++n) {
        const auto g = graph::FiniteAbelianGroup::cyclic(static_cast<i64>(ipow(p, n)));
        auto [xn, cover] = graph::derived_graph(x, graph::reduce_integer_voltage(alpha, g), g);
        require(xn.connected(), "layer n = " + std::to_string(n) + " is disconnected, so its complexity is 0");
        out.push_back({n, ordp_complexity(xn, p, opt)});
    }
    return out;
}

struct IwasawaInvariants {
    i64 mu = 0;
    i64 lambda = 0;
    i64 nu = 0;
    unsigned n_stable = 0;
    // The formula is confirmed by at least one layer before the three fitted ones.
    bool nu_stable = false;
};

// mu p^n + lambda n + nu through the last three layers, checked backwards.
inline IwasawaInvariants fit_iwasawa(const std::vector<LayerValuation> &seq, u64 p)
{
    require(seq.size() >= 3, "fit needs at least three layers");
    for (std::size_t i = 1; i < seq.size(); ++i)
        require(seq[i].n == seq[i - 1].n + 1, "layers must be consecutive");
    const std::size_t L = seq.size() - 1;
    const unsigned N = seq[L].n;
    const bigint eN = seq[L].ord, e1 = seq[L - 1].ord, e2 = seq[L - 2].ord;
    auto describe = [&] {
        std::string s;
        for (const auto &v : seq)
            s += (s.empty() ? "" : ",") + std::to_string(v.ord);
        return "no Iwasawa fit for ord_p kappa = [" + s + "] starting at n = " + std::to_string(seq[0].n);
    };
    if (N < 2)
        throw input_error(describe());
    const bigint second = eN - 2 * e1 + e2;
    const bigint den = ipow(p, N - 2) * (p - 1) * (p - 1);
    if (second % den != 0)
        throw input_error(describe());
    const bigint mu = second / den;
    const bigint lambda = (eN - e1) - mu * (ipow(p, N) - ipow(p, N - 1));
    const bigint nu = eN - mu * ipow(p, N) - lambda * N;
    if (mu < 0 || lambda < 0)
        throw input_error(describe());
    IwasawaInvariants inv;
    inv.mu = static_cast<i64>(mu);
    inv.lambda = static_cast<i64>(lambda);
    inv.nu = static_cast<i64>(nu);
    std::size_t first = L - 2;
    while (first > 0) {
        const auto &s = seq[first - 1];
        if (mu * ipow(p, s.n) + lambda * s.n + nu != s.ord)
            break;
        --first;
    }
    inv.n_stable = seq[first].n;
    inv.nu_stable = first + 3 <= L;
    return inv;
}

struct Precision {
    unsigned M = 16;
    unsigned K = 0; // 0: 2(h+1) + 2
    unsigned max_M = 256;
    unsigned max_K = 1024;
};

struct InvariantOptions {
    sig::BuildOptions build;
    Precision precision;
    bool series_route = true;
    bool charpoly_route = true;
    unsigned n_max = 0; // tower layers 0..n_max; 0 skips the tower route
    ValuationOptions valuation;
};

struct RouteResult {
    bool ran = false;
    unsigned lambda_delta = 0;
    unsigned mu = 0;
};

struct InvariantsReport {
    u64 r = 0, p = 0;
    unsigned ell = 0;
    std::size_t vertices = 0;
    RouteResult series, charpoly;
    std::optional<PadicTruncSeries> delta;
    bool factorization_identity = false;
    std::vector<LayerValuation> tower;
    std::optional<IwasawaInvariants> fit;
    std::string fit_error;
    unsigned lambda_delta = 0;
    unsigned mu = 0;
    i64 lambda_ell = 0;
    bool routes_agree = true;
};

inline void require_hypotheses(u64 r, unsigned ell, u64 p)
{
    require(is_prime(p), "p = " + std::to_string(p) + " is not prime");
    require(p != 2, "p = 2 is not supported; p must be odd");
    require(p != r, "p must differ from r");
    require(is_prime(ell) && ell != r, "ell must be a prime different from r");
    require((ell + 1) % p != 0, "hypothesis l + 1 != 0 (mod p) fails for l = " + std::to_string(ell) +
                                    ", p = " + std::to_string(p));
}

// Series route with automatic precision doubling.
inline PadicTruncSeries certified_delta(const graph::SerreGraph &x, const std::vector<i64> &alpha, u64 p, Precision pr,
                                        MuLambda &ml)
{
    for (;;) {
        try {
            auto d = characteristic_element(x, alpha, p, pr.M, pr.K);
            ml = mu_lambda_of(d);
            return d;
        }
        catch (const precision_error &) {
            if (pr.M >= pr.max_M && pr.K >= pr.max_K)
                throw;
            pr.M = std::min(pr.max_M, 2 * pr.M);
            pr.K = std::min(pr.max_K, 2 * pr.K);
        }
    }
}

// lambda_l of the constant Z_p-tower over X^{(r,l)}, by the series,
// characteristic polynomial and tower routes.
inline InvariantsReport invariants_from_sig(const sig::IsogenyDigraph &g, u64 p, const InvariantOptions &opt)
{
    require_hypotheses(g.r, g.ell, p);
    InvariantsReport rep;
    rep.r = g.r;
    rep.p = p;
    rep.ell = g.ell;
    rep.vertices = g.size();
    const i64 ell = g.ell;
    const auto x = sig::build_dsig(g);
    const auto alpha = graph::constant_voltage(x, 1);
    Precision pr = opt.precision;
    if (pr.K == 0)
        pr.K = 2 * static_cast<unsigned>(g.size()) + 2;

    if (opt.charpoly_route) {
        const auto cpm = spectra::charpoly_mod_p(g.adjacency, p);
        rep.charpoly.ran = true;
        rep.charpoly.lambda_delta = lambda_from_charpoly(cpm, ell, p);
        // Delta mod p from the characteristic polynomial.
        spectra::IntPolynomial cp1;
        for (u64 v : cpm)
            cp1.c.push_back(v);
        auto d1 = charpoly_identity_series(cp1, ell, p, 1, std::max(pr.K, rep.charpoly.lambda_delta + 1));
        if (d1.is_zero()) {
            rep.charpoly.mu = 1;
        }
        else {
            rep.charpoly.mu = 0;
            ensure(mu_lambda_of(d1).lambda == rep.charpoly.lambda_delta,
                   "charpoly multiplicity and reduced characteristic element disagree");
        }
    }
    if (opt.series_route) {
        MuLambda ml;
        auto d = certified_delta(x, alpha, p, pr, ml);
        rep.series = {true, ml.lambda, ml.mu};
        const auto cp = spectra::charpoly_adjacency(g.adjacency);
        rep.factorization_identity = charpoly_identity_series(cp, ell, p, d.M(), d.K()) == d;
        ensure(rep.factorization_identity, "characteristic element differs from the charpoly identity");
        rep.delta = std::move(d);
    }
    if (opt.n_max >= 2) {
        rep.tower = ordp_complexity_sequence(x, alpha, p, opt.n_max, 0, opt.valuation);
        try {
            rep.fit = fit_iwasawa(rep.tower, p);
        }
        catch (const input_error &e) {
            rep.fit_error = e.what();
        }
    }

    const RouteResult &primary = rep.series.ran ? rep.series : rep.charpoly;
    ensure(primary.ran, "no route selected");
    rep.lambda_delta = primary.lambda_delta;
    rep.mu = primary.mu;
    rep.lambda_ell = static_cast<i64>(rep.lambda_delta) - 1;
    if (rep.series.ran && rep.charpoly.ran)
        rep.routes_agree = rep.series.lambda_delta == rep.charpoly.lambda_delta && rep.series.mu == rep.charpoly.mu;
    if (rep.fit)
        rep.routes_agree = rep.routes_agree && rep.fit->lambda == rep.lambda_ell && rep.fit->mu == rep.mu;
    return rep;
}

inline InvariantsReport lambda_invariant(u64 r, unsigned ell, u64 p, const InvariantOptions &opt = {})
{
    require_hypotheses(r, ell, p);
    return invariants_from_sig(sig::build_sig(r, ell, opt.build), p, opt);
}

} // namespace ssig::iwasawa

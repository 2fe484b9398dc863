#pragma once

// Short Weierstrass curves y^2 = x^3 + ax + b, torsion subgroups and Velu quotients.

#include "finite_field.hpp"

#include <functional>
#include <numeric>

namespace ssig::ec {

using ff::Element;
using ff::FieldPtr;
using ff::Poly;

struct Point {
    bool infinity = true;
    Element x, y;

    static Point at_infinity() { return {}; }
    static Point affine(Element x, Element y) { return {false, std::move(x), std::move(y)}; }

    friend bool operator==(const Point &p, const Point &q)
    {
        if (p.infinity || q.infinity)
            return p.infinity == q.infinity;
        return p.x == q.x && p.y == q.y;
    }
};

class Curve {
public:
    Curve(Element a, Element b) : a_(std::move(a)), b_(std::move(b))
    {
        if (a_.field() != b_.field())
            throw std::invalid_argument("Curve: coefficients from different fields");
        if (discriminant().is_zero())
            throw input_error("Curve: singular (4a^3 + 27b^2 = 0)");
    }

    const FieldPtr &field() const { return a_.field(); }
    const Element &a() const { return a_; }
    const Element &b() const { return b_; }

    Element discriminant() const { return a_ * a_ * a_ * 4 + b_ * b_ * 27; }

    Element rhs(const Element &x) const { return (x * x + a_) * x + b_; }

    Poly rhs_poly() const { return Poly(field(), {b_, a_, Element(field(), 0), Element(field(), 1)}); }

    bool contains(const Point &p) const
    {
        if (p.infinity)
            return true;
        return p.x.field() == field() && p.y * p.y == rhs(p.x);
    }

    Point neg(const Point &p) const
    {
        if (p.infinity)
            return p;
        return Point::affine(p.x, -p.y);
    }

    Point add(const Point &p, const Point &q) const
    {
        if (p.infinity)
            return q;
        if (q.infinity)
            return p;
        Element lam;
        if (p.x == q.x) {
            if ((p.y + q.y).is_zero())
                return Point::at_infinity();
            lam = (p.x * p.x * 3 + a_) / (p.y * 2);
        }
        else {
            lam = (q.y - p.y) / (q.x - p.x);
        }
        Element x3 = lam * lam - p.x - q.x;
        Element y3 = lam * (p.x - x3) - p.y;
        return Point::affine(x3, y3);
    }

    Point mul(bigint k, Point p) const
    {
        if (k < 0) {
            k = -k;
            p = neg(p);
        }
        Point acc = Point::at_infinity();
        while (k > 0) {
            if (k & 1)
                acc = add(acc, p);
            p = add(p, p);
            k >>= 1;
        }
        return acc;
    }

    Curve base_change(const ff::Embedding &e) const { return {e(a_), e(b_)}; }

    std::string to_string() const
    {
        return "y^2 = x^3 + (" + a_.to_string() + ")*x + (" + b_.to_string() + ")";
    }

    friend bool operator==(const Curve &c, const Curve &d) { return c.a_ == d.a_ && c.b_ == d.b_; }

private:
    Element a_, b_;
};

// j = 1728 * 4a^3 / (4a^3 + 27b^2).
inline Element j_invariant(const Curve &e)
{
    const Element a3 = e.a() * e.a() * e.a() * 4;
    return a3 * 1728 / (a3 + e.b() * e.b() * 27);
}

// A curve with the given j-invariant: (0, 1) for j = 0, (1, 0) for j = 1728,
// otherwise a = b = 27j / (4(1728 - j)).
inline Curve curve_from_j(const Element &j)
{
    const FieldPtr &f = j.field();
    if (j.is_zero())
        return {Element(f, 0), Element(f, 1)};
    if (j == Element(f, 1728))
        return {Element(f, 1), Element(f, 0)};
    Element k = j * 27 / ((Element(f, 1728) - j) * 4);
    return {k, k};
}

// Coefficient of x^{r-1} in (x^3 + ax + b)^{(r-1)/2}.
inline Element hasse_invariant(const Curve &e)
{
    const FieldPtr &f = e.field();
    const u64 r = f->characteristic();
    const u64 m = (r - 1) / 2;
    std::vector<u64> fact(m + 1, 1);
    for (u64 i = 1; i <= m; ++i)
        fact[i] = mulmod(fact[i - 1], i, r);
    Element sum(f);
    // Terms x^{3i} (ax)^j b^k with i + j + k = m and 3i + j = r - 1.
    for (u64 i = 0; 3 * i <= r - 1; ++i) {
        const u64 j = r - 1 - 3 * i;
        if (i + j > m)
            continue;
        const u64 k = m - i - j;
        u64 c = mulmod(fact[m], invmod(mulmod(mulmod(fact[i], fact[j], r), fact[k], r), r), r);
        sum += e.a().pow(j) * e.b().pow(k) * static_cast<i64>(c);
    }
    return sum;
}

// Hasse-invariant test; valid for curves over any F_{r^d}.
inline bool is_supersingular(const Curve &e) { return hasse_invariant(e).is_zero(); }

// #E(F_q) by direct summation of the quadratic character; q <= 4e6.
inline u64 count_points(const Curve &e)
{
    const FieldPtr &f = e.field();
    const bigint qq = f->order();
    require(qq <= 4'000'000, "count_points: field too large for naive counting");
    const u64 q = static_cast<u64>(qq), r = f->characteristic();
    const unsigned d = f->degree();
    auto index = [&](const u64 *c) {
        u64 v = 0;
        for (unsigned i = d; i-- > 0;)
            v = v * r + c[i];
        return v;
    };
    std::vector<char> square(q, 0);
    std::vector<u64> z(d, 0), t(d);
    for (u64 i = 0; i < q; ++i) {
        f->mul(z.data(), z.data(), t.data());
        square[index(t.data())] = 1;
        for (unsigned k = 0; k < d && ++z[k] == r; ++k)
            z[k] = 0;
    }
    std::fill(z.begin(), z.end(), 0);
    u64 count = 1;
    for (u64 i = 0; i < q; ++i) {
        f->mul(z.data(), z.data(), t.data());
        f->add(t.data(), e.a().data(), t.data());
        f->mul(t.data(), z.data(), t.data());
        f->add(t.data(), e.b().data(), t.data());
        if (f->is_zero(t.data()))
            count += 1;
        else if (square[index(t.data())])
            count += 2;
        for (unsigned k = 0; k < d && ++z[k] == r; ++k)
            z[k] = 0;
    }
    return count;
}

// Second supersingularity route: trace of Frobenius divisible by r.
inline bool is_supersingular_by_count(const Curve &e)
{
    const bigint q = e.field()->order();
    const bigint t = q + 1 - count_points(e);
    return t % e.field()->characteristic() == 0;
}

// n-th division polynomial with y^2 replaced by x^3 + ax + b: psi_n for odd n,
// psi_n / y for even n.
inline Poly division_polynomial(const Curve &e, unsigned n)
{
    const FieldPtr &f = e.field();
    const Element &a = e.a(), &b = e.b();
    const Poly F = e.rhs_poly(), F2 = F * F;
    std::map<unsigned, Poly> memo;
    memo[0] = Poly(f);
    memo[1] = Poly::from_ints(f, {1});
    memo[2] = Poly::from_ints(f, {2});
    Element z(f, 0), one(f, 1);
    memo[3] = Poly(f, {-(a * a), b * 12, a * 6, z, Element(f, 3)});
    memo[4] = Poly(f, {-(b * b * 8) - a * a * a, -(a * b * 4), -(a * a * 5), b * 20, a * 5, z, one}) *
              Element(f, 4);
    const Element half = Element(f, 2).inverse();
    std::function<Poly(unsigned)> get = [&](unsigned k) -> Poly {
        auto it = memo.find(k);
        if (it != memo.end())
            return it->second;
        Poly out;
        const unsigned m = k / 2;
        if (k & 1) {
            if (m % 2 == 0) {
                Poly fm = get(m), fm1 = get(m + 1);
                out = F2 * get(m + 2) * fm * fm * fm - get(m - 1) * fm1 * fm1 * fm1;
            }
            else {
                Poly fm = get(m), fm1 = get(m + 1);
                out = get(m + 2) * fm * fm * fm - F2 * get(m - 1) * fm1 * fm1 * fm1;
            }
        }
        else {
            Poly fm1 = get(m - 1), fp1 = get(m + 1);
            out = get(m) * (get(m + 2) * fm1 * fm1 - get(m - 2) * fp1 * fp1) * half;
        }
        memo[k] = out;
        return out;
    };
    return get(n);
}

struct TorsionCaps {
    unsigned max_ell = 50;
    unsigned max_extension_degree = 24;
};

struct KernelSubgroup {
    unsigned ell = 0;
    // Monic; roots are the x-coordinates of the nonzero kernel points.
    Poly kernel_poly;
    // Base change of the domain curve to the field of definition of the generator.
    std::optional<Curve> generator_curve;
    std::optional<Point> generator;
};

// Order of r in (Z/ell)^* / {+-1}.
inline unsigned torsion_x_degree(u64 r, unsigned ell)
{
    u64 x = r % ell;
    unsigned k = 1;
    while (x != 1 && x != ell - 1) {
        x = x * (r % ell) % ell;
        ++k;
    }
    return k;
}

namespace detail {

// Working field F_{r^2} and the curve over it.
inline Curve over_quadratic(const Curve &e)
{
    const FieldPtr &f = e.field();
    require(f->degree() <= 2, "curve must be defined over F_r or F_{r^2}");
    if (f->degree() == 2)
        return e;
    return e.base_change(ff::embedding(f, ff::make_field(f->characteristic(), 2)));
}

inline Point lift_generator(const Curve &eK, const Poly &factor, const TorsionCaps &caps, u64 seed,
                            Curve &out_curve)
{
    const FieldPtr &K = eK.field();
    const u64 r = K->characteristic();
    const unsigned D = 2 * static_cast<unsigned>(factor.degree());
    for (unsigned deg : {D, 2 * D}) {
        if (deg > caps.max_extension_degree)
            break;
        auto L = ff::make_field(r, deg);
        auto emb = ff::embedding(K, L);
        Curve eL = eK.base_change(emb);
        ff::RootOptions opt;
        opt.seed = seed;
        auto roots = ff::poly_roots(emb(factor), L, opt);
        ensure(!roots.empty(), "lift_generator: factor has no root in its splitting field");
        auto y = ff::sqrt_element(eL.rhs(roots.front()));
        if (y) {
            out_curve = eL;
            return Point::affine(roots.front(), *y);
        }
    }
    throw input_error("torsion point needs an extension beyond degree " +
                      std::to_string(caps.max_extension_degree));
}

} // namespace detail

// The ell+1 subgroups of order ell.  Requires every subgroup to be defined over
// F_{r^2}, which holds for supersingular curves.  Kernel polynomials live over F_{r^2}.
inline std::vector<KernelSubgroup> order_ell_subgroups(const Curve &e, unsigned ell, const TorsionCaps &caps = {},
                                                       bool with_generators = true, u64 seed = 0x5eed5eedULL)
{
    const u64 r = e.field()->characteristic();
    require(is_prime(ell), "ell must be prime");
    require(ell != r, "ell must differ from the characteristic");
    require(ell <= caps.max_ell, "ell = " + std::to_string(ell) + " exceeds torsion cap " + std::to_string(caps.max_ell));
    const Curve eK = detail::over_quadratic(e);
    const FieldPtr &K = eK.field();
    std::vector<KernelSubgroup> out;

    if (ell == 2) {
        auto roots = ff::poly_roots(eK.rhs_poly(), K);
        if (roots.size() != 3)
            throw input_error("2-torsion not rational over F_{r^2}; curve is not supersingular");
        for (const auto &x0 : roots) {
            KernelSubgroup ks;
            ks.ell = 2;
            ks.kernel_poly = Poly(K, {-x0, Element(K, 1)});
            if (with_generators) {
                ks.generator_curve = eK;
                ks.generator = Point::affine(x0, Element(K, 0));
            }
            out.push_back(std::move(ks));
        }
        return out;
    }

    const unsigned d0 = torsion_x_degree(r, ell);
    require(2 * d0 <= caps.max_extension_degree,
            "ell-torsion x-coordinates need degree " + std::to_string(2 * d0) + " > cap " +
                std::to_string(caps.max_extension_degree));
    const Poly psi = division_polynomial(eK, ell).monic();
    const auto ddf = ff::distinct_degree_factors(psi);
    if (ddf.size() != 1 || ddf.front().first != d0)
        throw input_error("division polynomial does not split into equal-degree factors; curve is not supersingular");
    std::mt19937_64 rng(seed);
    const auto factors = ff::equal_degree_factors(psi, d0, rng);
    const unsigned half = (ell - 1) / 2;
    const Element &a = eK.a(), &b = eK.b();

    std::vector<bool> used(factors.size(), false);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (used[i])
            continue;
        const Poly &g = factors[i];
        // x([k]P) in K[x]/(g), where P has x-coordinate x mod g.
        auto cst = [&](const Element &c) { return Poly::constant(c); };
        auto inv = [&](const Poly &p) { return ff::inverse_mod(p, g); };
        const Poly X1 = Poly::x(K) % g;
        std::vector<Poly> X{Poly(K), X1};
        if (half >= 2) {
            Poly x2 = ff::mulmod(X1, X1, g) - cst(a);
            Poly num = ff::mulmod(x2, x2, g) - ff::mulmod(cst(b * 8), X1, g);
            Poly den = (eK.rhs_poly() % g) * Element(K, 4);
            X.push_back(ff::mulmod(num, inv(den), g));
        }
        for (unsigned k = 2; k < half; ++k) {
            const Poly &xk = X[k];
            Poly s = xk + X1, p = ff::mulmod(xk, X1, g) + cst(a);
            Poly num = (ff::mulmod(s, p, g) + cst(b * 2)) * Element(K, 2);
            Poly dif = xk - X1;
            Poly next = ff::mulmod(num, inv(ff::mulmod(dif, dif, g)), g) - X[k - 1];
            X.push_back(next);
        }
        // prod (T - X_k) with coefficients in K[x]/(g); must land in K.
        std::vector<Poly> h{Poly::from_ints(K, {1})};
        for (unsigned k = 1; k <= half; ++k) {
            std::vector<Poly> nh(h.size() + 1, Poly(K));
            for (std::size_t t = 0; t < h.size(); ++t) {
                nh[t + 1] = nh[t + 1] + h[t];
                nh[t] = nh[t] - ff::mulmod(h[t], X[k], g);
            }
            h = std::move(nh);
        }
        std::vector<Element> hc;
        for (const auto &c : h) {
            ensure(c.degree() <= 0, "kernel polynomial not defined over F_{r^2}");
            hc.push_back(c.is_zero() ? Element(K, 0) : c.coeff(0));
        }
        KernelSubgroup ks;
        ks.ell = ell;
        ks.kernel_poly = Poly(K, hc);
        unsigned covered = 0;
        for (std::size_t j = i; j < factors.size(); ++j) {
            if (!used[j] && (ks.kernel_poly % factors[j]).is_zero()) {
                used[j] = true;
                covered += d0;
            }
        }
        ensure(covered == half, "kernel polynomial is not a product of torsion factors");
        if (with_generators) {
            Curve gc = eK;
            ks.generator = detail::lift_generator(eK, g, caps, seed, gc);
            ks.generator_curve = gc;
        }
        out.push_back(std::move(ks));
    }
    ensure(out.size() == ell + 1, "expected ell+1 subgroups of order ell");
    std::sort(out.begin(), out.end(),
              [](const KernelSubgroup &p, const KernelSubgroup &q) { return p.kernel_poly < q.kernel_poly; });
    return out;
}

// Codomain of the separable isogeny with the given kernel, from power sums of
// the kernel x-coordinates.
inline Curve velu_codomain(const Curve &e, const KernelSubgroup &k)
{
    const Curve eK = detail::over_quadratic(e);
    const FieldPtr &K = eK.field();
    const Element &a = eK.a(), &b = eK.b();
    require(k.kernel_poly.field() == K, "kernel polynomial must be over F_{r^2}");
    const Poly h = k.kernel_poly.monic();
    const int m = h.degree();
    if (k.ell == 2) {
        require(m == 1, "2-kernel polynomial must be linear");
        Element x0 = -h.coeff(0);
        Element t = x0 * x0 * 3 + a;
        Element w = x0 * t;
        return {a - t * 5, b - w * 7};
    }
    require(m == static_cast<int>((k.ell - 1) / 2), "kernel polynomial has wrong degree");
    auto sigma = [&](int i) {
        Element c = i <= m ? h.coeff(static_cast<std::size_t>(m - i)) : Element(K, 0);
        return i % 2 ? -c : c;
    };
    const Element s1 = sigma(1), s2 = sigma(2), s3 = sigma(3);
    const Element p1 = s1, p2 = s1 * s1 - s2 * 2, p3 = s1 * s1 * s1 - s1 * s2 * 3 + s3 * 3;
    const Element dm(K, m);
    Element t = p2 * 6 + a * dm * 2;
    Element w = p3 * 10 + a * p1 * 6 + b * dm * 4;
    return {a - t * 5, b - w * 7};
}

} // namespace ssig::ec

#pragma once

// Arithmetic in F_r and F_{r^d} = F_r[w]/(m(w)), polynomials over them,
// and root finding.

#include "common.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>

namespace ssig::ff {

namespace detail {

// Dense polynomials over F_r, lowest degree first, no trailing zeros.
using fp_poly = std::vector<u64>;

inline void trim(fp_poly &a)
{
    while (!a.empty() && a.back() == 0)
        a.pop_back();
}

inline fp_poly fp_mod(fp_poly a, const fp_poly &m, u64 r)
{
    const std::size_t dm = m.size() - 1;
    const u64 li = invmod(m.back(), r);
    while (a.size() > dm) {
        u64 c = mulmod(a.back(), li, r);
        std::size_t s = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i)
            a[s + i] = (a[s + i] + r - mulmod(c, m[i], r)) % r;
        trim(a);
    }
    return a;
}

inline fp_poly fp_mulmod(const fp_poly &a, const fp_poly &b, const fp_poly &m, u64 r)
{
    if (a.empty() || b.empty())
        return {};
    fp_poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + mulmod(a[i], b[j], r)) % r;
    trim(c);
    return fp_mod(std::move(c), m, r);
}

inline fp_poly fp_gcd(fp_poly a, fp_poly b, u64 r)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        a = fp_mod(std::move(a), b, r);
        std::swap(a, b);
    }
    return a;
}

// Ben-Or: f of degree d is irreducible iff gcd(f, x^{r^i} - x) = 1 for i <= d/2.
inline bool fp_irreducible(const fp_poly &f, u64 r)
{
    const std::size_t d = f.size() - 1;
    if (d == 1)
        return true;
    if (f[0] == 0)
        return false;
    fp_poly h{0, 1};
    for (std::size_t i = 1; i <= d / 2; ++i) {
        fp_poly base = h, acc{1};
        for (u64 e = r; e; e >>= 1) {
            if (e & 1)
                acc = fp_mulmod(acc, base, f, r);
            base = fp_mulmod(base, base, f, r);
        }
        h = acc;
        fp_poly g = h;
        g.resize(std::max<std::size_t>(g.size(), 2), 0);
        g[1] = (g[1] + r - 1) % r;
        trim(g);
        if (fp_gcd(f, g, r).size() > 1)
            return false;
    }
    return true;
}

} // namespace detail

class Field;
using FieldPtr = std::shared_ptr<const Field>;

FieldPtr make_field(u64 r, unsigned d);

// F_{r^d}.  Elements are length-d coefficient arrays in the basis 1, w, ..., w^{d-1}.
class Field {
public:
    static constexpr unsigned max_degree = 64;

    u64 characteristic() const { return r_; }
    unsigned degree() const { return d_; }
    // Monic, d+1 entries, lowest degree first.
    const std::vector<u64> &modulus() const { return mod_; }
    u64 least_nonresidue() const { return delta_; }
    bigint order() const { return ipow(r_, d_); }
    // Fixed non-square, used by Tonelli-Shanks.
    const std::vector<u64> &nonsquare() const { return nonsq_; }

    void add(const u64 *a, const u64 *b, u64 *o) const
    {
        for (unsigned i = 0; i < d_; ++i) {
            u64 s = a[i] + b[i];
            o[i] = s >= r_ ? s - r_ : s;
        }
    }

    void sub(const u64 *a, const u64 *b, u64 *o) const
    {
        for (unsigned i = 0; i < d_; ++i)
            o[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + r_ - b[i];
    }

    void neg(const u64 *a, u64 *o) const
    {
        for (unsigned i = 0; i < d_; ++i)
            o[i] = a[i] ? r_ - a[i] : 0;
    }

    void scale(const u64 *a, u64 s, u64 *o) const
    {
        for (unsigned i = 0; i < d_; ++i)
            o[i] = mulmod(a[i], s, r_);
    }

    // o may alias a or b.
    void mul(const u64 *a, const u64 *b, u64 *o) const
    {
        if (d_ == 1) {
            o[0] = mulmod(a[0], b[0], r_);
            return;
        }
        if (quadratic_) {
            u64 c0 = (mulmod(a[0], b[0], r_) + mulmod(mulmod(a[1], b[1], r_), delta_, r_)) % r_;
            u64 c1 = (mulmod(a[0], b[1], r_) + mulmod(a[1], b[0], r_)) % r_;
            o[0] = c0;
            o[1] = c1;
            return;
        }
        std::array<unsigned __int128, 2 * max_degree> acc{};
        for (unsigned i = 0; i < d_; ++i) {
            if (!a[i])
                continue;
            for (unsigned j = 0; j < d_; ++j)
                acc[i + j] += static_cast<unsigned __int128>(a[i]) * b[j];
        }
        std::array<u64, 2 * max_degree> t{};
        for (unsigned k = 0; k + 1 < 2 * d_; ++k)
            t[k] = static_cast<u64>(acc[k] % r_);
        for (unsigned k = 2 * d_ - 2; k >= d_; --k) {
            u64 c = t[k];
            if (!c)
                continue;
            for (unsigned i = 0; i < d_; ++i)
                t[k - d_ + i] = (t[k - d_ + i] + mulmod(c, negmod_[i], r_)) % r_;
        }
        std::copy(t.begin(), t.begin() + d_, o);
    }

    bool is_zero(const u64 *a) const
    {
        return std::all_of(a, a + d_, [](u64 x) { return x == 0; });
    }

    void inv(const u64 *a, u64 *o) const
    {
        if (is_zero(a))
            throw std::domain_error("inverse of zero in F_" + std::to_string(r_) + "^" + std::to_string(d_));
        if (d_ == 1) {
            o[0] = invmod(a[0], r_);
            return;
        }
        if (quadratic_) {
            u64 n = (mulmod(a[0], a[0], r_) + r_ - mulmod(mulmod(a[1], a[1], r_), delta_, r_)) % r_;
            u64 ni = invmod(n, r_);
            o[0] = mulmod(a[0], ni, r_);
            o[1] = mulmod(a[1] ? r_ - a[1] : 0, ni, r_);
            return;
        }
        // Extended Euclid on (m, a) over F_r.
        using detail::fp_poly;
        fp_poly r0(mod_), r1(a, a + d_), s0{}, s1{1};
        detail::trim(r1);
        while (r1.size() > 1) {
            fp_poly q(r0.size() - r1.size() + 1, 0);
            fp_poly rem = r0;
            u64 li = invmod(r1.back(), r_);
            while (rem.size() >= r1.size()) {
                u64 c = mulmod(rem.back(), li, r_);
                std::size_t s = rem.size() - r1.size();
                q[s] = c;
                for (std::size_t i = 0; i < r1.size(); ++i)
                    rem[s + i] = (rem[s + i] + r_ - mulmod(c, r1[i], r_)) % r_;
                detail::trim(rem);
            }
            fp_poly qs(q.size() + s1.size(), 0);
            for (std::size_t i = 0; i < q.size(); ++i)
                for (std::size_t j = 0; j < s1.size(); ++j)
                    qs[i + j] = (qs[i + j] + mulmod(q[i], s1[j], r_)) % r_;
            fp_poly ns(std::max(s0.size(), qs.size()), 0);
            for (std::size_t i = 0; i < ns.size(); ++i) {
                u64 x = i < s0.size() ? s0[i] : 0, y = i < qs.size() ? qs[i] : 0;
                ns[i] = (x + r_ - y) % r_;
            }
            detail::trim(ns);
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(ns);
        }
        u64 ci = invmod(r1[0], r_);
        std::fill(o, o + d_, 0);
        for (std::size_t i = 0; i < s1.size() && i < d_; ++i)
            o[i] = mulmod(s1[i], ci, r_);
    }

    void pow(const u64 *a, const bigint &e, u64 *o) const
    {
        std::vector<u64> base(a, a + d_), acc(d_, 0);
        acc[0] = 1;
        if (e < 0)
            throw std::domain_error("negative exponent");
        const unsigned bits = e == 0 ? 0 : static_cast<unsigned>(boost::multiprecision::msb(e)) + 1;
        for (unsigned i = bits; i-- > 0;) {
            mul(acc.data(), acc.data(), acc.data());
            if (boost::multiprecision::bit_test(e, i))
                mul(acc.data(), base.data(), acc.data());
        }
        std::copy(acc.begin(), acc.end(), o);
    }

private:
    Field(u64 r, unsigned d, std::vector<u64> modulus, u64 delta)
        : r_(r), d_(d), mod_(std::move(modulus)), delta_(delta), quadratic_(d == 2 && mod_[1] == 0)
    {
        negmod_.resize(d_);
        for (unsigned i = 0; i < d_; ++i)
            negmod_[i] = mod_[i] ? r_ - mod_[i] : 0;
        const bigint half = (order() - 1) / 2;
        std::vector<u64> z(d_, 0), t(d_);
        for (u64 idx = 2;; ++idx) {
            u64 v = idx;
            for (unsigned i = 0; i < d_; ++i) {
                z[i] = v % r_;
                v /= r_;
            }
            pow(z.data(), half, t.data());
            if (t[0] == r_ - 1 && std::all_of(t.begin() + 1, t.end(), [](u64 x) { return x == 0; }))
                break;
        }
        nonsq_ = z;
    }

    friend FieldPtr make_field(u64 r, unsigned d);

    u64 r_;
    unsigned d_;
    std::vector<u64> mod_;
    std::vector<u64> negmod_;
    u64 delta_;
    bool quadratic_;
    std::vector<u64> nonsq_;
};

// Canonical field of order r^d.  d = 2 uses w^2 = delta with delta the least
// non-residue; d > 2 uses the least monic irreducible in lexicographic order
// of (c_0, ..., c_{d-1}).  Fields are interned, so equal (r, d) give the same pointer.
inline FieldPtr make_field(u64 r, unsigned d)
{
    require(is_prime(r), "make_field: r = " + std::to_string(r) + " is not prime");
    require(r >= 5, "make_field: r must be at least 5");
    require(r < (u64(1) << 31), "make_field: r too large for single-word arithmetic");
    require(d >= 1 && d <= Field::max_degree, "make_field: degree out of range");

    static std::mutex mu;
    static std::map<std::pair<u64, unsigned>, FieldPtr> registry;
    {
        std::lock_guard lk(mu);
        auto it = registry.find({r, d});
        if (it != registry.end())
            return it->second;
    }

    u64 delta = 2;
    while (powmod(delta, (r - 1) / 2, r) != r - 1)
        ++delta;

    std::vector<u64> m(d + 1, 0);
    m[d] = 1;
    if (d == 2) {
        m[0] = r - delta;
    }
    else if (d > 2) {
        // Enumerate (c_0, ..., c_{d-1}) lexicographically, c_0 = 0 is never irreducible.
        std::vector<u64> c(d, 0);
        c[0] = 1;
        for (;;) {
            std::copy(c.begin(), c.end(), m.begin());
            if (detail::fp_irreducible(m, r))
                break;
            int i = static_cast<int>(d) - 1;
            while (i >= 0 && ++c[i] == r) {
                c[i] = 0;
                --i;
            }
            ensure(i >= 0, "make_field: no irreducible found");
        }
    }

    FieldPtr f(new Field(r, d, std::move(m), delta));
    std::lock_guard lk(mu);
    auto [it, fresh] = registry.emplace(std::pair{r, d}, f);
    return it->second;
}

class Element {
public:
    Element() = default;

    explicit Element(FieldPtr f) : f_(std::move(f)), c_(f_->degree(), 0) {}

    Element(FieldPtr f, i64 v) : Element(std::move(f))
    {
        const i64 r = static_cast<i64>(f_->characteristic());
        c_[0] = static_cast<u64>(((v % r) + r) % r);
    }

    Element(FieldPtr f, std::vector<u64> c) : f_(std::move(f)), c_(std::move(c))
    {
        if (c_.size() != f_->degree())
            throw std::invalid_argument("Element: coefficient count must equal field degree");
        for (auto &x : c_)
            x %= f_->characteristic();
    }

    // Element whose coefficients are the base-r digits of idx, c_0 least significant.
    static Element from_index(FieldPtr f, u64 idx)
    {
        std::vector<u64> c(f->degree());
        for (auto &x : c) {
            x = idx % f->characteristic();
            idx /= f->characteristic();
        }
        return {std::move(f), std::move(c)};
    }

    static Element generator(FieldPtr f)
    {
        Element e(std::move(f));
        if (e.c_.size() > 1)
            e.c_[1] = 1;
        else
            throw std::invalid_argument("prime field has no adjoined root");
        return e;
    }

    const FieldPtr &field() const { return f_; }
    const std::vector<u64> &coeffs() const { return c_; }
    u64 operator[](std::size_t i) const { return c_[i]; }
    const u64 *data() const { return c_.data(); }

    bool is_zero() const { return std::all_of(c_.begin(), c_.end(), [](u64 x) { return x == 0; }); }
    bool is_one() const
    {
        return c_[0] == 1 && std::all_of(c_.begin() + 1, c_.end(), [](u64 x) { return x == 0; });
    }
    bool in_prime_field() const
    {
        return std::all_of(c_.begin() + 1, c_.end(), [](u64 x) { return x == 0; });
    }

    Element operator+(const Element &o) const
    {
        check(o);
        Element r(f_);
        f_->add(c_.data(), o.c_.data(), r.c_.data());
        return r;
    }
    Element operator-(const Element &o) const
    {
        check(o);
        Element r(f_);
        f_->sub(c_.data(), o.c_.data(), r.c_.data());
        return r;
    }
    Element operator-() const
    {
        Element r(f_);
        f_->neg(c_.data(), r.c_.data());
        return r;
    }
    Element operator*(const Element &o) const
    {
        check(o);
        Element r(f_);
        f_->mul(c_.data(), o.c_.data(), r.c_.data());
        return r;
    }
    Element operator/(const Element &o) const { return *this * o.inverse(); }
    Element operator*(i64 s) const { return *this * Element(f_, s); }

    Element &operator+=(const Element &o) { return *this = *this + o; }
    Element &operator-=(const Element &o) { return *this = *this - o; }
    Element &operator*=(const Element &o) { return *this = *this * o; }

    Element inverse() const
    {
        Element r(f_);
        f_->inv(c_.data(), r.c_.data());
        return r;
    }

    Element pow(const bigint &e) const
    {
        Element r(f_);
        if (e < 0)
            f_->pow(inverse().c_.data(), -e, r.c_.data());
        else
            f_->pow(c_.data(), e, r.c_.data());
        return r;
    }

    Element frobenius() const { return pow(bigint(f_->characteristic())); }

    friend bool operator==(const Element &a, const Element &b) { return a.f_ == b.f_ && a.c_ == b.c_; }
    friend bool operator!=(const Element &a, const Element &b) { return !(a == b); }
    // Lexicographic on (c_0, c_1, ...).
    friend bool operator<(const Element &a, const Element &b)
    {
        a.check(b);
        return a.c_ < b.c_;
    }

    // "a" over F_r; "c0+c1*w" over F_{r^2}; higher powers as "+ck*w^k".
    std::string to_string() const
    {
        std::ostringstream os;
        os << c_[0];
        for (std::size_t i = 1; i < c_.size(); ++i) {
            os << '+' << c_[i] << "*w";
            if (i > 1)
                os << '^' << i;
        }
        return os.str();
    }

private:
    void check(const Element &o) const
    {
        if (f_ != o.f_)
            throw std::invalid_argument("arithmetic across different fields");
    }

    FieldPtr f_;
    std::vector<u64> c_;
};

inline Element operator*(i64 s, const Element &e) { return e * s; }

inline std::ostream &operator<<(std::ostream &os, const Element &e) { return os << e.to_string(); }

// Inverse of Element::to_string.  Also accepts signed integers and "a-b*w".
inline Element parse_element(const FieldPtr &f, const std::string &s)
{
    Element out(f);
    std::size_t pos = 0;
    const i64 r = static_cast<i64>(f->characteristic());
    auto fail = [&] { throw input_error("cannot parse field element '" + s + "'"); };
    while (pos < s.size()) {
        int sign = 1;
        while (pos < s.size() && (s[pos] == '+' || s[pos] == '-' || s[pos] == ' ')) {
            if (s[pos] == '-')
                sign = -sign;
            ++pos;
        }
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (start == pos)
            fail();
        i64 v = static_cast<i64>(std::stoll(s.substr(start, pos - start)) % r);
        unsigned k = 0;
        if (pos < s.size() && s[pos] == '*') {
            if (pos + 1 >= s.size() || s[pos + 1] != 'w')
                fail();
            pos += 2;
            k = 1;
            if (pos < s.size() && s[pos] == '^') {
                std::size_t st = ++pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
                    ++pos;
                if (st == pos)
                    fail();
                k = static_cast<unsigned>(std::stoul(s.substr(st, pos - st)));
            }
        }
        if (k >= f->degree())
            fail();
        std::vector<u64> c(f->degree(), 0);
        c[k] = static_cast<u64>(((sign * v) % r + r) % r);
        out += Element(f, c);
    }
    return out;
}

// Polynomials over a field, coefficients stored flat (degree+1 blocks of d words).
class Poly {
public:
    Poly() = default;
    explicit Poly(FieldPtr f) : f_(std::move(f)) {}

    Poly(FieldPtr f, const std::vector<Element> &coeffs) : f_(std::move(f))
    {
        const unsigned d = f_->degree();
        c_.resize(coeffs.size() * d);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (coeffs[i].field() != f_)
                throw std::invalid_argument("Poly: coefficient from a different field");
            std::copy(coeffs[i].coeffs().begin(), coeffs[i].coeffs().end(), c_.begin() + i * d);
        }
        trim();
    }

    // Integer coefficients, lowest degree first.
    static Poly from_ints(FieldPtr f, const std::vector<i64> &coeffs)
    {
        std::vector<Element> e;
        for (i64 v : coeffs)
            e.emplace_back(f, v);
        return {f, e};
    }

    static Poly x(FieldPtr f) { return from_ints(std::move(f), {0, 1}); }

    static Poly constant(const Element &c) { return {c.field(), {c}}; }

    // Product of (x - root) over the given roots.
    static Poly from_roots(FieldPtr f, const std::vector<Element> &roots)
    {
        Poly p = from_ints(f, {1});
        for (const auto &z : roots)
            p = p * Poly(f, {-z, Element(f, 1)});
        return p;
    }

    const FieldPtr &field() const { return f_; }
    int degree() const { return static_cast<int>(c_.size() / f_->degree()) - 1; }
    bool is_zero() const { return c_.empty(); }
    std::size_t size() const { return f_ ? c_.size() / f_->degree() : 0; }

    Element coeff(std::size_t i) const
    {
        const unsigned d = f_->degree();
        if (i >= size())
            return Element(f_);
        return {f_, std::vector<u64>(c_.begin() + i * d, c_.begin() + (i + 1) * d)};
    }
    Element lead() const { return coeff(size() - 1); }
    std::vector<Element> coeffs() const
    {
        std::vector<Element> out;
        for (std::size_t i = 0; i < size(); ++i)
            out.push_back(coeff(i));
        return out;
    }
    const u64 *raw(std::size_t i) const { return c_.data() + i * f_->degree(); }

    Poly operator+(const Poly &o) const { return combine(o, false); }
    Poly operator-(const Poly &o) const { return combine(o, true); }
    Poly operator-() const { return Poly(f_) - *this; }

    Poly operator*(const Poly &o) const
    {
        check(o);
        if (is_zero() || o.is_zero())
            return Poly(f_);
        const unsigned d = f_->degree();
        Poly r(f_);
        r.c_.assign((size() + o.size() - 1) * d, 0);
        std::vector<u64> t(d);
        for (std::size_t i = 0; i < size(); ++i) {
            if (f_->is_zero(raw(i)))
                continue;
            for (std::size_t j = 0; j < o.size(); ++j) {
                f_->mul(raw(i), o.raw(j), t.data());
                u64 *dst = r.c_.data() + (i + j) * d;
                f_->add(dst, t.data(), dst);
            }
        }
        r.trim();
        return r;
    }

    Poly operator*(const Element &s) const
    {
        if (s.field() != f_)
            throw std::invalid_argument("Poly: scalar from a different field");
        Poly r(*this);
        const unsigned d = f_->degree();
        for (std::size_t i = 0; i < size(); ++i)
            f_->mul(r.c_.data() + i * d, s.data(), r.c_.data() + i * d);
        r.trim();
        return r;
    }

    Poly monic() const
    {
        if (is_zero())
            return *this;
        return *this * lead().inverse();
    }

    Poly derivative() const
    {
        Poly r(f_);
        const unsigned d = f_->degree();
        if (size() <= 1)
            return r;
        r.c_.assign((size() - 1) * d, 0);
        for (std::size_t i = 1; i < size(); ++i)
            f_->scale(raw(i), i % f_->characteristic(), r.c_.data() + (i - 1) * d);
        r.trim();
        return r;
    }

    Element eval(const Element &x) const
    {
        if (x.field() != f_)
            throw std::invalid_argument("Poly::eval: point from a different field");
        const unsigned d = f_->degree();
        std::vector<u64> acc(d, 0);
        for (std::size_t i = size(); i-- > 0;) {
            f_->mul(acc.data(), x.data(), acc.data());
            f_->add(acc.data(), raw(i), acc.data());
        }
        return {f_, acc};
    }

    // Quotient and remainder; o must be nonzero.
    friend std::pair<Poly, Poly> divmod(const Poly &a, const Poly &b)
    {
        a.check(b);
        if (b.is_zero())
            throw std::domain_error("polynomial division by zero");
        const FieldPtr &f = a.f_;
        const unsigned d = f->degree();
        if (a.size() < b.size())
            return {Poly(f), a};
        std::vector<u64> li(d), c(d), t(d);
        f->inv(b.raw(b.size() - 1), li.data());
        Poly rem(a), q(f);
        q.c_.assign((a.size() - b.size() + 1) * d, 0);
        const std::size_t bs = b.size();
        for (std::size_t top = a.size(); top-- >= bs;) {
            u64 *lead = rem.c_.data() + top * d;
            if (f->is_zero(lead))
                continue;
            f->mul(lead, li.data(), c.data());
            std::size_t s = top - (bs - 1);
            std::copy(c.begin(), c.end(), q.c_.begin() + s * d);
            for (std::size_t i = 0; i < bs; ++i) {
                f->mul(c.data(), b.raw(i), t.data());
                u64 *dst = rem.c_.data() + (s + i) * d;
                f->sub(dst, t.data(), dst);
            }
            if (top == 0)
                break;
        }
        rem.trim();
        q.trim();
        return {q, rem};
    }

    Poly operator%(const Poly &m) const { return divmod(*this, m).second; }
    Poly operator/(const Poly &m) const { return divmod(*this, m).first; }

    friend bool operator==(const Poly &a, const Poly &b) { return a.f_ == b.f_ && a.c_ == b.c_; }
    friend bool operator!=(const Poly &a, const Poly &b) { return !(a == b); }
    // Degree first, then coefficients from the constant term up.
    friend bool operator<(const Poly &a, const Poly &b)
    {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a.c_ < b.c_;
    }

    std::string to_string() const
    {
        if (is_zero())
            return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = size(); i-- > 0;) {
            Element c = coeff(i);
            if (c.is_zero())
                continue;
            if (!first)
                os << " + ";
            first = false;
            const bool unit = c.is_one() && i > 0;
            if (!unit)
                os << (c.in_prime_field() ? c.to_string() : "(" + c.to_string() + ")");
            if (i > 0)
                os << (unit ? "" : "*") << "x" << (i > 1 ? "^" + std::to_string(i) : "");
        }
        return os.str();
    }

private:
    void check(const Poly &o) const
    {
        if (f_ != o.f_)
            throw std::invalid_argument("polynomials over different fields");
    }

    void trim()
    {
        const unsigned d = f_->degree();
        while (!c_.empty() && f_->is_zero(c_.data() + c_.size() - d))
            c_.resize(c_.size() - d);
    }

    Poly combine(const Poly &o, bool subtract) const
    {
        check(o);
        const unsigned d = f_->degree();
        Poly r(f_);
        r.c_.assign(std::max(c_.size(), o.c_.size()), 0);
        std::copy(c_.begin(), c_.end(), r.c_.begin());
        for (std::size_t i = 0; i < o.size(); ++i) {
            u64 *dst = r.c_.data() + i * d;
            if (subtract)
                f_->sub(dst, o.raw(i), dst);
            else
                f_->add(dst, o.raw(i), dst);
        }
        r.trim();
        return r;
    }

    FieldPtr f_;
    std::vector<u64> c_;
};

inline std::ostream &operator<<(std::ostream &os, const Poly &p) { return os << p.to_string(); }

// Monic gcd (zero if both inputs are zero).
inline Poly gcd(Poly a, Poly b)
{
    while (!b.is_zero()) {
        a = a % b;
        std::swap(a, b);
    }
    return a.monic();
}

inline Poly mulmod(const Poly &a, const Poly &b, const Poly &m) { return (a * b) % m; }

// Inverse of a modulo m; throws if gcd(a, m) != 1.
inline Poly inverse_mod(const Poly &a, const Poly &m)
{
    const FieldPtr &F = m.field();
    Poly r0 = m, r1 = a % m, s0(F), s1 = Poly::from_ints(F, {1});
    while (!r1.is_zero()) {
        auto [q, rem] = divmod(r0, r1);
        Poly ns = s0 - q * s1;
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(ns);
    }
    if (r0.degree() != 0)
        throw std::domain_error("inverse_mod: not invertible");
    return (s0 * r0.lead().inverse()) % m;
}

inline Poly powmod(const Poly &base, const bigint &e, const Poly &m)
{
    Poly acc = Poly::from_ints(m.field(), {1}) % m;
    Poly b = base % m;
    const unsigned bits = e == 0 ? 0 : static_cast<unsigned>(boost::multiprecision::msb(e)) + 1;
    for (unsigned i = bits; i-- > 0;) {
        acc = mulmod(acc, acc, m);
        if (boost::multiprecision::bit_test(e, i))
            acc = mulmod(acc, b, m);
    }
    return acc;
}

inline Element random_element(const FieldPtr &f, std::mt19937_64 &rng)
{
    std::vector<u64> c(f->degree());
    for (auto &x : c)
        x = rng() % f->characteristic();
    return {f, c};
}

// Square root if one exists; of the two roots the lexicographically smaller one.
inline std::optional<Element> sqrt_element(const Element &a)
{
    const FieldPtr &f = a.field();
    if (a.is_zero())
        return a;
    const bigint q1 = f->order() - 1;
    if (!a.pow(q1 / 2).is_one())
        return std::nullopt;
    unsigned s = 0;
    bigint t = q1;
    while ((t & 1) == 0) {
        t >>= 1;
        ++s;
    }
    Element z(f, f->nonsquare());
    Element c = z.pow(t);
    Element x = a.pow((t + 1) / 2);
    Element b = a.pow(t);
    unsigned m = s;
    while (!b.is_one()) {
        unsigned i = 0;
        Element bb = b;
        while (!bb.is_one()) {
            bb = bb * bb;
            ++i;
        }
        Element g = c;
        for (unsigned k = 0; k + 1 < m - i; ++k)
            g = g * g;
        x = x * g;
        c = g * g;
        b = b * c;
        m = i;
    }
    Element y = -x;
    return y < x ? y : x;
}

// Ben-Or irreducibility over the coefficient field.
inline bool is_irreducible(const Poly &f)
{
    const int n = f.degree();
    if (n <= 0)
        return false;
    if (n == 1)
        return true;
    const bigint q = f.field()->order();
    const Poly x = Poly::x(f.field());
    Poly h = x % f;
    for (int i = 1; i <= n / 2; ++i) {
        h = powmod(h, q, f);
        if (gcd(f, h - x).degree() > 0)
            return false;
    }
    return true;
}

// Monic f, squarefree, all irreducible factors of degree d.  Returns the
// factors sorted; the result does not depend on rng.
inline std::vector<Poly> equal_degree_factors(const Poly &f, unsigned d, std::mt19937_64 &rng)
{
    const FieldPtr &F = f.field();
    const int n = f.degree();
    if (n <= 0)
        return {};
    if (n % static_cast<int>(d) != 0)
        throw invariant_error("equal_degree_factors: degree not a multiple of d");
    if (n == static_cast<int>(d))
        return {f.monic()};
    if (F->characteristic() == 2)
        throw input_error("characteristic 2 not supported");
    const bigint e = (boost::multiprecision::pow(F->order(), d) - 1) / 2;
    const Poly one = Poly::from_ints(F, {1});
    std::vector<Poly> out, stack{f.monic()};
    while (!stack.empty()) {
        Poly g = stack.back();
        stack.pop_back();
        if (g.degree() == static_cast<int>(d)) {
            out.push_back(g);
            continue;
        }
        for (;;) {
            std::vector<Element> rc;
            for (int i = 0; i < g.degree(); ++i)
                rc.push_back(random_element(F, rng));
            Poly a(F, rc);
            if (a.degree() < 1)
                continue;
            Poly h = gcd(g, powmod(a, e, g) - one);
            if (h.degree() > 0 && h.degree() < g.degree()) {
                stack.push_back(h);
                stack.push_back(g / h);
                break;
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Pairs (d, product of all monic irreducible factors of degree d) for squarefree monic f.
inline std::vector<std::pair<unsigned, Poly>> distinct_degree_factors(const Poly &f)
{
    const FieldPtr &F = f.field();
    const bigint q = F->order();
    const Poly x = Poly::x(F);
    std::vector<std::pair<unsigned, Poly>> out;
    Poly g = f.monic(), h = x % g;
    for (unsigned d = 1; g.degree() >= 2 * static_cast<int>(d); ++d) {
        h = powmod(h, q, g);
        Poly c = gcd(g, h - x);
        if (c.degree() > 0) {
            out.emplace_back(d, c);
            g = g / c;
            h = h % g;
        }
    }
    if (g.degree() > 0)
        out.emplace_back(static_cast<unsigned>(g.degree()), g);
    return out;
}

// Image of the small field inside a larger one, fixed by sending w to the
// lexicographically least root of the small field's modulus.
class Embedding {
public:
    Embedding(FieldPtr src, FieldPtr dst, Element image_of_w) : src_(std::move(src)), dst_(std::move(dst))
    {
        Element p(dst_, 1);
        for (unsigned i = 0; i < src_->degree(); ++i) {
            powers_.push_back(p);
            p = p * image_of_w;
        }
    }

    const FieldPtr &source() const { return src_; }
    const FieldPtr &target() const { return dst_; }

    Element operator()(const Element &a) const
    {
        if (a.field() != src_)
            throw std::invalid_argument("Embedding: element from the wrong field");
        Element out(dst_);
        for (unsigned i = 0; i < src_->degree(); ++i)
            if (a[i])
                out += powers_[i] * static_cast<i64>(a[i]);
        return out;
    }

    Poly operator()(const Poly &p) const
    {
        std::vector<Element> c;
        for (const auto &e : p.coeffs())
            c.push_back((*this)(e));
        return {dst_, c};
    }

    // Preimage of b if b lies in the image.
    std::optional<Element> preimage(const Element &b) const
    {
        const u64 r = src_->characteristic();
        const unsigned n = src_->degree(), D = dst_->degree();
        // Solve sum_i c_i powers_[i] = b; rows = target coordinates.
        std::vector<std::vector<u64>> m(D, std::vector<u64>(n + 1));
        for (unsigned row = 0; row < D; ++row) {
            for (unsigned i = 0; i < n; ++i)
                m[row][i] = powers_[i][row];
            m[row][n] = b[row];
        }
        unsigned rank = 0;
        std::vector<int> pivcol;
        for (unsigned col = 0; col < n && rank < D; ++col) {
            unsigned piv = rank;
            while (piv < D && m[piv][col] == 0)
                ++piv;
            if (piv == D)
                continue;
            std::swap(m[piv], m[rank]);
            u64 inv = invmod(m[rank][col], r);
            for (auto &x : m[rank])
                x = ssig::mulmod(x, inv, r);
            for (unsigned row = 0; row < D; ++row) {
                if (row == rank || m[row][col] == 0)
                    continue;
                u64 c = m[row][col];
                for (unsigned k = 0; k <= n; ++k)
                    m[row][k] = (m[row][k] + r - ssig::mulmod(c, m[rank][k], r)) % r;
            }
            pivcol.push_back(static_cast<int>(col));
            ++rank;
        }
        for (unsigned row = rank; row < D; ++row)
            if (m[row][n] != 0)
                return std::nullopt;
        std::vector<u64> c(n, 0);
        for (unsigned k = 0; k < rank; ++k)
            c[pivcol[k]] = m[k][n];
        return Element(src_, c);
    }

private:
    FieldPtr src_, dst_;
    std::vector<Element> powers_;
};

struct RootOptions {
    u64 exhaustive_limit = 1'000'000;
    u64 seed = 0x5eed5eedULL;
};

Embedding embedding(const FieldPtr &src, const FieldPtr &dst);

namespace detail {

inline std::vector<Element> roots_same_field(const Poly &f, const RootOptions &opt)
{
    const FieldPtr &F = f.field();
    if (f.is_zero())
        throw input_error("poly_roots: zero polynomial");
    std::vector<Element> distinct;
    if (f.degree() <= 0)
        return {};
    const bigint q = F->order();
    if (q <= opt.exhaustive_limit) {
        const u64 n = static_cast<u64>(q), r = F->characteristic();
        const unsigned d = F->degree();
        std::vector<u64> z(d, 0), acc(d);
        for (u64 i = 0; i < n; ++i) {
            std::fill(acc.begin(), acc.end(), 0);
            for (std::size_t k = f.size(); k-- > 0;) {
                F->mul(acc.data(), z.data(), acc.data());
                F->add(acc.data(), f.raw(k), acc.data());
            }
            if (F->is_zero(acc.data()))
                distinct.emplace_back(F, z);
            for (unsigned k = 0; k < d && ++z[k] == r; ++k)
                z[k] = 0;
        }
    }
    else {
        const Poly x = Poly::x(F);
        const Poly g = gcd(f, powmod(x, q, f.monic()) - x);
        std::mt19937_64 rng(opt.seed);
        for (const auto &lin : equal_degree_factors(g, 1, rng))
            distinct.push_back(-lin.coeff(0));
    }
    std::sort(distinct.begin(), distinct.end());
    std::vector<Element> out;
    for (const auto &z : distinct) {
        Poly rest = f;
        const Poly lin(F, {-z, Element(F, 1)});
        for (;;) {
            auto [qq, rr] = divmod(rest, lin);
            if (!rr.is_zero())
                break;
            out.push_back(z);
            rest = qq;
        }
    }
    return out;
}

} // namespace detail

inline Embedding embedding(const FieldPtr &src, const FieldPtr &dst)
{
    require(src->characteristic() == dst->characteristic(), "embedding: characteristics differ");
    require(dst->degree() % src->degree() == 0, "embedding: degree does not divide");
    if (src->degree() == 1)
        return {src, dst, Element(dst, 1)};
    static std::mutex mu;
    static std::map<std::pair<const Field *, const Field *>, Element> cache;
    {
        std::lock_guard lk(mu);
        auto it = cache.find({src.get(), dst.get()});
        if (it != cache.end())
            return {src, dst, it->second};
    }
    std::vector<Element> mc;
    for (u64 c : src->modulus())
        mc.emplace_back(dst, static_cast<i64>(c));
    auto roots = detail::roots_same_field(Poly(dst, mc), RootOptions{});
    ensure(!roots.empty(), "embedding: modulus has no root in the target field");
    std::lock_guard lk(mu);
    cache.emplace(std::pair{src.get(), dst.get()}, roots.front());
    return {src, dst, roots.front()};
}

// All roots of f lying in target (an extension of f's field), with
// multiplicity, sorted lexicographically.
inline std::vector<Element> poly_roots(const Poly &f, const FieldPtr &target, const RootOptions &opt = {})
{
    if (f.is_zero())
        throw input_error("poly_roots: zero polynomial");
    if (f.field() == target)
        return detail::roots_same_field(f, opt);
    return detail::roots_same_field(embedding(f.field(), target)(f), opt);
}

} // namespace ssig::ff

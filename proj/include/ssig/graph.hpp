#pragma once

// Graphs in Serre's sense, finite abelian voltage groups, derived graphs,
// covers, spanning trees and quotient voltages.

#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace ssig::graph {

struct Edge {
    std::size_t o = 0, t = 0, bar = 0;
    friend bool operator==(const Edge &, const Edge &) = default;
};

// Vertices 0..n-1; directed edges with origin, terminus and a fixed-point-free
// involution bar satisfying o(e) = t(bar e).
class SerreGraph {
public:
    SerreGraph() = default;
    explicit SerreGraph(std::size_t n) : n_(n) {}
    SerreGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) { validate(); }

    std::size_t vertex_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const Edge &edge(std::size_t e) const { return edges_[e]; }
    const std::vector<Edge> &edges() const { return edges_; }

    // Appends e: u -> v and its inverse; returns the index of e (the inverse is e + 1).
    std::size_t add_edge_pair(std::size_t u, std::size_t v)
    {
        if (u >= n_ || v >= n_)
            throw std::out_of_range("add_edge_pair: vertex out of range");
        const std::size_t e = edges_.size();
        edges_.push_back({u, v, e + 1});
        edges_.push_back({v, u, e});
        return e;
    }

    void validate() const
    {
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            const Edge &x = edges_[e];
            ensure(x.o < n_ && x.t < n_, "edge endpoint out of range");
            ensure(x.bar < edges_.size(), "bar out of range");
            ensure(x.bar != e, "bar has a fixed point");
            ensure(edges_[x.bar].bar == e, "bar is not an involution");
            ensure(edges_[x.bar].t == x.o && edges_[x.bar].o == x.t, "o(e) != t(bar e)");
        }
    }

    // A_uv = #{e : o(e) = u, t(e) = v}; loops contribute 2 per pair.
    IntMatrix adjacency() const
    {
        IntMatrix a(n_, std::vector<i64>(n_, 0));
        for (const auto &e : edges_)
            ++a[e.o][e.t];
        return a;
    }

    std::vector<i64> outdegrees() const
    {
        std::vector<i64> d(n_, 0);
        for (const auto &e : edges_)
            ++d[e.o];
        return d;
    }

    std::vector<std::vector<std::size_t>> out_edges() const
    {
        std::vector<std::vector<std::size_t>> out(n_);
        for (std::size_t e = 0; e < edges_.size(); ++e)
            out[edges_[e].o].push_back(e);
        return out;
    }

    // Component label per vertex, labels in order of first appearance.
    std::vector<std::size_t> components() const
    {
        const std::size_t none = static_cast<std::size_t>(-1);
        std::vector<std::size_t> label(n_, none);
        auto adj = out_edges();
        std::size_t next = 0;
        for (std::size_t s = 0; s < n_; ++s) {
            if (label[s] != none)
                continue;
            std::queue<std::size_t> q;
            q.push(s);
            label[s] = next;
            while (!q.empty()) {
                std::size_t v = q.front();
                q.pop();
                for (std::size_t e : adj[v]) {
                    std::size_t w = edges_[e].t;
                    if (label[w] == none) {
                        label[w] = next;
                        q.push(w);
                    }
                }
            }
            ++next;
        }
        return label;
    }

    std::size_t component_count() const
    {
        auto l = components();
        return l.empty() ? 0 : *std::max_element(l.begin(), l.end()) + 1;
    }

    bool connected() const { return n_ > 0 && component_count() == 1; }

    // One representative per bar-orbit: the smaller index.
    std::vector<std::size_t> geometric_edges() const
    {
        std::vector<std::size_t> out;
        for (std::size_t e = 0; e < edges_.size(); ++e)
            if (e < edges_[e].bar)
                out.push_back(e);
        return out;
    }

    friend bool operator==(const SerreGraph &, const SerreGraph &) = default;

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
};

using GroupElement = std::vector<i64>;

// Either an additive product Z/m_1 x ... x Z/m_k or the unit group (Z/m)^*.
// Elements are indexed 0..size()-1 in lexicographic order of their residue tuples.
class FiniteAbelianGroup {
public:
    static FiniteAbelianGroup additive(std::vector<i64> moduli)
    {
        FiniteAbelianGroup g;
        g.mult_ = false;
        g.moduli_ = std::move(moduli);
        for (i64 m : g.moduli_)
            require(m >= 1, "group modulus must be positive");
        g.size_ = 1;
        for (i64 m : g.moduli_)
            g.size_ *= static_cast<std::size_t>(m);
        return g;
    }

    static FiniteAbelianGroup cyclic(i64 n) { return additive({n}); }

    static FiniteAbelianGroup units(i64 m)
    {
        require(m >= 1, "unit group modulus must be positive");
        FiniteAbelianGroup g;
        g.mult_ = true;
        g.moduli_ = {m};
        g.unit_index_.assign(static_cast<std::size_t>(m), -1);
        for (i64 u = 0; u < m; ++u) {
            if (std::gcd(u, m) == 1 || m == 1) {
                g.unit_index_[u] = static_cast<i64>(g.units_.size());
                g.units_.push_back(u);
            }
        }
        g.size_ = g.units_.size();
        return g;
    }

    bool multiplicative() const { return mult_; }
    const std::vector<i64> &moduli() const { return moduli_; }
    std::size_t size() const { return size_; }

    GroupElement element(std::size_t i) const
    {
        if (mult_)
            return {units_.at(i)};
        GroupElement g(moduli_.size());
        for (std::size_t k = moduli_.size(); k-- > 0;) {
            g[k] = static_cast<i64>(i % moduli_[k]);
            i /= moduli_[k];
        }
        return g;
    }

    // Index of a tuple after reduction; throws if not an element.
    std::size_t index(const GroupElement &g) const
    {
        require(g.size() == moduli_.size(), "group element has the wrong arity");
        if (mult_) {
            i64 m = moduli_[0];
            i64 u = ((g[0] % m) + m) % m;
            i64 idx = unit_index_[u];
            require(idx >= 0, "not a unit: " + std::to_string(g[0]) + " mod " + std::to_string(m));
            return static_cast<std::size_t>(idx);
        }
        std::size_t i = 0;
        for (std::size_t k = 0; k < moduli_.size(); ++k) {
            i64 m = moduli_[k];
            i = i * m + static_cast<std::size_t>(((g[k] % m) + m) % m);
        }
        return i;
    }

    std::size_t identity() const { return mult_ ? index({1}) : 0; }

    std::size_t op(std::size_t a, std::size_t b) const
    {
        GroupElement x = element(a), y = element(b);
        if (mult_) {
            i64 m = moduli_[0];
            return index({static_cast<i64>(static_cast<__int128>(x[0]) * y[0] % m)});
        }
        for (std::size_t k = 0; k < x.size(); ++k)
            x[k] += y[k];
        return index(x);
    }

    std::size_t inv(std::size_t a) const
    {
        GroupElement x = element(a);
        if (mult_) {
            i64 m = moduli_[0];
            if (m == 1)
                return a;
            return index({static_cast<i64>(invmod(static_cast<u64>(x[0]), static_cast<u64>(m)))});
        }
        for (auto &v : x)
            v = -v;
        return index(x);
    }

    // Sorted indices of the subgroup generated by gens.
    std::vector<std::size_t> generated(const std::vector<std::size_t> &gens) const
    {
        std::vector<bool> in(size_, false);
        std::vector<std::size_t> out{identity()};
        in[identity()] = true;
        for (std::size_t head = 0; head < out.size(); ++head) {
            for (std::size_t g : gens) {
                std::size_t n = op(out[head], g);
                if (!in[n]) {
                    in[n] = true;
                    out.push_back(n);
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    bool is_subgroup(const std::vector<std::size_t> &h) const
    {
        if (h.empty())
            return false;
        std::set<std::size_t> s(h.begin(), h.end());
        if (!s.count(identity()))
            return false;
        for (std::size_t a : s) {
            if (a >= size_ || !s.count(inv(a)))
                return false;
            for (std::size_t b : s)
                if (!s.count(op(a, b)))
                    return false;
        }
        return true;
    }

    std::string to_string(std::size_t i) const
    {
        GroupElement g = element(i);
        if (g.size() == 1)
            return std::to_string(g[0]);
        std::string s = "(";
        for (std::size_t k = 0; k < g.size(); ++k)
            s += (k ? "," : "") + std::to_string(g[k]);
        return s + ")";
    }

private:
    bool mult_ = false;
    std::vector<i64> moduli_;
    std::size_t size_ = 1;
    std::vector<i64> units_;
    std::vector<i64> unit_index_;
};

// alpha(e) as group indices; alpha(bar e) must be the inverse of alpha(e).
struct VoltageAssignment {
    std::vector<std::size_t> values;
};

inline void check_voltage(const SerreGraph &x, const VoltageAssignment &a, const FiniteAbelianGroup &g)
{
    require(a.values.size() == x.edge_count(), "voltage assignment must cover every edge");
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        require(a.values[e] < g.size(), "voltage outside the group");
        require(a.values[x.edge(e).bar] == g.inv(a.values[e]), "voltage of bar e is not the inverse");
    }
}

// Integer voltages read in Z/m (index = residue).
inline VoltageAssignment reduce_integer_voltage(const std::vector<i64> &alpha, const FiniteAbelianGroup &g)
{
    require(!g.multiplicative() && g.moduli().size() == 1, "integer voltages need a cyclic additive group");
    VoltageAssignment v;
    for (i64 x : alpha)
        v.values.push_back(g.index({x}));
    return v;
}

// Constant voltage c on edges of SI and -c on their formal inverses, for a
// double graph whose edge 2k+1 is the inverse of edge 2k.
inline std::vector<i64> constant_voltage(const SerreGraph &x, i64 c = 1)
{
    std::vector<i64> a(x.edge_count());
    for (std::size_t e = 0; e < x.edge_count(); ++e)
        a[e] = e < x.edge(e).bar ? c : -c;
    return a;
}

struct CoverMap {
    SerreGraph source, target;
    std::vector<std::size_t> vmap, emap;
};

// Morphism commuting with o, t, bar that is bijective on each star.
inline bool verify_cover(const CoverMap &c)
{
    const auto &s = c.source;
    const auto &t = c.target;
    if (c.vmap.size() != s.vertex_count() || c.emap.size() != s.edge_count())
        return false;
    for (std::size_t v : c.vmap)
        if (v >= t.vertex_count())
            return false;
    for (std::size_t e = 0; e < s.edge_count(); ++e) {
        std::size_t fe = c.emap[e];
        if (fe >= t.edge_count())
            return false;
        if (c.vmap[s.edge(e).o] != t.edge(fe).o || c.vmap[s.edge(e).t] != t.edge(fe).t)
            return false;
        if (c.emap[s.edge(e).bar] != t.edge(fe).bar)
            return false;
    }
    auto sout = s.out_edges();
    auto tout = t.out_edges();
    for (std::size_t v = 0; v < s.vertex_count(); ++v) {
        std::vector<std::size_t> img;
        for (std::size_t e : sout[v])
            img.push_back(c.emap[e]);
        std::sort(img.begin(), img.end());
        std::vector<std::size_t> want = tout[c.vmap[v]];
        std::sort(want.begin(), want.end());
        if (img != want)
            return false;
    }
    return true;
}

namespace detail {

// Derived graph over the subgroup `members` (sorted G-indices) of G; alpha must take values in it.
inline std::pair<SerreGraph, CoverMap> derive(const SerreGraph &x, const VoltageAssignment &alpha,
                                              const FiniteAbelianGroup &g, const std::vector<std::size_t> &members)
{
    const std::size_t m = members.size();
    std::vector<std::size_t> pos(g.size(), static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < m; ++i)
        pos[members[i]] = i;
    std::vector<Edge> edges(x.edge_count() * m);
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        const Edge &xe = x.edge(e);
        for (std::size_t s = 0; s < m; ++s) {
            std::size_t sa = pos[g.op(members[s], alpha.values[e])];
            ensure(sa < m, "voltage leaves the subgroup");
            edges[e * m + s] = {xe.o * m + s, xe.t * m + sa, xe.bar * m + sa};
        }
    }
    SerreGraph d(x.vertex_count() * m, std::move(edges));
    CoverMap c{d, x, {}, {}};
    for (std::size_t v = 0; v < d.vertex_count(); ++v)
        c.vmap.push_back(v / m);
    for (std::size_t e = 0; e < d.edge_count(); ++e)
        c.emap.push_back(e / m);
    return {std::move(d), std::move(c)};
}

inline std::vector<std::size_t> all_elements(const FiniteAbelianGroup &g)
{
    std::vector<std::size_t> v(g.size());
    std::iota(v.begin(), v.end(), 0);
    return v;
}

} // namespace detail

// X(alpha): vertex (v, s) has index v*|G| + s, edge (e, s) has index e*|G| + s.
inline std::pair<SerreGraph, CoverMap> derived_graph(const SerreGraph &x, const VoltageAssignment &alpha,
                                                     const FiniteAbelianGroup &g)
{
    check_voltage(x, alpha, g);
    return detail::derive(x, alpha, g, detail::all_elements(g));
}

// Voltages of fundamental cycles, pot(o(e)) * alpha(e) * pot(t(e))^{-1}, for a BFS tree from vertex 0.
inline std::vector<std::size_t> cycle_voltages(const SerreGraph &x, const VoltageAssignment &alpha,
                                               const FiniteAbelianGroup &g)
{
    require(x.connected(), "base graph must be connected");
    const std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> pot(x.vertex_count(), none);
    auto adj = x.out_edges();
    pot[0] = g.identity();
    std::queue<std::size_t> q;
    q.push(0);
    while (!q.empty()) {
        std::size_t v = q.front();
        q.pop();
        for (std::size_t e : adj[v]) {
            std::size_t w = x.edge(e).t;
            if (pot[w] == none) {
                pot[w] = g.op(pot[v], alpha.values[e]);
                q.push(w);
            }
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        const Edge &xe = x.edge(e);
        std::size_t c = g.op(g.op(pot[xe.o], alpha.values[e]), g.inv(pot[xe.t]));
        if (c != g.identity())
            out.push_back(c);
    }
    return out;
}

// X(alpha) is connected iff the closed-path voltages generate G.
inline bool connectivity_criterion(const SerreGraph &x, const VoltageAssignment &alpha, const FiniteAbelianGroup &g)
{
    check_voltage(x, alpha, g);
    return g.generated(cycle_voltages(x, alpha, g)).size() == g.size();
}

// Laplacian of the underlying multigraph with the last row and column deleted.
// Loops cancel.
inline IntMatrix reduced_laplacian(const SerreGraph &x)
{
    const std::size_t n = x.vertex_count();
    const std::size_t m = n ? n - 1 : 0;
    IntMatrix l(m, std::vector<i64>(m, 0));
    for (std::size_t e : x.geometric_edges()) {
        std::size_t u = x.edge(e).o, v = x.edge(e).t;
        if (u == v)
            continue;
        if (u < m)
            l[u][u] += 1;
        if (v < m)
            l[v][v] += 1;
        if (u < m && v < m) {
            l[u][v] -= 1;
            l[v][u] -= 1;
        }
    }
    return l;
}

// Number of spanning trees (Matrix-Tree theorem).
inline bigint spanning_tree_count(const SerreGraph &x)
{
    if (x.vertex_count() == 0 || !x.connected())
        return 0;
    return det_bareiss(reduced_laplacian(x));
}

// Enumerates all (|V|-1)-subsets of geometric edges.
inline bigint brute_force_spanning_trees(const SerreGraph &x)
{
    const auto geo = x.geometric_edges();
    require(geo.size() <= 20, "brute_force_spanning_trees: more than 20 geometric edges");
    const std::size_t n = x.vertex_count();
    if (n == 0)
        return 0;
    const std::size_t k = n - 1;
    if (k > geo.size())
        return 0;
    bigint count = 0;
    std::vector<int> pick(geo.size(), 0);
    std::fill(pick.end() - static_cast<long>(k), pick.end(), 1);
    do {
        std::vector<std::size_t> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
            return parent[a] == a ? a : parent[a] = find(parent[a]);
        };
        bool forest = true;
        for (std::size_t i = 0; i < geo.size() && forest; ++i) {
            if (!pick[i])
                continue;
            std::size_t a = find(x.edge(geo[i]).o), b = find(x.edge(geo[i]).t);
            if (a == b)
                forest = false;
            else
                parent[a] = b;
        }
        if (forest)
            ++count;
    } while (std::next_permutation(pick.begin(), pick.end()));
    return count;
}

// Explicit isomorphism candidate between two graphs; checks bijectivity and compatibility.
inline bool verify_isomorphism(const SerreGraph &a, const SerreGraph &b, const std::vector<std::size_t> &vmap,
                               const std::vector<std::size_t> &emap)
{
    if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count())
        return false;
    if (vmap.size() != a.vertex_count() || emap.size() != a.edge_count())
        return false;
    std::vector<bool> hv(b.vertex_count(), false), he(b.edge_count(), false);
    for (std::size_t v : vmap) {
        if (v >= hv.size() || hv[v])
            return false;
        hv[v] = true;
    }
    for (std::size_t e : emap) {
        if (e >= he.size() || he[e])
            return false;
        he[e] = true;
    }
    for (std::size_t e = 0; e < a.edge_count(); ++e) {
        const Edge &x = a.edge(e), &y = b.edge(emap[e]);
        if (vmap[x.o] != y.o || vmap[x.t] != y.t || emap[x.bar] != y.bar)
            return false;
    }
    return true;
}

struct QuotientVoltage {
    SerreGraph z;
    // Values are indices into G lying in H.
    VoltageAssignment beta;
    std::vector<std::size_t> subgroup;
    std::vector<std::size_t> coset_reps;
    // Z(beta) and the witness maps (Hg_i, h) -> h g_i onto X(alpha).
    SerreGraph z_beta;
    std::vector<std::size_t> witness_vmap, witness_emap;
    bool verified = false;
};

// H \ X(alpha) with the voltage (e, Hg_i) -> g_i alpha(e) g_j^{-1}; coset
// representatives are least tuples.  Z vertex (v, i) has index v*m + i.
inline QuotientVoltage quotient_voltage(const SerreGraph &x, const VoltageAssignment &alpha,
                                        const FiniteAbelianGroup &g, std::vector<std::size_t> h)
{
    check_voltage(x, alpha, g);
    std::sort(h.begin(), h.end());
    h.erase(std::unique(h.begin(), h.end()), h.end());
    require(g.is_subgroup(h), "H is not a subgroup of G");

    const std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> coset(g.size(), none), reps;
    for (std::size_t s = 0; s < g.size(); ++s) {
        if (coset[s] != none)
            continue;
        for (std::size_t y : h)
            coset[g.op(y, s)] = reps.size();
        reps.push_back(s);
    }
    const std::size_t m = reps.size();

    QuotientVoltage out;
    out.subgroup = h;
    out.coset_reps = reps;
    std::vector<Edge> edges(x.edge_count() * m);
    out.beta.values.resize(edges.size());
    for (std::size_t e = 0; e < x.edge_count(); ++e) {
        const Edge &xe = x.edge(e);
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t ga = g.op(reps[i], alpha.values[e]);
            std::size_t j = coset[ga];
            edges[e * m + i] = {xe.o * m + i, xe.t * m + j, xe.bar * m + j};
            out.beta.values[e * m + i] = g.op(ga, g.inv(reps[j]));
        }
    }
    out.z = SerreGraph(x.vertex_count() * m, std::move(edges));

    auto [zb, zcover] = detail::derive(out.z, out.beta, g, h);
    out.z_beta = std::move(zb);
    auto [xa, xcover] = detail::derive(x, alpha, g, detail::all_elements(g));
    const std::size_t hs = h.size(), gs = g.size();
    // Z(beta) vertex ((v, i), k) has index (v*m + i)*hs + k; X(alpha) vertex (v, s) has index v*gs + s.
    out.witness_vmap.resize(out.z_beta.vertex_count());
    for (std::size_t v = 0; v < x.vertex_count(); ++v)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < hs; ++k)
                out.witness_vmap[(v * m + i) * hs + k] = v * gs + g.op(h[k], reps[i]);
    out.witness_emap.resize(out.z_beta.edge_count());
    for (std::size_t e = 0; e < x.edge_count(); ++e)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < hs; ++k)
                out.witness_emap[(e * m + i) * hs + k] = e * gs + g.op(h[k], reps[i]);
    out.verified = verify_isomorphism(out.z_beta, xa, out.witness_vmap, out.witness_emap) &&
                   verify_cover(zcover) && verify_cover(xcover);
    return out;
}

// log_p(u) / p^{n0} mod p^precision for u = 1 mod p^{n0}, n0 >= 1.
inline bigint padic_log_scaled(const bigint &u, u64 p, unsigned n0, unsigned precision)
{
    require(p % 2 == 1 && is_prime(p), "padic log needs an odd prime");
    require(n0 >= 1, "padic log needs u = 1 mod p");
    const bigint pn0 = ipow(p, n0);
    require(mod_floor(u - 1, pn0) == 0, "u is not 1 mod p^n0");
    const bigint x = u - 1;
    const bigint mod = ipow(p, precision);
    if (x == 0)
        return 0;
    const unsigned vx = valuation(x, p);
    const unsigned target = n0 + precision;
    rational sum = 0;
    bigint xk = 1;
    // Term k has valuation k*vx - v_p(k) >= k*vx - log_p(k).
    for (u64 k = 1;; ++k) {
        xk *= x;
        unsigned vk = 0;
        for (u64 kk = k; kk % p == 0; kk /= p)
            ++vk;
        if (k * vx >= target + vk) {
            // Every later term also has valuation >= target once k*vx - log_p(k) passes it.
            double lg = std::log(static_cast<double>(k)) / std::log(static_cast<double>(p));
            if (static_cast<double>(k * vx) - lg >= target + 1)
                break;
        }
        rational term(xk, bigint(k));
        sum += (k % 2 ? term : -term);
    }
    sum /= rational(pn0);
    bigint num = boost::multiprecision::numerator(sum), den = boost::multiprecision::denominator(sum);
    ensure(den % p != 0, "padic log: denominator divisible by p");
    bigint dinv = 0;
    {
        // Inverse of den mod p^precision by Newton iteration from the inverse mod p.
        u64 d0 = static_cast<u64>(mod_floor(den, bigint(p)));
        dinv = invmod(d0, p);
        bigint m = p;
        while (m < mod) {
            m *= m;
            dinv = mod_floor(dinv * (2 - den * dinv), m);
        }
    }
    return mod_floor(num * dinv, mod);
}

// (1/p^{n0}) log_p(ell) mod p^precision, with n0 exactly v_p(ell - 1).
inline bigint padic_log_unit(u64 ell, u64 p, unsigned n0, unsigned precision)
{
    require(n0 >= 1, "padic_log_unit: n0 must be positive");
    require((ell - 1) % static_cast<u64>(ipow(p, n0)) == 0, "padic_log_unit: ell != 1 mod p^n0");
    require((ell - 1) % static_cast<u64>(ipow(p, n0 + 1)) != 0, "padic_log_unit: ell = 1 mod p^(n0+1)");
    return padic_log_scaled(bigint(ell), p, n0, precision);
}

// Largest n with ell = 1 mod p^n.
inline unsigned level_n0(u64 ell, u64 p)
{
    unsigned n = 0;
    u64 x = ell - 1;
    while (x && x % p == 0) {
        x /= p;
        ++n;
    }
    return n;
}

// Y_n: derived graph of the double graph x under e -> ell, bar e -> ell^{-1} in (Z/p^n)^*.
inline std::pair<SerreGraph, FiniteAbelianGroup> level_structure_graph(const SerreGraph &x, u64 ell, u64 p, unsigned n)
{
    require(p % 2 == 1 && is_prime(p), "p must be an odd prime");
    require(ell % p != 0, "p must not divide ell");
    const i64 mod = static_cast<i64>(ipow(p, n));
    FiniteAbelianGroup g = FiniteAbelianGroup::units(mod);
    VoltageAssignment a;
    const std::size_t fwd = g.index({static_cast<i64>(ell % static_cast<u64>(mod))});
    for (std::size_t e = 0; e < x.edge_count(); ++e)
        a.values.push_back(e < x.edge(e).bar ? fwd : g.inv(fwd));
    check_voltage(x, a, g);
    return {detail::derive(x, a, g, detail::all_elements(g)).first, g};
}

struct LevelComponentReport {
    unsigned n0 = 0;
    std::size_t components = 0;
    std::size_t expected_components = 0;
    // For n >= n0: each component is isomorphic to X(alpha_{n-n0}) with constant voltage +-1.
    bool components_isomorphic = false;
};

// Component structure of Y_n for ell = 1 mod p.
inline LevelComponentReport level_structure_components(const SerreGraph &x, u64 ell, u64 p, unsigned n)
{
    require(x.connected(), "base graph must be connected");
    LevelComponentReport rep;
    rep.n0 = level_n0(ell, p);
    auto [y, g] = level_structure_graph(x, ell, p, n);
    rep.components = y.component_count();
    const unsigned k = std::min(n, rep.n0);
    rep.expected_components = k == 0 ? 1 : static_cast<std::size_t>((p - 1) * ipow(p, k - 1));
    if (rep.n0 == 0 || n < rep.n0) {
        rep.components_isomorphic = false;
        if (rep.n0 == 0) {
            // No level-n0 splitting; Y_n is a single tower layer.
            rep.components_isomorphic = rep.components == 1;
        }
        return rep;
    }
    // (v, a*u) -> (v, c^{-1} log_p(u)/p^{n0}) with c = log_p(ell)/p^{n0}, a the least residue of its class mod p^{n0}.
    const unsigned m = n - rep.n0;
    const i64 pm = static_cast<i64>(ipow(p, m)), pn = static_cast<i64>(ipow(p, n)), pn0 = static_cast<i64>(ipow(p, rep.n0));
    const std::size_t gs = g.size();
    bigint cinv = 0;
    if (m > 0) {
        bigint c = padic_log_unit(ell, p, rep.n0, m);
        cinv = bigint(invmod(static_cast<u64>(c % pm), static_cast<u64>(pm)));
    }
    FiniteAbelianGroup zpm = FiniteAbelianGroup::cyclic(pm);
    VoltageAssignment alpha = reduce_integer_voltage(constant_voltage(x, 1), zpm);
    auto [xa, cover] = derived_graph(x, alpha, zpm);
    const auto label = y.components();
    std::map<std::size_t, std::vector<std::size_t>> by_comp;
    for (std::size_t v = 0; v < y.vertex_count(); ++v)
        by_comp[label[v]].push_back(v);
    bool ok = true;
    for (const auto &[comp, verts] : by_comp) {
        // Class representative a: least residue in this component's class mod p^{n0}.
        i64 a0 = -1;
        std::map<std::size_t, std::size_t> vmap;
        for (std::size_t v : verts) {
            i64 u = g.element(v % gs)[0];
            if (a0 < 0 || u % pn0 < a0)
                a0 = u % pn0;
        }
        // Choose a unit a with a = a0 mod p^{n0}; a0 itself is a unit.
        i64 ainv = static_cast<i64>(invmod(static_cast<u64>(a0), static_cast<u64>(pn)));
        for (std::size_t v : verts) {
            std::size_t base = v / gs;
            i64 s = g.element(v % gs)[0];
            i64 u = static_cast<i64>(static_cast<__int128>(s) * ainv % pn);
            i64 img = 0;
            if (m > 0) {
                bigint l = padic_log_scaled(bigint(u), p, rep.n0, m);
                img = static_cast<i64>(mod_floor(l * cinv, bigint(pm)));
            }
            vmap[v] = base * static_cast<std::size_t>(pm) + static_cast<std::size_t>(img);
        }
        // Induced subgraph of the component with local numbering.
        std::map<std::size_t, std::size_t> local;
        for (std::size_t v : verts)
            local[v] = local.size();
        std::vector<std::size_t> comp_edges;
        std::map<std::size_t, std::size_t> elocal;
        for (std::size_t e = 0; e < y.edge_count(); ++e) {
            if (label[y.edge(e).o] == comp) {
                elocal[e] = comp_edges.size();
                comp_edges.push_back(e);
            }
        }
        std::vector<Edge> ce;
        for (std::size_t e : comp_edges) {
            const Edge &ye = y.edge(e);
            ce.push_back({local[ye.o], local[ye.t], elocal[ye.bar]});
        }
        SerreGraph cg(verts.size(), ce);
        std::vector<std::size_t> vm(verts.size()), em(comp_edges.size());
        for (std::size_t v : verts)
            vm[local[v]] = vmap[v];
        // Edge (e, s) of Y maps to edge (e, image of origin) of X(alpha).
        for (std::size_t i = 0; i < comp_edges.size(); ++i) {
            std::size_t e = comp_edges[i];
            std::size_t base_e = e / gs;
            std::size_t img_o = vmap[y.edge(e).o] % static_cast<std::size_t>(pm);
            em[i] = base_e * static_cast<std::size_t>(pm) + img_o;
        }
        if (!verify_isomorphism(cg, xa, vm, em))
            ok = false;
    }
    rep.components_isomorphic = ok && rep.components == rep.expected_components;
    return rep;
}

} // namespace ssig::graph

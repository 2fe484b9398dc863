#pragma once

// Supersingular l-isogeny graphs SI(r, l) and their doubles X^{(r,l)}.

#include "brandt.hpp"
#include "elliptic.hpp"
#include "graph.hpp"

#include <queue>

namespace ssig::sig {

using ff::Element;

struct SupersingularVertex {
    Element j; // in the canonical F_{r^2}
    std::size_t index = 0;
};

inline void require_scope(u64 r)
{
    require(r >= 5 && is_prime(r) && r % 12 == 1,
            "r = " + std::to_string(r) + " must be a prime = 1 (mod 12)");
}

namespace detail {

inline std::vector<SupersingularVertex> enumerate_vertices(u64 r)
{
    auto F1 = ff::make_field(r, 1);
    auto F2 = ff::make_field(r, 2);
    auto up = ff::embedding(F1, F2);
    std::optional<Element> seed;
    for (u64 j = 1; j < r && !seed; ++j) {
        Element jj = Element::from_index(F1, j);
        if (jj == Element(F1, 1728))
            continue;
        if (ec::is_supersingular(ec::curve_from_j(jj)))
            seed = up(jj);
    }
    ensure(seed.has_value(), "no supersingular j-invariant in F_r");
    std::set<Element> seen{*seed};
    std::queue<Element> q;
    q.push(*seed);
    while (!q.empty()) {
        Element j = q.front();
        q.pop();
        const ec::Curve e = ec::curve_from_j(j);
        for (const auto &k : ec::order_ell_subgroups(e, 2, {}, false)) {
            Element t = ec::j_invariant(ec::velu_codomain(e, k));
            if (seen.insert(t).second)
                q.push(t);
        }
    }
    std::vector<SupersingularVertex> out;
    for (const auto &j : seen)
        out.push_back({j, out.size()});
    ensure(out.size() == r / 12, "supersingular vertex count differs from floor(r/12)");
    return out;
}

} // namespace detail

// Supersingular j-invariants in lexicographic order of (c0, c1).
inline const std::vector<SupersingularVertex> &supersingular_vertices(u64 r)
{
    require_scope(r);
    static std::mutex mu;
    static std::map<u64, std::shared_ptr<const std::vector<SupersingularVertex>>> cache;
    std::lock_guard lk(mu);
    auto &slot = cache[r];
    if (!slot)
        slot = std::make_shared<const std::vector<SupersingularVertex>>(detail::enumerate_vertices(r));
    return *slot;
}

enum class Backend { automatic, velu, brandt };

inline Backend parse_backend(const std::string &s)
{
    if (s == "auto")
        return Backend::automatic;
    if (s == "velu")
        return Backend::velu;
    if (s == "brandt")
        return Backend::brandt;
    throw input_error("unknown backend '" + s + "' (expected auto, velu or brandt)");
}

inline std::string backend_name(Backend b)
{
    switch (b) {
    case Backend::velu:
        return "velu";
    case Backend::brandt:
        return "brandt";
    default:
        return "auto";
    }
}

struct BuildOptions {
    Backend backend = Backend::automatic;
    ec::TorsionCaps caps;
    // automatic backend: Velu up to this ell, Brandt matrices above
    unsigned auto_velu_max_ell = 19;
    u64 seed = 0x5eed5eedULL;
};

struct IsogenyDigraph {
    u64 r = 0;
    unsigned ell = 0;
    std::vector<SupersingularVertex> vertices;
    IntMatrix adjacency;
    Backend backend = Backend::velu;

    std::size_t size() const { return vertices.size(); }
    IntMatrix degree() const { return identity_matrix(vertices.size(), static_cast<i64>(ell) + 1); }
};

// Checks every structural property SI(r, l) has for r = 1 (mod 12).
inline void assert_sig_invariants(const IsogenyDigraph &g)
{
    const std::size_t n = g.size();
    ensure(n == g.r / 12, "vertex count differs from floor(r/12)");
    ensure(g.adjacency.size() == n, "adjacency has wrong size");
    for (const auto &row : g.adjacency) {
        ensure(row.size() == n, "adjacency is not square");
        i64 s = 0;
        for (i64 v : row)
            s += v;
        ensure(s == static_cast<i64>(g.ell) + 1, "row sum differs from ell+1");
    }
    ensure(is_symmetric(g.adjacency), "adjacency is not symmetric");
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = true;
    std::size_t count = 1;
    while (!q.empty()) {
        std::size_t u = q.front();
        q.pop();
        for (std::size_t v = 0; v < n; ++v)
            if (g.adjacency[u][v] && !seen[v]) {
                seen[v] = true;
                ++count;
                q.push(v);
            }
    }
    ensure(count == n, "isogeny graph is not connected");
}

inline Backend resolve_backend(u64 r, unsigned ell, const BuildOptions &opt)
{
    if (opt.backend != Backend::automatic)
        return opt.backend;
    if (ell == 2)
        return Backend::velu;
    const unsigned d0 = ec::torsion_x_degree(r, ell);
    const bool velu = ell <= std::min(opt.caps.max_ell, opt.auto_velu_max_ell) && 4 * d0 <= opt.caps.max_extension_degree;
    return velu ? Backend::velu : Backend::brandt;
}

// A_{E,E'} = #{C <= E[l] of order l : j(E/C) = j(E')}.
inline IntMatrix velu_adjacency(u64 r, unsigned ell, const BuildOptions &opt)
{
    const auto &vs = supersingular_vertices(r);
    std::map<Element, std::size_t> index;
    for (const auto &v : vs)
        index.emplace(v.j, v.index);
    IntMatrix a(vs.size(), std::vector<i64>(vs.size(), 0));
    for (const auto &v : vs) {
        const ec::Curve e = ec::curve_from_j(v.j);
        for (const auto &k : ec::order_ell_subgroups(e, ell, opt.caps, false, opt.seed)) {
            auto it = index.find(ec::j_invariant(ec::velu_codomain(e, k)));
            ensure(it != index.end(), "isogenous curve is not among the supersingular vertices");
            ++a[v.index][it->second];
        }
    }
    return a;
}

// Brandt classes ordered like the j-vertices, matched against the small-l Velu graphs.
inline const std::vector<std::size_t> &brandt_labels(u64 r)
{
    static std::mutex mu;
    static std::map<u64, std::vector<std::size_t>> cache;
    std::lock_guard lk(mu);
    auto it = cache.find(r);
    if (it != cache.end())
        return it->second;
    auto mod = brandt::brandt_module(r);
    std::vector<IntMatrix> bs, vs;
    for (unsigned l : {2u, 3u, 5u, 7u}) {
        bs.push_back(mod->matrix(l));
        vs.push_back(velu_adjacency(r, l, {}));
    }
    auto perm = find_permutation(bs, vs);
    ensure(perm.has_value(), "Brandt matrices do not match the isogeny graphs for l = 2, 3, 5, 7");
    return cache.emplace(r, *perm).first->second;
}

inline IntMatrix brandt_adjacency(u64 r, unsigned ell)
{
    const auto &perm = brandt_labels(r);
    return permute(brandt::brandt_module(r)->matrix(ell), perm);
}

inline IsogenyDigraph build_sig(u64 r, unsigned ell, const BuildOptions &opt = {})
{
    require_scope(r);
    require(is_prime(ell), "ell = " + std::to_string(ell) + " is not prime");
    require(ell != r, "ell must differ from r");
    IsogenyDigraph g;
    g.r = r;
    g.ell = ell;
    g.vertices = supersingular_vertices(r);
    g.backend = resolve_backend(r, ell, opt);
    g.adjacency = g.backend == Backend::velu ? velu_adjacency(r, ell, opt) : brandt_adjacency(r, ell);
    assert_sig_invariants(g);
    return g;
}

// X^{(r,l)}: every edge of SI(r, l) plus a formal inverse; edge 2k is the k-th
// isogeny, edge 2k+1 its inverse.
inline graph::SerreGraph build_dsig(const IsogenyDigraph &g)
{
    graph::SerreGraph x(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
            for (i64 k = 0; k < g.adjacency[i][j]; ++k)
                x.add_edge_pair(i, j);
    return x;
}

} // namespace ssig::sig

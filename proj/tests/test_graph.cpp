#include <ssig/isogeny_graph.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace ssig;
using namespace ssig::graph;

namespace {

SerreGraph random_multigraph(std::mt19937_64 &rng, std::size_t max_vertices, std::size_t max_edges)
{
    const std::size_t n = 1 + rng() % max_vertices;
    const std::size_t m = rng() % (max_edges + 1);
    SerreGraph x(n);
    for (std::size_t k = 0; k < m; ++k)
        x.add_edge_pair(rng() % n, rng() % n);
    return x;
}

SerreGraph complete_graph(std::size_t n)
{
    SerreGraph x(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            x.add_edge_pair(i, j);
    return x;
}

SerreGraph bouquet(std::size_t loops)
{
    SerreGraph x(1);
    for (std::size_t k = 0; k < loops; ++k)
        x.add_edge_pair(0, 0);
    return x;
}

VoltageAssignment random_voltage(const SerreGraph &x, const FiniteAbelianGroup &g, std::mt19937_64 &rng)
{
    VoltageAssignment a;
    a.values.assign(x.edge_count(), 0);
    for (std::size_t e = 0; e < x.edge_count(); ++e)
        if (e < x.edge(e).bar) {
            a.values[e] = rng() % g.size();
            a.values[x.edge(e).bar] = g.inv(a.values[e]);
        }
    return a;
}

FiniteAbelianGroup random_group(std::mt19937_64 &rng)
{
    switch (rng() % 4) {
    case 0:
        return FiniteAbelianGroup::cyclic(2 + static_cast<i64>(rng() % 10));
    case 1:
        return FiniteAbelianGroup::additive({2, 2 + static_cast<i64>(rng() % 3) * 2});
    case 2:
        return FiniteAbelianGroup::additive({3, 3});
    default:
        return FiniteAbelianGroup::units(std::vector<i64>{7, 9, 15, 16, 20, 21}[rng() % 6]);
    }
}

} // namespace

TEST(SerreGraph, ValidationRejectsBadInvolutions)
{
    EXPECT_THROW(SerreGraph(2, {{0, 1, 0}}), invariant_error);
    EXPECT_THROW(SerreGraph(2, {{0, 1, 1}, {0, 1, 0}}), invariant_error);
    EXPECT_THROW(SerreGraph(2, {{0, 2, 1}, {2, 0, 0}}), invariant_error);
    EXPECT_NO_THROW(SerreGraph(2, {{0, 1, 1}, {1, 0, 0}}));
    SerreGraph x(2);
    EXPECT_THROW(x.add_edge_pair(0, 2), std::out_of_range);
}

TEST(SerreGraph, AdjacencyCountsLoopsTwice)
{
    SerreGraph x(2);
    x.add_edge_pair(0, 0);
    x.add_edge_pair(0, 1);
    EXPECT_EQ(x.adjacency(), (IntMatrix{{2, 1}, {1, 0}}));
    EXPECT_EQ(x.geometric_edges().size(), 2u);
}

TEST(SpanningTrees, ClosedForms)
{
    for (std::size_t n = 1; n <= 7; ++n)
        EXPECT_EQ(spanning_tree_count(complete_graph(n)), n == 1 ? bigint(1) : bigint(ipow(n, static_cast<unsigned>(n - 2))));
    for (std::size_t n = 3; n <= 12; ++n) {
        SerreGraph c(n);
        for (std::size_t i = 0; i < n; ++i)
            c.add_edge_pair(i, (i + 1) % n);
        EXPECT_EQ(spanning_tree_count(c), bigint(n));
    }
    SerreGraph two(2);
    EXPECT_EQ(spanning_tree_count(two), 0);
    EXPECT_EQ(spanning_tree_count(SerreGraph()), 0);
    EXPECT_EQ(spanning_tree_count(bouquet(3)), 1);
}

TEST(SpanningTrees, MatchesBruteForceOnRandomMultigraphs)
{
    std::mt19937_64 rng(2024);
    for (int it = 0; it < 200; ++it) {
        SerreGraph x = random_multigraph(rng, 7, 20);
        EXPECT_EQ(spanning_tree_count(x), brute_force_spanning_trees(x));
    }
}

TEST(SpanningTrees, DoubleGraph37)
{
    auto x = sig::build_dsig(sig::build_sig(37, 2));
    EXPECT_EQ(spanning_tree_count(x), 20);
    EXPECT_EQ(brute_force_spanning_trees(x), 20);
}

TEST(DerivedGraph, BouquetGivesCycle)
{
    for (i64 m = 2; m <= 9; ++m) {
        auto g = FiniteAbelianGroup::cyclic(m);
        SerreGraph b = bouquet(1);
        auto alpha = reduce_integer_voltage(constant_voltage(b, 1), g);
        auto [d, cover] = derived_graph(b, alpha, g);
        EXPECT_EQ(d.vertex_count(), static_cast<std::size_t>(m));
        EXPECT_TRUE(d.connected());
        EXPECT_EQ(spanning_tree_count(d), m);
        EXPECT_TRUE(verify_cover(cover));
    }
}

TEST(DerivedGraph, RejectsNonInverseVoltage)
{
    auto g = FiniteAbelianGroup::cyclic(5);
    SerreGraph b = bouquet(1);
    VoltageAssignment bad{{1, 1}};
    EXPECT_THROW(derived_graph(b, bad, g), input_error);
}

TEST(DerivedGraph, CoversAndConnectivityCriterion)
{
    std::mt19937_64 rng(77);
    int connected = 0, disconnected = 0;
    for (int it = 0; it < 150; ++it) {
        SerreGraph x = random_multigraph(rng, 4, 5);
        if (!x.connected())
            continue;
        auto g = random_group(rng);
        auto a = random_voltage(x, g, rng);
        auto [d, cover] = derived_graph(x, a, g);
        EXPECT_EQ(d.vertex_count(), x.vertex_count() * g.size());
        EXPECT_TRUE(verify_cover(cover));
        const bool c = connectivity_criterion(x, a, g);
        EXPECT_EQ(c, d.connected());
        (c ? connected : disconnected)++;
    }
    EXPECT_GT(connected, 10);
    EXPECT_GT(disconnected, 10);
}

TEST(QuotientVoltage, ExplicitIsomorphismOnRandomInstances)
{
    std::mt19937_64 rng(31);
    int checked = 0;
    while (checked < 60) {
        SerreGraph x = random_multigraph(rng, 4, 6);
        auto g = random_group(rng);
        auto a = random_voltage(x, g, rng);
        std::vector<std::size_t> gens{rng() % g.size()};
        if (rng() % 2)
            gens.push_back(rng() % g.size());
        auto h = g.generated(gens);
        auto q = quotient_voltage(x, a, g, h);
        EXPECT_TRUE(q.verified);
        EXPECT_EQ(q.coset_reps.size() * h.size(), g.size());
        for (std::size_t v : q.beta.values)
            EXPECT_TRUE(std::binary_search(q.subgroup.begin(), q.subgroup.end(), v));
        ++checked;
    }
}

TEST(QuotientVoltage, RejectsNonSubgroup)
{
    auto g = FiniteAbelianGroup::cyclic(6);
    SerreGraph b = bouquet(1);
    auto a = reduce_integer_voltage(constant_voltage(b, 1), g);
    EXPECT_THROW(quotient_voltage(b, a, g, {0, 1}), input_error);
}

TEST(FiniteAbelianGroup, UnitsAndProducts)
{
    auto u = FiniteAbelianGroup::units(25);
    EXPECT_EQ(u.size(), 20u);
    auto gen = u.generated({u.index({2})});
    EXPECT_EQ(gen.size(), 20u);
    EXPECT_EQ(u.generated({u.index({24})}).size(), 2u);
    auto z = FiniteAbelianGroup::additive({2, 4});
    EXPECT_EQ(z.size(), 8u);
    for (std::size_t i = 0; i < z.size(); ++i)
        EXPECT_EQ(z.op(i, z.inv(i)), z.index({0, 0}));
}

TEST(PadicLog, FrozenValues)
{
    EXPECT_EQ(padic_log_scaled(11, 5, 1, 3), 17);
    EXPECT_EQ(padic_log_scaled(6, 5, 1, 4), 361);
    EXPECT_EQ(padic_log_scaled(31, 5, 1, 3), 91);
    EXPECT_EQ(padic_log_scaled(26, 5, 2, 3), 51);
    EXPECT_EQ(padic_log_scaled(7, 3, 1, 5), 74);
    EXPECT_EQ(padic_log_scaled(1, 7, 1, 5), 0);
    EXPECT_THROW(padic_log_scaled(12, 5, 1, 3), input_error);
    EXPECT_THROW(padic_log_unit(26, 5, 1, 3), input_error);
}

TEST(PadicLog, IsAHomomorphism)
{
    for (u64 p : {3, 5, 7}) {
        const bigint mod = ipow(p, 6);
        for (u64 a = 1; a < 60; a += p)
            for (u64 b = 1; b < 60; b += p) {
                bigint la = padic_log_scaled(a, p, 1, 6), lb = padic_log_scaled(b, p, 1, 6);
                EXPECT_EQ(padic_log_scaled(bigint(a) * b, p, 1, 6), mod_floor(la + lb, mod));
            }
    }
}

TEST(LevelStructure, ComponentCounts)
{
    struct Case {
        u64 r, ell, p;
        unsigned n;
        std::size_t components;
    };
    for (auto c : std::vector<Case>{{37, 11, 5, 1, 4}, {37, 11, 5, 2, 4}, {13, 7, 3, 1, 2}, {13, 7, 3, 3, 2},
                                    {37, 31, 5, 1, 4}, {37, 31, 5, 2, 4}, {13, 19, 3, 2, 6}, {13, 19, 3, 3, 6}}) {
        auto x = sig::build_dsig(sig::build_sig(c.r, static_cast<unsigned>(c.ell)));
        auto rep = level_structure_components(x, c.ell, c.p, c.n);
        EXPECT_EQ(rep.components, c.components) << c.r << " " << c.ell << " " << c.p << " " << c.n;
        EXPECT_EQ(rep.expected_components, c.components);
        EXPECT_TRUE(rep.components_isomorphic);
        EXPECT_EQ(rep.n0, level_n0(c.ell, c.p));
    }
}

TEST(LevelStructure, LevelZeroIsTheBaseGraph)
{
    auto x = sig::build_dsig(sig::build_sig(37, 11));
    auto [y, g] = level_structure_graph(x, 11, 5, 0);
    EXPECT_EQ(g.size(), 1u);
    EXPECT_EQ(y.edges(), x.edges());
    EXPECT_EQ(y.vertex_count(), x.vertex_count());
}

TEST(LevelStructure, EllNotOneModP)
{
    auto x = sig::build_dsig(sig::build_sig(37, 2));
    auto rep = level_structure_components(x, 2, 5, 1);
    EXPECT_EQ(rep.n0, 0u);
    EXPECT_EQ(rep.components, 1u);
    auto [y, g] = level_structure_graph(x, 2, 5, 2);
    EXPECT_TRUE(y.connected());
    EXPECT_THROW(level_structure_graph(x, 10, 5, 1), input_error);
}

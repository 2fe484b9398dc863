#include <ssig/iwasawa.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace ssig;
using namespace ssig::iwasawa;

namespace {

std::vector<unsigned> ords(const std::vector<LayerValuation> &seq)
{
    std::vector<unsigned> out;
    for (const auto &l : seq)
        out.push_back(l.ord);
    return out;
}

std::vector<LayerValuation> layers(unsigned n0, std::vector<unsigned> ord)
{
    std::vector<LayerValuation> out;
    for (unsigned v : ord)
        out.push_back({n0++, v});
    return out;
}

graph::SerreGraph dsig(u64 r, unsigned ell) { return sig::build_dsig(sig::build_sig(r, ell)); }

} // namespace

TEST(Series, InverseAndPowers)
{
    std::mt19937_64 rng(3);
    for (u64 p : {3, 5, 7}) {
        for (int it = 0; it < 20; ++it) {
            std::vector<bigint> c(10);
            for (auto &v : c)
                v = static_cast<i64>(rng() % 10000);
            if (c[0] % p == 0)
                c[0] += 1;
            auto f = PadicTruncSeries::from_coeffs(p, 6, 10, c);
            EXPECT_EQ(f * f.inverse(), PadicTruncSeries::constant(p, 6, 10, 1));
        }
        for (i64 a = -4; a <= 4; ++a)
            for (i64 b = -4; b <= 4; ++b)
                EXPECT_EQ(one_plus_T_pow(a, p, 5, 9) * one_plus_T_pow(b, p, 5, 9), one_plus_T_pow(a + b, p, 5, 9));
    }
    auto f = PadicTruncSeries::from_coeffs(5, 3, 4, {5, 1});
    EXPECT_THROW(f.inverse(), input_error);
}

TEST(Series, MuLambda)
{
    EXPECT_EQ(mu_lambda_of(PadicTruncSeries::from_coeffs(5, 6, 6, {25, 5, 1})), (MuLambda{0, 2}));
    EXPECT_EQ(mu_lambda_of(PadicTruncSeries::from_coeffs(5, 6, 6, {25, 5, 10})), (MuLambda{1, 1}));
    EXPECT_EQ(mu_lambda_of(PadicTruncSeries::from_coeffs(3, 6, 6, {0, 0, 0, 9})), (MuLambda{2, 3}));
    EXPECT_THROW(mu_lambda_of(PadicTruncSeries(5, 4, 6)), precision_error);
    EXPECT_THROW(mu_lambda_of(PadicTruncSeries::from_coeffs(5, 2, 6, {25})), precision_error);
}

TEST(Series, ToString)
{
    auto f = PadicTruncSeries::from_coeffs(5, 2, 3, {1, 0, 24});
    EXPECT_EQ(f.to_string(), "1 + 24*T^2 + O(T^3) (coeffs mod 5^2)");
}

TEST(CharacteristicElement, DoubleGraph37)
{
    auto x = dsig(37, 2);
    auto d = characteristic_element(x, graph::constant_voltage(x, 1), 5, 4, 8);
    std::vector<bigint> want{0, 0, 445, 180, 409, 252, 337, 324};
    EXPECT_EQ(d.coeffs(), want);
    auto cp = spectra::charpoly_adjacency(sig::build_sig(37, 2).adjacency);
    EXPECT_EQ(charpoly_identity_series(cp, 2, 5, 4, 8), d);
    EXPECT_EQ(delta_product({3, -2, 0}, 2, 5, 4, 8), d);
    EXPECT_EQ(mu_lambda_of(d), (MuLambda{0, 4}));
}

TEST(CharacteristicElement, IdentityHoldsAcrossGraphs)
{
    for (u64 r : {13, 37, 61, 73})
        for (unsigned ell : {2u, 3u, 5u, 7u})
            for (u64 p : {3, 5, 7}) {
                if (p == r || p == ell)
                    continue;
                auto g = sig::build_sig(r, ell);
                auto x = sig::build_dsig(g);
                const unsigned K = 2 * static_cast<unsigned>(g.size()) + 4;
                auto d = characteristic_element(x, graph::constant_voltage(x, 1), p, 8, K);
                EXPECT_EQ(charpoly_identity_series(spectra::charpoly_adjacency(g.adjacency), ell, p, 8, K), d)
                    << r << " " << ell << " " << p;
            }
}

TEST(CharacteristicElement, ZeroAtLowPrecision)
{
    auto x = dsig(37, 2);
    EXPECT_THROW(characteristic_element(x, graph::constant_voltage(x, 1), 5, 1, 2), precision_error);
    EXPECT_THROW(delta_factor(2, 1, 2, 4, 4), input_error);
}

TEST(Valuation, MatchesExactDeterminant)
{
    std::mt19937_64 rng(41);
    for (int it = 0; it < 200; ++it) {
        const std::size_t n = 1 + rng() % 8;
        IntMatrix a(n, std::vector<i64>(n));
        for (auto &row : a)
            for (auto &v : row)
                v = static_cast<i64>(rng() % 61) - 30;
        // push some valuation in
        const u64 p = std::vector<u64>{2, 3, 5, 7, 101}[rng() % 5];
        if (rng() % 2)
            for (auto &v : a[0])
                v *= static_cast<i64>(p * p);
        const bigint det = det_bareiss(a);
        if (det == 0)
            continue;
        ValuationOptions opt;
        opt.initial_B = 1 + static_cast<unsigned>(rng() % 3);
        EXPECT_EQ(det_valuation(a, p, opt), valuation(det, p));
    }
}

TEST(Valuation, SingularMatrixExhaustsPrecision)
{
    ValuationOptions opt;
    opt.max_B = 64;
    EXPECT_THROW(det_valuation({{1, 2}, {2, 4}}, 3, opt), precision_error);
}

TEST(Tower, DoubleGraph37AtFive)
{
    auto x = dsig(37, 2);
    auto seq = ordp_complexity_sequence(x, graph::constant_voltage(x, 1), 5, 2, 0);
    EXPECT_EQ(ords(seq), (std::vector<unsigned>{1, 4, 7}));
    EXPECT_EQ(valuation(graph::spanning_tree_count(x), 5), 1u);
    auto fit = fit_iwasawa(seq, 5);
    EXPECT_EQ(fit.mu, 0);
    EXPECT_EQ(fit.lambda, 3);
    EXPECT_EQ(fit.nu, 1);
    EXPECT_FALSE(fit.nu_stable);
}

TEST(Tower, DoubleGraph37AtThreeHasPositiveMu)
{
    // 3 | l + 1 for l = 2: outside the hypothesis of the lambda formula
    auto x = dsig(37, 2);
    auto seq = ordp_complexity_sequence(x, graph::constant_voltage(x, 1), 3, 3, 0);
    EXPECT_EQ(ords(seq), (std::vector<unsigned>{0, 5, 18, 55}));
    auto fit = fit_iwasawa(seq, 3);
    EXPECT_EQ(fit.mu, 2);
    EXPECT_EQ(fit.lambda, 1);
    EXPECT_EQ(fit.nu, -2);
    EXPECT_EQ(fit.n_stable, 0u);
    EXPECT_TRUE(fit.nu_stable);
}

TEST(Tower, Level13)
{
    auto x = dsig(13, 7);
    auto alpha = graph::constant_voltage(x, 1);
    auto seq = ordp_complexity_sequence(x, alpha, 3, 4, 1);
    EXPECT_EQ(ords(seq), (std::vector<unsigned>{1, 2, 3, 4}));
    auto fit = fit_iwasawa(seq, 3);
    EXPECT_EQ(fit.mu, 0);
    EXPECT_EQ(fit.lambda, 1);
    EXPECT_EQ(fit.nu, 0);
    EXPECT_EQ(fit.n_stable, 1u);
    EXPECT_TRUE(fit.nu_stable);
    // kappa(X_n) = 3^n 8^(3^n - 1) for this bouquet of 8 loops
    for (unsigned n = 1; n <= 2; ++n) {
        auto g = graph::FiniteAbelianGroup::cyclic(static_cast<i64>(ipow(3, n)));
        auto [xn, cover] = graph::derived_graph(x, graph::reduce_integer_voltage(alpha, g), g);
        EXPECT_EQ(graph::spanning_tree_count(xn), ipow(3, n) * ipow(8, static_cast<unsigned>(ipow(3, n)) - 1));
    }
}

TEST(Fit, SyntheticSequences)
{
    // 2*5^n + 3n + 1 from n = 0
    auto f = fit_iwasawa(layers(0, {3, 14, 57, 260}), 5);
    EXPECT_EQ(f.mu, 2);
    EXPECT_EQ(f.lambda, 3);
    EXPECT_EQ(f.nu, 1);
    EXPECT_TRUE(f.nu_stable);
    // irregular start: stable from n = 1
    auto g = fit_iwasawa(layers(0, {7, 3, 5, 7, 9}), 3);
    EXPECT_EQ(g.mu, 0);
    EXPECT_EQ(g.lambda, 2);
    EXPECT_EQ(g.nu, 1);
    EXPECT_EQ(g.n_stable, 1u);
    EXPECT_THROW(fit_iwasawa(layers(0, {2, 9, 14}), 3), input_error);
    EXPECT_THROW(fit_iwasawa(layers(0, {1, 2}), 3), input_error);
    EXPECT_THROW(fit_iwasawa({{0, 1}, {2, 2}, {3, 3}}, 3), input_error);
}

TEST(Invariants, Examples)
{
    InvariantOptions opt;
    opt.n_max = 2;
    auto a = lambda_invariant(37, 11, 5, opt);
    EXPECT_EQ(a.lambda_ell, 1);
    EXPECT_EQ(a.mu, 0u);
    EXPECT_TRUE(a.routes_agree);
    EXPECT_TRUE(a.factorization_identity);
    ASSERT_TRUE(a.fit.has_value());
    EXPECT_EQ(a.fit->lambda, 1);

    opt.n_max = 3;
    auto b = lambda_invariant(13, 7, 3, opt);
    EXPECT_EQ(b.lambda_ell, 1);
    EXPECT_EQ(b.mu, 0u);
    EXPECT_TRUE(b.routes_agree);
    ASSERT_TRUE(b.fit.has_value());
    EXPECT_TRUE(b.fit->nu_stable);
}

TEST(Invariants, Hypotheses)
{
    EXPECT_THROW(lambda_invariant(37, 19, 5), input_error);
    EXPECT_THROW(lambda_invariant(37, 11, 2), input_error);
    EXPECT_THROW(lambda_invariant(37, 11, 37), input_error);
    EXPECT_THROW(lambda_invariant(37, 11, 9), input_error);
    EXPECT_THROW(lambda_from_charpoly({1, 1}, 2, 3), input_error);
}

TEST(Invariants, PreStableTowerIsNotADisagreement)
{
    InvariantOptions opt;
    opt.n_max = 2;
    auto rep = lambda_invariant(37, 43, 3, opt);
    EXPECT_EQ(rep.lambda_ell, 5);
    EXPECT_EQ(ords(rep.tower), (std::vector<unsigned>{2, 9, 14}));
    EXPECT_FALSE(rep.fit.has_value());
    EXPECT_FALSE(rep.fit_error.empty());
    EXPECT_TRUE(rep.routes_agree);
}

TEST(Invariants, FrozenLambdaTables37)
{
    // from a_l of the two level-37 newforms by point counting
    const std::map<u64, std::vector<std::pair<unsigned, i64>>> table = {
        {3, {{7, 5},   {13, 3},  {19, 3},  {31, 5},  {43, 5},  {61, 3},  {67, 5},  {73, 5},  {79, 3},
             {97, 3},  {103, 3}, {109, 5}, {127, 3}, {139, 3}, {151, 3}, {157, 5}, {163, 3}, {181, 5},
             {193, 3}, {199, 5}, {211, 5}, {223, 3}, {229, 3}, {241, 5}, {271, 5}, {277, 3}, {283, 3}}},
        {7, {{29, 1}, {43, 3}, {71, 3}, {113, 1}, {127, 1}, {197, 1}, {211, 1}, {239, 1}, {281, 1}}},
    };
    for (const auto &[p, rows] : table)
        for (auto [ell, lam] : rows) {
            auto rep = lambda_invariant(37, ell, p);
            EXPECT_EQ(rep.lambda_ell, lam) << "ell=" << ell << " p=" << p;
            EXPECT_EQ(rep.mu, 0u);
            EXPECT_TRUE(rep.routes_agree);
        }
}

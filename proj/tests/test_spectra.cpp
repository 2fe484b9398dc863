#include <ssig/isogeny_graph.hpp>
#include <ssig/spectra.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace ssig;
using namespace ssig::spectra;

namespace ssig::spectra {
inline void PrintTo(const IntPolynomial &f, std::ostream *os) { *os << f.to_string(); }
} // namespace ssig::spectra

namespace {

// Cyclic Jacobi eigenvalue iteration for a real symmetric matrix.
std::vector<double> jacobi_eigenvalues(const IntMatrix &a)
{
    const std::size_t n = a.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m[i][j] = static_cast<double>(a[i][j]);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                off += m[i][j] * m[i][j];
        if (off < 1e-22)
            break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(m[p][q]) < 1e-300)
                    continue;
                const double theta = (m[q][q] - m[p][p]) / (2 * m[p][q]);
                const double t = (theta >= 0 ? 1 : -1) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double kp = m[k][p], kq = m[k][q];
                    m[k][p] = c * kp - s * kq;
                    m[k][q] = s * kp + c * kq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double pk = m[p][k], qk = m[q][k];
                    m[p][k] = c * pk - s * qk;
                    m[q][k] = s * pk + c * qk;
                }
            }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i)
        ev[i] = m[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

// Numeric form of the Deligne check: l+1 simple, all other eigenvalues in [-2 sqrt l, 2 sqrt l].
std::optional<bool> numeric_deligne(const IntMatrix &a, i64 ell)
{
    const double eis = static_cast<double>(ell + 1), bound = 2 * std::sqrt(static_cast<double>(ell));
    int at_eis = 0;
    bool ok = true;
    for (double v : jacobi_eigenvalues(a)) {
        if (std::abs(v - eis) < 1e-6) {
            ++at_eis;
            continue;
        }
        if (std::abs(std::abs(v) - bound) < 1e-6)
            return std::nullopt; // too close to call numerically
        ok = ok && std::abs(v) < bound;
    }
    return ok && at_eis == 1;
}

IntMatrix random_symmetric(std::mt19937_64 &rng, std::size_t n, i64 lo, i64 hi)
{
    IntMatrix a(n, std::vector<i64>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            a[i][j] = a[j][i] = lo + static_cast<i64>(rng() % static_cast<u64>(hi - lo + 1));
    return a;
}

} // namespace

TEST(Charpoly, GoldenSpectra37)
{
    auto a2 = sig::build_sig(37, 2).adjacency;
    EXPECT_EQ(charpoly_adjacency(a2), poly_from_roots({0, -2, 3}));
    EXPECT_EQ(charpoly_adjacency(a2).to_string(), "T^3 - T^2 - 6*T");
    auto a3 = sig::build_sig(37, 3).adjacency;
    EXPECT_EQ(charpoly_adjacency(a3), poly_from_roots({4, -3, 1}));
}

TEST(Charpoly, ModPMatchesExactReduction)
{
    std::mt19937_64 rng(13);
    for (int it = 0; it < 100; ++it) {
        const std::size_t n = 1 + rng() % 9;
        auto a = random_symmetric(rng, n, -20, 20);
        if (rng() % 2)
            a[0][n - 1] += 3; // non-symmetric as well
        const auto cp = charpoly_adjacency(a);
        EXPECT_TRUE(cayley_hamilton_holds(a, cp));
        for (u64 p : {2, 3, 5, 7, 101, 1000003})
            EXPECT_EQ(charpoly_mod_p(a, p), reduce_mod_p(cp, p)) << "p=" << p;
    }
}

TEST(Charpoly, TraceAndDeterminant)
{
    std::mt19937_64 rng(17);
    for (int it = 0; it < 50; ++it) {
        const std::size_t n = 1 + rng() % 7;
        auto a = random_symmetric(rng, n, -9, 9);
        auto cp = charpoly_adjacency(a);
        ASSERT_EQ(cp.c.size(), n + 1);
        EXPECT_EQ(cp.c[n], 1);
        bigint tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            tr += a[i][i];
        EXPECT_EQ(cp.c[n - 1], -tr);
        EXPECT_EQ(cp.c[0], (n % 2 ? -1 : 1) * det_bareiss(a));
    }
}

TEST(Spectrum, EisensteinAndConnectedness)
{
    for (unsigned ell : {2u, 3u, 5u, 7u}) {
        auto a = sig::build_sig(61, ell).adjacency;
        EXPECT_TRUE(eisenstein_check(a, ell));
        EXPECT_TRUE(connectedness_via_spectrum(a, ell));
        EXPECT_EQ(root_multiplicity(charpoly_adjacency(a), ell + 1), 1u);
    }
    // two disjoint copies of SI(37, 2): ell+1 = 3 has multiplicity 2
    IntMatrix d(6, std::vector<i64>(6, 0));
    auto a = sig::build_sig(37, 2).adjacency;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            d[i][j] = d[i + 3][j + 3] = a[i][j];
    EXPECT_TRUE(eisenstein_check(d, 2));
    EXPECT_FALSE(connectedness_via_spectrum(d, 2));
    EXPECT_FALSE(deligne_bound_check(d, 2));
}

TEST(Spectrum, DeligneMatchesNumericOracle)
{
    for (u64 r : {37, 61, 73, 97, 109, 157})
        for (unsigned ell : {2u, 3u, 5u, 7u, 11u, 13u}) {
            auto a = sig::build_sig(r, ell).adjacency;
            EXPECT_TRUE(deligne_bound_check(a, ell));
            auto num = numeric_deligne(a, ell);
            if (num)
                EXPECT_TRUE(*num);
        }
    std::mt19937_64 rng(99);
    int agree = 0, pass = 0, fail = 0;
    for (int it = 0; it < 400; ++it) {
        const std::size_t n = 2 + rng() % 5;
        const i64 ell = std::vector<i64>{2, 3, 5, 7}[rng() % 4];
        // symmetric with constant row sums ell + 1
        IntMatrix a(n, std::vector<i64>(n, 0));
        for (int k = 0; k < 2 * static_cast<int>(n); ++k) {
            std::size_t i = rng() % n, j = rng() % n;
            a[i][j] += 1;
            a[j][i] += 1;
        }
        i64 maxrow = 0;
        for (auto &row : a)
            maxrow = std::max<i64>(maxrow, std::accumulate(row.begin(), row.end(), i64(0)));
        if (maxrow > ell + 1)
            continue;
        for (std::size_t i = 0; i < n; ++i)
            a[i][i] += ell + 1 - std::accumulate(a[i].begin(), a[i].end(), i64(0));
        auto num = numeric_deligne(a, ell);
        if (!num)
            continue;
        const bool exact = deligne_bound_check(a, ell);
        EXPECT_EQ(exact, *num) << ::testing::PrintToString(a) << " ell=" << ell;
        ++agree;
        (exact ? pass : fail)++;
    }
    EXPECT_GT(agree, 50);
    EXPECT_GT(pass, 5);
    EXPECT_GT(fail, 5);
}

TEST(Spectrum, DescartesAgreesWithSturm)
{
    std::mt19937_64 rng(5);
    int pass = 0, fail = 0;
    for (int it = 0; it < 300; ++it) {
        const std::size_t n = 1 + rng() % 8;
        const i64 ell = std::vector<i64>{2, 3, 5, 7, 11}[rng() % 5];
        const auto a = random_symmetric(rng, n, -4, 4);
        const auto g = charpoly_adjacency(a);
        const bool d = detail::deligne_descartes(g, ell);
        EXPECT_EQ(d, detail::deligne_sturm(g, ell)) << ::testing::PrintToString(a) << " ell=" << ell;
        (d ? pass : fail)++;
    }
    EXPECT_GT(pass, 20);
    EXPECT_GT(fail, 20);
    // roots exactly at the bound are allowed
    EXPECT_TRUE(detail::deligne_descartes(poly_from_roots({2, -2, 0}), 1));
    EXPECT_TRUE(detail::deligne_sturm(poly_from_roots({2, -2, 0}), 1));
    EXPECT_FALSE(detail::deligne_descartes(poly_from_roots({3, 0, 0}), 2));
}

TEST(Spectrum, MultiplicityModP)
{
    // (T - 4)(T + 3)(T - 1) mod 7: 4 and -3 coincide
    auto cp = poly_from_roots({4, -3, 1});
    EXPECT_EQ(multiplicity_mod_p(cp, 4, 7), 2u);
    EXPECT_EQ(multiplicity_mod_p(cp, 1, 7), 1u);
    EXPECT_EQ(multiplicity_mod_p(cp, 2, 7), 0u);
    EXPECT_EQ(multiplicity_mod_p(cp, 4, 5), 1u);
    EXPECT_EQ(multiplicity_mod_p(poly_from_roots({2, 2, 2, 9}), 2, 7), 4u);
}

TEST(Spectrum, NewformCrosscheck37)
{
    for (unsigned ell : {2u, 3u, 5u, 7u, 11u})
        EXPECT_TRUE(newform_crosscheck(sig::build_sig(37, ell).adjacency, ell)) << ell;
    EXPECT_FALSE(newform_crosscheck(sig::build_sig(37, 3).adjacency, 2));
    EXPECT_THROW(newform_crosscheck(sig::build_sig(37, 13).adjacency, 13), input_error);
}

TEST(Orbits, AdmissibleSets)
{
    EXPECT_EQ(admissible_lambdas({}), (std::vector<unsigned>{1}));
    EXPECT_EQ(admissible_lambdas({1, 1}), (std::vector<unsigned>{1, 3, 5}));
    EXPECT_EQ(admissible_lambdas({1, 3}), (std::vector<unsigned>{1, 3, 7, 9}));
    EXPECT_EQ(admissible_lambdas({1, 2, 2}), (std::vector<unsigned>{1, 3, 5, 7, 9, 11}));
}

TEST(Orbits, ShippedTable)
{
    EXPECT_TRUE(table1_transcription_mismatches().empty());
    auto p37 = shipped_profile(37);
    ASSERT_TRUE(p37.has_value());
    EXPECT_EQ(p37->sizes, (std::vector<unsigned>{1, 1}));
    auto p13 = shipped_profile(13);
    ASSERT_TRUE(p13.has_value());
    EXPECT_TRUE(p13->sizes.empty());
    EXPECT_FALSE(shipped_profile(41).has_value());
    for (const auto &row : table1_rows()) {
        EXPECT_NO_THROW(check_profile({row.r, row.sizes, "table1"}));
        EXPECT_EQ(row.printed.front(), 1u);
    }
    EXPECT_EQ(table1_rows().size(), 70u);
}

TEST(Orbits, ProfilesAreChecked)
{
    EXPECT_THROW(check_profile({37, {1}, "t"}), input_error);
    EXPECT_THROW(check_profile({41, {2}, "t"}), input_error);
    EXPECT_THROW(check_profile({37, {0, 2}, "t"}), input_error);
}

TEST(Orbits, Level61OrbitSizesFromCharpoly)
{
    // charpoly of SI(61, 2) / (T - 3) factors as linear * irreducible cubic over Q
    auto cp = charpoly_adjacency(sig::build_sig(61, 2).adjacency);
    auto g = divide_linear(cp, 3);
    ASSERT_TRUE(g.has_value());
    EXPECT_EQ(g->c.size(), 5u);
    int integer_roots = 0;
    for (i64 v = -3; v <= 3; ++v)
        integer_roots += static_cast<int>(root_multiplicity(*g, v));
    EXPECT_EQ(integer_roots, 1);
}

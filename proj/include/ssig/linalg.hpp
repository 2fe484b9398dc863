#pragma once

// Exact integer linear algebra.

#include "common.hpp"

#include <functional>
#include <optional>

namespace ssig {

using BigMatrix = std::vector<std::vector<bigint>>;

inline BigMatrix to_big(const IntMatrix &a)
{
    BigMatrix m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        m[i].assign(a[i].begin(), a[i].end());
    return m;
}

// Fraction-free Gaussian elimination (Bareiss).
inline bigint det_bareiss(BigMatrix m)
{
    const std::size_t n = m.size();
    if (n == 0)
        return 1;
    bigint prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t s = k + 1;
            while (s < n && m[s][k] == 0)
                ++s;
            if (s == n)
                return 0;
            std::swap(m[s], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

inline bigint det_bareiss(const IntMatrix &a) { return det_bareiss(to_big(a)); }

inline IntMatrix identity_matrix(std::size_t n, i64 scale = 1)
{
    IntMatrix m(n, std::vector<i64>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        m[i][i] = scale;
    return m;
}

inline bool is_symmetric(const IntMatrix &a)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (a[i][j] != a[j][i])
                return false;
    return true;
}

inline IntMatrix permute(const IntMatrix &a, const std::vector<std::size_t> &perm)
{
    // result[perm[i]][perm[j]] = a[i][j]
    IntMatrix m(a.size(), std::vector<i64>(a.size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            m[perm[i]][perm[j]] = a[i][j];
    return m;
}

// A permutation perm with b[m][perm[i]][perm[j]] = a[m][i][j] for every m, if any.
inline std::optional<std::vector<std::size_t>> find_permutation(const std::vector<IntMatrix> &a,
                                                                const std::vector<IntMatrix> &b)
{
    if (a.size() != b.size() || a.empty())
        return std::nullopt;
    const std::size_t n = a[0].size();
    for (std::size_t m = 0; m < a.size(); ++m)
        if (a[m].size() != n || b[m].size() != n)
            return std::nullopt;
    std::vector<std::size_t> perm(n, 0);
    std::vector<bool> used(n, false);
    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
        if (i == n)
            return true;
        for (std::size_t c = 0; c < n; ++c) {
            if (used[c])
                continue;
            bool ok = true;
            for (std::size_t m = 0; m < a.size() && ok; ++m) {
                ok = a[m][i][i] == b[m][c][c];
                for (std::size_t k = 0; k < i && ok; ++k)
                    ok = a[m][i][k] == b[m][c][perm[k]] && a[m][k][i] == b[m][perm[k]][c];
            }
            if (!ok)
                continue;
            used[c] = true;
            perm[i] = c;
            if (go(i + 1))
                return true;
            used[c] = false;
        }
        return false;
    };
    if (!go(0))
        return std::nullopt;
    return perm;
}

// True if some simultaneous row/column permutation maps a to b.
inline bool equal_up_to_permutation(const IntMatrix &a, const IntMatrix &b)
{
    if (a.size() != b.size())
        return false;
    if (a.empty())
        return true;
    return find_permutation({a}, {b}).has_value();
}

} // namespace ssig

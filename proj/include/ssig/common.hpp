#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace ssig {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

using IntMatrix = std::vector<std::vector<i64>>;

// Bad caller input: non-prime moduli, violated hypotheses, caps.
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A computed object failed a property that must hold.  Always a bug.
struct invariant_error : std::logic_error {
    using std::logic_error::logic_error;
};

// Result not certifiable at the requested precision.
struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string &msg)
{
    if (!ok)
        throw input_error(msg);
}

inline void ensure(bool ok, const std::string &msg)
{
    if (!ok)
        throw invariant_error(msg);
}

inline u64 mulmod(u64 a, u64 b, u64 m)
{
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

inline u64 powmod(u64 b, u64 e, u64 m)
{
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1)
            r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

inline u64 invmod(u64 a, u64 m)
{
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
    while (nr) {
        i64 q = r / nr;
        std::tie(t, nt) = std::pair{nt, t - q * nt};
        std::tie(r, nr) = std::pair{nr, r - q * nr};
    }
    if (r != 1)
        throw input_error("invmod: " + std::to_string(a) + " not invertible mod " + std::to_string(m));
    return static_cast<u64>(t < 0 ? t + static_cast<i64>(m) : t);
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(u64 n)
{
    if (n < 2)
        return false;
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0)
            return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while (!(d & 1)) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool comp = true;
        for (int i = 1; i < s && comp; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1)
                comp = false;
        }
        if (comp)
            return false;
    }
    return true;
}

inline std::vector<u64> primes_up_to(u64 n)
{
    std::vector<bool> sieve(n + 1, true);
    std::vector<u64> out;
    for (u64 i = 2; i <= n; ++i) {
        if (!sieve[i])
            continue;
        out.push_back(i);
        for (u64 j = i * i; j <= n; j += i)
            sieve[j] = false;
    }
    return out;
}

// p-adic valuation of a nonzero integer.
inline unsigned valuation(bigint x, u64 p)
{
    if (x == 0)
        throw input_error("valuation of zero");
    unsigned v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

inline bigint ipow(u64 b, unsigned e)
{
    bigint r = 1;
    for (unsigned i = 0; i < e; ++i)
        r *= b;
    return r;
}

// Nonnegative residue of x modulo m.
inline bigint mod_floor(const bigint &x, const bigint &m)
{
    bigint r = x % m;
    return r < 0 ? r + m : r;
}

} // namespace ssig

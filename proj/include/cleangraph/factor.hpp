#pragma once

// Integer utilities: 64-bit modular arithmetic, deterministic primality,
// factorization (trial division + Pollard rho), a smallest-prime-factor
// sieve for bulk range sweeps, and a deterministic sampling RNG.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cleangraph {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = m == 1 ? 0 : 1;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for 64-bit inputs; the listed bases decide
// primality exactly for all n < 2^64.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull,
                            19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull,
                            19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// Deterministic xorshift-style mixer; used both as the sampling RNG and as
// the iteration function salt for Pollard rho.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace detail {

inline std::uint64_t pollard_rho(std::uint64_t n) {
    if ((n & 1) == 0) return 2;
    std::uint64_t seed = n ^ 0xc3a5c85c97cb3127ull;
    while (true) {
        std::uint64_t c = splitmix64(seed) % (n - 1) + 1;
        std::uint64_t x = splitmix64(seed) % n;
        std::uint64_t y = x;
        std::uint64_t d = 1;
        auto step = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            if (x == y) break;  // cycle without a factor; retry with new c
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != 1 && d != n) return d;
    }
}

inline void factor_rec(std::uint64_t n, std::vector<std::uint64_t>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.push_back(n);
        return;
    }
    std::uint64_t d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace detail

// Prime-power decomposition with strictly increasing primes.
inline std::vector<std::pair<std::uint64_t, std::uint32_t>> factorize(
    std::uint64_t n) {
    if (n <= 1) {
        throw std::invalid_argument("factorize: input must be >= 2, got " +
                                    std::to_string(n));
    }
    std::vector<std::uint64_t> primes;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        while (n % p == 0) {
            primes.push_back(p);
            n /= p;
        }
    }
    if (n > 1) detail::factor_rec(n, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
    for (std::uint64_t p : primes) {
        if (!out.empty() && out.back().first == p) {
            ++out.back().second;
        } else {
            out.emplace_back(p, 1u);
        }
    }
    return out;
}

// Smallest-prime-factor sieve; spf[i] = least prime dividing i (i >= 2).
inline std::vector<std::uint32_t> spf_sieve(std::uint32_t limit) {
    std::vector<std::uint32_t> spf(limit + 1, 0);
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (spf[i] == 0) {
            for (std::uint64_t j = i; j <= limit; j += i) {
                if (spf[j] == 0) spf[j] = i;
            }
        }
    }
    return spf;
}

inline std::vector<std::pair<std::uint64_t, std::uint32_t>> factorize_with_spf(
    std::uint32_t n, const std::vector<std::uint32_t>& spf) {
    if (n <= 1 || n >= spf.size()) {
        throw std::invalid_argument("factorize_with_spf: input out of range");
    }
    std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
    while (n > 1) {
        std::uint32_t p = spf[n];
        std::uint32_t a = 0;
        while (n % p == 0) {
            n /= p;
            ++a;
        }
        out.emplace_back(p, a);
    }
    return out;
}

}  // namespace cleangraph

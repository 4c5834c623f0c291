#pragma once

// Brute-force reference implementations. Nothing here touches the sieve or
// the matcher; everything is trial division and exhaustive search.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

namespace oracle {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> primes_upto(std::uint64_t x) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 2; n <= x; ++n)
        if (is_prime(n)) out.push_back(n);
    return out;
}

inline std::uint64_t pi(std::uint64_t x) { return primes_upto(x).size(); }

// Distinct prime divisors, ascending.
inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

inline std::uint64_t multiplicity(std::uint64_t n, std::uint64_t p) {
    std::uint64_t e = 0;
    while (n % p == 0) { n /= p; ++e; }
    return e;
}

inline std::uint64_t largest_prime_factor(std::uint64_t n) {
    auto d = prime_divisors(n);
    return d.empty() ? 1 : d.back();
}

// 1 is smooth for every y (no prime factors at all).
inline bool is_smooth(std::uint64_t n, double y) {
    return n == 1 || static_cast<double>(largest_prime_factor(n)) <= y;
}

inline std::uint64_t psi(std::uint64_t x, double y) {
    std::uint64_t c = 0;
    for (std::uint64_t n = 1; n <= x; ++n) c += is_smooth(n, y);
    return c;
}

// Exhaustive backtracking search for a system of distinct representatives.
inline bool has_sdr(const std::vector<std::vector<std::uint64_t>>& sets) {
    std::set<std::uint64_t> used;
    std::function<bool(std::size_t)> go = [&](std::size_t i) {
        if (i == sets.size()) return true;
        for (std::uint64_t p : sets[i]) {
            if (used.count(p)) continue;
            used.insert(p);
            if (go(i + 1)) return true;
            used.erase(p);
        }
        return false;
    };
    return go(0);
}

inline bool representable(std::uint64_t n, std::uint64_t k) {
    std::vector<std::vector<std::uint64_t>> sets;
    for (std::uint64_t i = 1; i <= k; ++i) sets.push_back(prime_divisors(n + i));
    return has_sdr(sets);
}

inline std::uint64_t g(std::uint64_t n) {
    std::vector<std::vector<std::uint64_t>> sets;
    for (std::uint64_t k = 1;; ++k) {
        sets.push_back(prime_divisors(n + k));
        if (!has_sdr(sets)) return k - 1;
    }
}

// Prefix-union scan: largest k with |union of prime sets of n+1..n+l| >= l for all l <= k.
inline std::uint64_t g1(std::uint64_t n) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t l = 1;; ++l) {
        for (auto p : prime_divisors(n + l)) seen.insert(p);
        if (seen.size() < l) return l - 1;
    }
}

} // namespace oracle

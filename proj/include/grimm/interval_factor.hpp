#pragma once

// Distinct prime divisors of every element of a window n+1, ..., n+k,
// found by sieving with the primes up to sqrt(n+k). Whatever survives the
// sieve is a single prime and gets appended last.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "grimm/primes.hpp"

namespace grimm {

class IntervalFactorization {
public:
    static constexpr std::uint64_t max_length = 1'000'000;

    IntervalFactorization() = default;

    std::uint64_t n() const noexcept { return n_; }
    std::uint64_t k() const noexcept { return k_; }

    // Offsets are 1-based: offset i refers to n + i.
    std::span<const std::uint64_t> prime_set(std::uint64_t offset) const {
        check(offset);
        return {primes_.data() + starts_[offset - 1], primes_.data() + starts_[offset]};
    }

    std::uint64_t largest_prime_factor(std::uint64_t offset) const {
        check(offset);
        return starts_[offset] == starts_[offset - 1] ? 1 : primes_[starts_[offset] - 1];
    }

    std::uint64_t value(std::uint64_t offset) const {
        check(offset);
        return n_ + offset;
    }

private:
    friend IntervalFactorization factor_interval(std::uint64_t, std::uint64_t, const PrimeTable&);

    void check(std::uint64_t offset) const {
        if (offset < 1 || offset > k_)
            throw std::out_of_range("offset " + std::to_string(offset) + " outside [1, " +
                                    std::to_string(k_) + "]");
    }

    std::uint64_t n_ = 0;
    std::uint64_t k_ = 0;
    std::vector<std::uint64_t> primes_;  // concatenated sorted sets
    std::vector<std::size_t> starts_;    // k+1 boundaries into primes_
};

inline IntervalFactorization factor_interval(std::uint64_t n, std::uint64_t k, const PrimeTable& table) {
    if (n < 1) throw std::invalid_argument("factor_interval: n must be >= 1");
    if (k < 1) throw std::invalid_argument("factor_interval: k must be >= 1");
    if (k > IntervalFactorization::max_length)
        throw std::invalid_argument("factor_interval: window length " + std::to_string(k) +
                                    " exceeds " + std::to_string(IntervalFactorization::max_length));
    if (n > std::numeric_limits<std::uint64_t>::max() / 2 - k)
        throw std::overflow_error("factor_interval: n + k too large");
    const std::uint64_t top = n + k;
    const std::uint64_t root = isqrt(top);
    table.require(root);

    std::vector<std::uint64_t> residual(k);
    for (std::uint64_t i = 0; i < k; ++i) residual[i] = n + 1 + i;
    std::vector<std::uint32_t> hits(k, 0);

    // First pass: strip small primes, count distinct hits.
    table.for_each_prime(2, root, [&](std::uint64_t p) {
        std::uint64_t first = (n + 1 + p - 1) / p * p;
        for (std::uint64_t m = first; m <= top; m += p) {
            std::uint64_t i = m - n - 1;
            ++hits[i];
            std::uint64_t r = residual[i] / p;
            while (r % p == 0) r /= p;
            residual[i] = r;
        }
    });

    IntervalFactorization f;
    f.n_ = n;
    f.k_ = k;
    f.starts_.resize(k + 1);
    f.starts_[0] = 0;
    for (std::uint64_t i = 0; i < k; ++i)
        f.starts_[i + 1] = f.starts_[i] + hits[i] + (residual[i] > 1 ? 1 : 0);
    f.primes_.resize(f.starts_[k]);

    // Second pass: fill sets in increasing prime order.
    std::vector<std::size_t> cursor(f.starts_.begin(), f.starts_.end() - 1);
    table.for_each_prime(2, root, [&](std::uint64_t p) {
        std::uint64_t first = (n + 1 + p - 1) / p * p;
        for (std::uint64_t m = first; m <= top; m += p) f.primes_[cursor[m - n - 1]++] = p;
    });
    for (std::uint64_t i = 0; i < k; ++i)
        if (residual[i] > 1) f.primes_[cursor[i]++] = residual[i];
    return f;
}

// Entry l-1 is the number of distinct primes dividing (n+1)...(n+l).
inline std::vector<std::uint64_t> omega_prefix(const IntervalFactorization& f) {
    std::vector<std::uint64_t> out;
    out.reserve(f.k());
    std::unordered_set<std::uint64_t> seen;
    for (std::uint64_t l = 1; l <= f.k(); ++l) {
        for (std::uint64_t p : f.prime_set(l)) seen.insert(p);
        out.push_back(seen.size());
    }
    return out;
}

// Every prime factor of n + offset is <= y.
inline bool is_smooth(const IntervalFactorization& f, std::uint64_t offset, double y) {
    return static_cast<double>(f.largest_prime_factor(offset)) <= y;
}

} // namespace grimm

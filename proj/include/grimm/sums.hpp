#pragma once

// Prime counts over the scaled windows (x/j, (x + x^alpha)/j], j <= x^alpha,
// and the floor-difference and sawtooth sums that appear when such counts
// are attacked with a sieve.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grimm/parallel.hpp"
#include "grimm/primes.hpp"

namespace grimm {

// floor(x^alpha), snapping to the nearest integer when x^alpha is within
// relative 1e-12 of it (so 100^0.5 gives 10, not 9).
inline std::uint64_t floor_power(std::uint64_t x, double alpha) {
    long double v = std::pow(static_cast<long double>(x), static_cast<long double>(alpha));
    long double r = std::nearbyint(v);
    if (std::fabs(v - r) <= 1e-12L * std::max<long double>(1.0L, v)) return static_cast<std::uint64_t>(r);
    return static_cast<std::uint64_t>(std::floor(v));
}

struct RamSumResult {
    std::uint64_t x = 0;
    double alpha = 0.0;
    std::uint64_t sum = 0;
    double normalized = 0.0;  // sum / x^alpha
    double heuristic = 0.0;   // -log(1 - alpha)
    std::optional<double> delta_target;
};

// S = sum_{j <= x^alpha} [pi((x + x^alpha)/j) - pi(x/j)], with exact pi.
inline RamSumResult ram_sum(std::uint64_t x, double alpha, const PrimeTable& table, unsigned workers = 1) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ram_sum: alpha must lie in (0, 1)");
    if (x < 1) throw std::invalid_argument("ram_sum: x must be >= 1");
    const long double w = std::pow(static_cast<long double>(x), static_cast<long double>(alpha));
    const long double upper = static_cast<long double>(x) + w;
    const auto top = static_cast<std::uint64_t>(std::floor(upper));
    table.require(top);
    const std::uint64_t J = std::max<std::uint64_t>(1, floor_power(x, alpha));

    const std::uint64_t block = 1024;
    const std::uint64_t nblocks = (J + block - 1) / block;
    auto parts = parallel_map(static_cast<std::size_t>(nblocks), workers, [&](std::size_t b) {
        std::uint64_t s = 0;
        const std::uint64_t j1 = std::min(J, (b + 1) * block);
        for (std::uint64_t j = b * block + 1; j <= j1; ++j) {
            auto hi = static_cast<std::uint64_t>(std::floor(upper / static_cast<long double>(j)));
            std::uint64_t lo = x / j;
            s += table.pi(hi) - table.pi(lo);
        }
        return s;
    });
    RamSumResult r;
    r.x = x;
    r.alpha = alpha;
    for (std::uint64_t p : parts) r.sum += p;
    r.normalized = static_cast<double>(static_cast<long double>(r.sum) / w);
    r.heuristic = -std::log1p(-alpha);
    return r;
}

// R_d = sum_{R <= n <= S} ( floor((x + x^alpha)/(n d)) - floor(x/(n d)) ).
inline std::uint64_t r_d(std::uint64_t x, double alpha, std::uint64_t R, std::uint64_t S, std::uint64_t d) {
    if (R < 1 || R > S) throw std::invalid_argument("r_d: need 1 <= R <= S");
    if (d < 1) throw std::invalid_argument("r_d: need d >= 1");
    const long double upper = static_cast<long double>(x) +
                              std::pow(static_cast<long double>(x), static_cast<long double>(alpha));
    std::uint64_t s = 0;
    for (std::uint64_t n = R; n <= S; ++n) {
        const long double nd = static_cast<long double>(n) * static_cast<long double>(d);
        if (upper < nd) break;  // every later term is zero
        s += static_cast<std::uint64_t>(std::floor(upper / nd)) - x / (n * d);
    }
    return s;
}

// phi(u) = u - floor(u) - 1/2.
template <std::floating_point T>
T phi(T u) {
    return u - std::floor(u) - T(0.5);
}

// sum_{V <= n <= V1} phi(eta / n). Integral eta is handled with exact
// remainders, so terms at integer quotients come out as exactly -1/2.
inline double phi_sum(std::uint64_t V, std::uint64_t V1, double eta) {
    if (V < 3 || V1 <= V) throw std::invalid_argument("phi_sum: need 3 <= V < V1");
    CompensatedSum s;
    const bool integral = eta >= 0.0 && eta < 9.0e15 && std::floor(eta) == eta;
    const auto e = integral ? static_cast<std::uint64_t>(eta) : 0;
    for (std::uint64_t n = V; n <= V1; ++n) {
        if (integral)
            s += static_cast<double>(e % n) / static_cast<double>(n) - 0.5;
        else
            s += phi(eta / static_cast<double>(n));
    }
    return s.value();
}

// The windows [n/j, (n+k)/j] for j = 1..J are pairwise disjoint when
// k < n / J (consecutive windows satisfy (n+k)/(j+1) < n/j).
inline bool scaled_windows_disjoint(std::uint64_t n, std::uint64_t k, std::uint64_t J) {
    for (std::uint64_t j = 1; j < J; ++j) {
        // (n+k)/(j+1) < n/j  <=>  j(n+k) < (j+1) n
        if (static_cast<unsigned __int128>(j) * (n + k) >= static_cast<unsigned __int128>(j + 1) * n) return false;
    }
    return true;
}

// Constraint 1 - (3/2) alpha + (3/2) delta < alpha on the sieve level exponent.
inline bool sieve_level_admissible(double alpha, double delta) {
    return 1.0 - 1.5 * alpha + 1.5 * delta < alpha;
}

} // namespace grimm

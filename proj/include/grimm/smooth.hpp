#pragma once

// y-smooth integers: global counts Psi(x, y), short-window counts
// Psi(x+z, y) - Psi(x, y), the smooth-window upper bound on g, and scans
// for windows with too few smooth numbers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grimm/parallel.hpp"
#include "grimm/primes.hpp"
#include "grimm/rho.hpp"

namespace grimm {

// Largest integer <= y, clamped to [0, 2^63).
inline std::uint64_t floor_to_u64(double y) {
    if (!(y >= 0.0)) return 0;
    if (y >= 9.2e18) return std::uint64_t{1} << 63;
    return static_cast<std::uint64_t>(std::floor(y));
}

namespace detail {

inline constexpr std::uint64_t kSmoothChunk = std::uint64_t{1} << 18;

// Visits each y-smooth integer in (lo, hi] in increasing order.
//
// Divides out every prime p <= min(y, sqrt(hi)). A residual r > 1 is then
// either a single prime above sqrt(hi) (when y >= sqrt(hi)) or a product of
// primes above y; in both cases the element is smooth iff r <= y.
template <class Fn>
void for_each_smooth(std::uint64_t lo, std::uint64_t hi, double y, const PrimeTable& table, Fn&& fn) {
    if (hi <= lo) return;
    const std::uint64_t y_int = floor_to_u64(y);
    const std::uint64_t sieve_top = std::min(y_int, isqrt(hi));
    table.require(sieve_top);
    std::vector<std::uint32_t> base;
    table.for_each_prime(2, sieve_top, [&](std::uint64_t p) { base.push_back(static_cast<std::uint32_t>(p)); });

    std::vector<std::uint64_t> residual;
    for (std::uint64_t a = lo; a < hi; a += kSmoothChunk) {
        const std::uint64_t b = std::min(hi, a + kSmoothChunk);  // elements a+1..b
        const std::uint64_t len = b - a;
        residual.resize(len);
        for (std::uint64_t i = 0; i < len; ++i) residual[i] = a + 1 + i;
        for (std::uint64_t p : base) {
            for (std::uint64_t m = (a + p) / p * p; m <= b; m += p) {
                std::uint64_t& r = residual[m - a - 1];
                r /= p;
                while (r % p == 0) r /= p;
            }
        }
        for (std::uint64_t i = 0; i < len; ++i)
            if (residual[i] <= y_int || residual[i] == 1) fn(a + 1 + i);
    }
}

} // namespace detail

inline constexpr std::uint64_t psi_global_max = 100'000'000;

// Psi(x, y): positive integers <= x with no prime factor above y (1 included).
inline std::uint64_t psi(std::uint64_t x, double y, const PrimeTable& table) {
    if (x > psi_global_max)
        throw std::out_of_range("psi: x = " + std::to_string(x) + " exceeds " +
                                std::to_string(psi_global_max) + "; use psi_window on a short window");
    if (y >= static_cast<double>(x)) return x;
    std::uint64_t count = 0;
    detail::for_each_smooth(0, x, y, table, [&](std::uint64_t) { ++count; });
    return count;
}

struct SmoothWindowReport {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    double y = 0.0;
    std::uint64_t count = 0;  // y-smooth integers in (x, x+z]
    std::uint64_t pi_y = 0;
    bool bound_established = false;  // count > pi_y
    std::optional<std::uint64_t> first_smooth;
    std::optional<std::uint64_t> last_smooth;
};

inline SmoothWindowReport psi_window(std::uint64_t x, std::uint64_t z, double y, const PrimeTable& table) {
    if (z < 1) throw std::invalid_argument("psi_window: z must be >= 1");
    if (!(y >= 0.0)) throw std::invalid_argument("psi_window: y must be >= 0");
    SmoothWindowReport r;
    r.x = x;
    r.z = z;
    r.y = y;
    table.require(isqrt(x + z));
    r.pi_y = table.pi(floor_to_u64(y));
    detail::for_each_smooth(x, x + z, y, table, [&](std::uint64_t v) {
        if (!r.first_smooth) r.first_smooth = v;
        r.last_smooth = v;
        ++r.count;
    });
    r.bound_established = r.count > r.pi_y;
    return r;
}

// If (x, x+z] holds more than pi(y) y-smooth numbers, those numbers draw
// their prime factors from only pi(y) primes, so (x, z) has no prime
// representation and g(x) < z.
struct GrimmBound {
    std::uint64_t x = 0;
    std::uint64_t z = 0;  // g(x) < z
    double y = 0.0;
    std::uint64_t smooth_count = 0;
    std::uint64_t pi_y = 0;
    std::uint64_t first_smooth = 0;  // n_1
    std::uint64_t last_smooth = 0;   // n_t
};

inline std::optional<GrimmBound> grimm_upper_bound(std::uint64_t x, double y, std::uint64_t z,
                                                   const PrimeTable& table) {
    auto w = psi_window(x, z, y, table);
    if (!w.bound_established) return std::nullopt;
    return GrimmBound{x, z, y, w.count, w.pi_y, *w.first_smooth, *w.last_smooth};
}

// ---------------------------------------------------------------------------

struct ExceptionalScanReport {
    std::uint64_t X = 0;
    double eps = 0.0;
    double c0 = 0.0;
    std::uint64_t stride = 1;
    std::uint64_t sampled = 0;   // windows evaluated
    std::uint64_t degenerate = 0;  // n with n^eps < 2, skipped
    std::uint64_t failures = 0;    // windows with fewer than c0 n^eps smooth numbers
    double failure_fraction = 0.0;
    double min_ratio = 0.0;  // min over sampled n of count / n^eps
    std::uint64_t argmin_ratio = 0;
};

// Half the Dickman density at 1/eps.
inline double default_c0(double eps, const RhoTable& rho_table) { return rho(1.0 / eps, rho_table) / 2.0; }

// Samples n = 1, 1 + stride, ... <= X and checks
// Psi(n + n^eps, n^eps) - Psi(n, n^eps) >= c0 n^eps.
inline ExceptionalScanReport exceptional_scan(std::uint64_t X, double eps, double c0, const PrimeTable& table,
                                              std::uint64_t stride = 1, unsigned workers = 1) {
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("exceptional_scan: eps must lie in (0, 1/2)");
    if (!(c0 > 0.0)) throw std::invalid_argument("exceptional_scan: c0 must be positive");
    if (stride < 1) throw std::invalid_argument("exceptional_scan: stride must be >= 1");
    const double top = std::pow(static_cast<double>(X), eps);
    table.require(isqrt(X + floor_to_u64(top) + 1));

    ExceptionalScanReport rep;
    rep.X = X;
    rep.eps = eps;
    rep.c0 = c0;
    rep.stride = stride;
    rep.min_ratio = INFINITY;
    if (X < 1) return rep;

    struct Partial {
        std::uint64_t sampled = 0, degenerate = 0, failures = 0, argmin = 0;
        double min_ratio = INFINITY;
    };
    const std::uint64_t samples = (X - 1) / stride + 1;
    const std::uint64_t block = 4096;
    const std::uint64_t nblocks = (samples + block - 1) / block;
    auto parts = parallel_map(static_cast<std::size_t>(nblocks), workers, [&](std::size_t bi) {
        Partial part;
        const std::uint64_t s1 = std::min(samples, (bi + 1) * block);
        for (std::uint64_t s = bi * block; s < s1; ++s) {
            const std::uint64_t n = 1 + s * stride;
            const double size = std::pow(static_cast<double>(n), eps);
            if (size < 2.0) {
                ++part.degenerate;
                continue;
            }
            std::uint64_t count = 0;
            detail::for_each_smooth(n, n + floor_to_u64(size), size, table, [&](std::uint64_t) { ++count; });
            ++part.sampled;
            if (static_cast<double>(count) < c0 * size) ++part.failures;
            double ratio = static_cast<double>(count) / size;
            if (ratio < part.min_ratio) {
                part.min_ratio = ratio;
                part.argmin = n;
            }
        }
        return part;
    });
    for (const auto& p : parts) {
        rep.sampled += p.sampled;
        rep.degenerate += p.degenerate;
        rep.failures += p.failures;
        if (p.min_ratio < rep.min_ratio) {
            rep.min_ratio = p.min_ratio;
            rep.argmin_ratio = p.argmin;
        }
    }
    rep.failure_fraction = rep.sampled ? static_cast<double>(rep.failures) / static_cast<double>(rep.sampled) : 0.0;
    return rep;
}

} // namespace grimm

#pragma once

// Exact prime infrastructure: a segmented, odd-only bit sieve answering
// primality, pi(x), theta(x), the t-th prime and prime enumeration, plus
// prime gap scans and finite checks of explicit Chebyshev-type bounds.
//
// Bit encoding: bit i of the table stands for the odd number 2*i + 1.
// The number 2 is handled outside the bit array.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "grimm/error.hpp"
#include "grimm/parallel.hpp"

namespace grimm {

inline std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double v) { add(v); return *this; }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class PrimeTable {
public:
    // Memory ceiling: the bit array for 4e9 is 250 MB.
    static constexpr std::uint64_t max_limit = 4'000'000'000ULL;
    static constexpr std::uint64_t min_limit = 2;
    // Numbers per segment; a multiple of 128 so segments start on word boundaries.
    static constexpr std::uint64_t default_segment_size = std::uint64_t{1} << 20;

    static PrimeTable build(std::uint64_t limit,
                            std::uint64_t segment_size = default_segment_size,
                            unsigned workers = 1) {
        if (limit < min_limit || limit > max_limit)
            throw std::out_of_range("prime table limit " + std::to_string(limit) +
                                    " outside [2, " + std::to_string(max_limit) + "]");
        if (segment_size == 0 || segment_size % 128 != 0)
            throw std::invalid_argument("segment size must be a positive multiple of 128");
        PrimeTable t;
        t.limit_ = limit;
        t.segment_size_ = segment_size;
        t.sieve(workers);
        return t;
    }

    std::uint64_t limit() const noexcept { return limit_; }
    std::uint64_t segment_size() const noexcept { return segment_size_; }

    // Cumulative pi at the end of each segment; the last entry is pi(limit).
    std::span<const std::uint64_t> checkpoint_counts() const noexcept { return checkpoint_counts_; }

    void require(std::uint64_t x) const {
        if (x > limit_) throw table_too_small(x, limit_);
    }

    bool is_prime(std::uint64_t n) const {
        require(n);
        if (n < 2) return false;
        if (n == 2) return true;
        if ((n & 1) == 0) return false;
        return test_bit(n >> 1);
    }

    std::uint64_t pi(std::uint64_t x) const {
        require(x);
        if (x < 2) return 0;
        if (x < 3) return 1;
        // Odd numbers 1..x occupy bits [0, (x-1)/2].
        return 1 + rank_through((x - 1) >> 1);
    }

    // Real arguments are floored.
    std::uint64_t pi(double x) const {
        if (!(x >= 0.0)) throw std::domain_error("pi: negative argument");
        if (x >= static_cast<double>(limit_) + 1.0)
            throw table_too_small(static_cast<std::uint64_t>(x), limit_);
        return pi(static_cast<std::uint64_t>(std::floor(x)));
    }

    double theta(std::uint64_t x) const {
        require(x);
        if (x < 2) return 0.0;
        std::uint64_t seg = segment_of(x);
        CompensatedSum s;
        s += theta_checkpoints_[seg];
        std::uint64_t lo = seg * segment_size_;
        for_each_prime(lo, x, [&](std::uint64_t p) { s += std::log(static_cast<double>(p)); });
        return s.value();
    }

    double theta(double x) const {
        if (!(x >= 0.0)) throw std::domain_error("theta: negative argument");
        if (x >= static_cast<double>(limit_) + 1.0)
            throw table_too_small(static_cast<std::uint64_t>(x), limit_);
        return theta(static_cast<std::uint64_t>(std::floor(x)));
    }

    std::uint64_t prime_count() const noexcept { return checkpoint_counts_.back(); }

    std::uint64_t nth_prime(std::uint64_t t) const {
        if (t < 1 || t > prime_count())
            throw std::out_of_range("nth_prime: index " + std::to_string(t) + " outside [1, " +
                                    std::to_string(prime_count()) + "]");
        if (t == 1) return 2;
        // The (t-1)-th set bit, counting from 1.
        std::uint64_t want = t - 1;
        auto it = std::upper_bound(block_rank_.begin(), block_rank_.end(), want - 1);
        std::size_t block = static_cast<std::size_t>(it - block_rank_.begin()) - 1;
        std::uint64_t seen = block_rank_[block];
        for (std::size_t w = block * kWordsPerBlock; w < bits_.size(); ++w) {
            auto c = static_cast<std::uint64_t>(std::popcount(bits_[w]));
            if (seen + c >= want) {
                std::uint64_t word = bits_[w];
                for (std::uint64_t k = seen; k + 1 < want; ++k) word &= word - 1;
                std::uint64_t bit = w * 64 + static_cast<std::uint64_t>(std::countr_zero(word));
                return 2 * bit + 1;
            }
            seen += c;
        }
        throw std::logic_error("nth_prime: rank index inconsistent");
    }

    // Smallest prime > p, if it lies within the table.
    std::uint64_t next_prime(std::uint64_t p) const {
        if (p < 2) return 2;
        std::uint64_t c = pi(p);
        if (c >= prime_count()) throw table_too_small(p + 1, limit_);
        return nth_prime(c + 1);
    }

    // Visits every prime in [a, b] in increasing order.
    template <class Fn>
    void for_each_prime(std::uint64_t a, std::uint64_t b, Fn&& fn) const {
        require(b);
        if (a > b) return;
        if (a <= 2 && b >= 2) fn(std::uint64_t{2});
        for_each_odd_prime_bits(std::max<std::uint64_t>(a, 3), b, fn);
    }

    std::vector<std::uint64_t> primes_in(std::uint64_t a, std::uint64_t b) const {
        std::vector<std::uint64_t> out;
        for_each_prime(a, b, [&](std::uint64_t p) { out.push_back(p); });
        return out;
    }

private:
    static constexpr std::size_t kWordsPerBlock = 8;

    PrimeTable() = default;

    bool test_bit(std::uint64_t i) const { return (bits_[i >> 6] >> (i & 63)) & 1U; }

    std::uint64_t segment_of(std::uint64_t x) const { return x / segment_size_; }

    // Number of set bits in [0, i].
    std::uint64_t rank_through(std::uint64_t i) const {
        std::size_t w = static_cast<std::size_t>(i >> 6);
        std::size_t block = w / kWordsPerBlock;
        std::uint64_t r = block_rank_[block];
        for (std::size_t j = block * kWordsPerBlock; j < w; ++j)
            r += static_cast<std::uint64_t>(std::popcount(bits_[j]));
        unsigned b = static_cast<unsigned>(i & 63);
        std::uint64_t mask = b == 63 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (b + 1)) - 1);
        return r + static_cast<std::uint64_t>(std::popcount(bits_[w] & mask));
    }

    // Odd primes in [a, b]; bits for 1 and past the limit are never set.
    template <class Fn>
    void for_each_odd_prime_bits(std::uint64_t a, std::uint64_t b, Fn&& fn) const {
        if (b < 3 || a > b) return;
        std::uint64_t lo = a >> 1;  // bit of the first odd number >= a
        if (2 * lo + 1 < a) ++lo;
        std::uint64_t hi = (b - 1) >> 1;
        if (lo > hi) return;
        std::size_t w0 = static_cast<std::size_t>(lo >> 6), w1 = static_cast<std::size_t>(hi >> 6);
        for (std::size_t w = w0; w <= w1; ++w) {
            std::uint64_t word = bits_[w];
            if (w == w0) word &= ~std::uint64_t{0} << (lo & 63);
            if (w == w1 && (hi & 63) != 63) word &= (std::uint64_t{1} << ((hi & 63) + 1)) - 1;
            while (word) {
                std::uint64_t bit = w * 64 + static_cast<std::uint64_t>(std::countr_zero(word));
                fn(2 * bit + 1);
                word &= word - 1;
            }
        }
    }

    void sieve(unsigned workers) {
        const std::uint64_t nbits = (limit_ + 1) / 2;  // odd numbers 1..limit
        bits_.assign(static_cast<std::size_t>((nbits + 63) / 64), 0);

        // Base primes up to sqrt(limit) by a plain sieve.
        const std::uint64_t root = isqrt(limit_);
        std::vector<std::uint32_t> base;
        {
            std::vector<bool> composite(root + 1, false);
            for (std::uint64_t p = 3; p <= root; p += 2) {
                if (composite[p]) continue;
                base.push_back(static_cast<std::uint32_t>(p));
                for (std::uint64_t m = p * p; m <= root; m += 2 * p) composite[m] = true;
            }
        }

        const std::uint64_t nseg = (limit_ + segment_size_) / segment_size_;  // covers [0, limit]
        std::vector<std::uint64_t> seg_counts(nseg, 0);
        std::vector<double> seg_theta(nseg, 0.0);

        parallel_for(static_cast<std::size_t>(nseg), workers, [&](std::size_t s) {
            const std::uint64_t lo = s * segment_size_;
            const std::uint64_t hi = std::min(limit_, lo + segment_size_ - 1);  // inclusive
            const std::uint64_t bit_lo = lo >> 1;
            const std::uint64_t bit_hi = (hi - 1) >> 1;  // hi >= 1 for all segments here
            for (std::uint64_t w = bit_lo >> 6; w <= (bit_hi >> 6); ++w) bits_[w] = ~std::uint64_t{0};
            for (std::uint32_t p32 : base) {
                const std::uint64_t p = p32;
                std::uint64_t start = p * p;
                if (start > hi) break;
                if (start < lo) {
                    start = (lo + p - 1) / p * p;
                    if ((start & 1) == 0) start += p;
                }
                for (std::uint64_t m = start >> 1; m <= bit_hi; m += p)
                    bits_[m >> 6] &= ~(std::uint64_t{1} << (m & 63));
            }
            if (s == 0) bits_[0] &= ~std::uint64_t{1};  // 1 is not prime
            // Trim bits past the limit in the final word.
            if (s + 1 == nseg) {
                std::uint64_t last = bit_hi & 63;
                if (last != 63) bits_[bit_hi >> 6] &= (std::uint64_t{1} << (last + 1)) - 1;
            }
            std::uint64_t count = (lo <= 2 && hi >= 2) ? 1 : 0;
            CompensatedSum th;
            if (count) th += std::numbers::ln2;
            std::uint64_t first_word = bit_lo >> 6;
            for (std::uint64_t w = first_word; w <= (bit_hi >> 6); ++w) {
                std::uint64_t word = bits_[w];
                count += static_cast<std::uint64_t>(std::popcount(word));
                while (word) {
                    std::uint64_t bit = w * 64 + static_cast<std::uint64_t>(std::countr_zero(word));
                    th += std::log(static_cast<double>(2 * bit + 1));
                    word &= word - 1;
                }
            }
            seg_counts[s] = count;
            seg_theta[s] = th.value();
        });

        // Serial prefix passes keep the result independent of worker count.
        checkpoint_counts_.resize(nseg);
        theta_checkpoints_.resize(nseg + 1);
        std::uint64_t run = 0;
        CompensatedSum th;
        theta_checkpoints_[0] = 0.0;
        for (std::size_t s = 0; s < nseg; ++s) {
            run += seg_counts[s];
            checkpoint_counts_[s] = run;
            th += seg_theta[s];
            theta_checkpoints_[s + 1] = th.value();
        }
        // Entry s holds theta over the primes below segment s.
        theta_checkpoints_.pop_back();

        block_rank_.resize(bits_.size() / kWordsPerBlock + 1);
        std::uint64_t r = 0;
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            if (w % kWordsPerBlock == 0) block_rank_[w / kWordsPerBlock] = r;
            r += static_cast<std::uint64_t>(std::popcount(bits_[w]));
        }
        if (bits_.size() % kWordsPerBlock == 0) block_rank_.back() = r;
    }

    std::uint64_t limit_ = 0;
    std::uint64_t segment_size_ = default_segment_size;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint64_t> block_rank_;
    std::vector<std::uint64_t> checkpoint_counts_;
    std::vector<double> theta_checkpoints_;
};

// ---------------------------------------------------------------------------
// Prime gaps

struct GapRecord {
    std::uint64_t p = 0;
    std::uint64_t next_p = 0;
    std::uint64_t gap = 0;
    double cramer_bound = 0.0;  // 1 + (log p)^2

    bool violates() const { return static_cast<double>(gap) >= cramer_bound; }
};

inline GapRecord make_gap_record(std::uint64_t p, std::uint64_t next_p) {
    double lp = std::log(static_cast<double>(p));
    return {p, next_p, next_p - p, 1.0 + lp * lp};
}

// Streams one record per consecutive prime pair with both members <= limit.
template <class Fn>
void gap_scan(const PrimeTable& table, std::uint64_t limit, Fn&& on_record) {
    table.require(limit);
    std::uint64_t prev = 0;
    table.for_each_prime(2, limit, [&](std::uint64_t p) {
        if (prev != 0) on_record(make_gap_record(prev, p));
        prev = p;
    });
}

struct GapScanSummary {
    std::uint64_t limit = 0;
    std::uint64_t records = 0;
    std::uint64_t gap_total = 0;
    GapRecord largest{};
    std::vector<GapRecord> violations;
};

inline GapScanSummary summarize_gaps(const PrimeTable& table, std::uint64_t limit) {
    GapScanSummary s;
    s.limit = limit;
    gap_scan(table, limit, [&](const GapRecord& r) {
        ++s.records;
        s.gap_total += r.gap;
        if (r.gap > s.largest.gap) s.largest = r;
        if (r.violates()) s.violations.push_back(r);
    });
    return s;
}

// ---------------------------------------------------------------------------
// Explicit bounds:
//   pi(x) < (x / log x)(1 + 1.2762 / log x)   for x > 1
//   theta(x) <= 1.00008 x                       for x > 0
//   k! > sqrt(2 pi k) e^{-k} k^k e^{1/(12k+1)}  for k > 1

inline double dusart_pi_bound(double x) {
    double l = std::log(x);
    return x / l * (1.0 + 1.2762 / l);
}

inline constexpr double dusart_theta_factor = 1.00008;

struct DusartReport {
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> pi_violations;
    std::vector<std::uint64_t> theta_violations;
    double max_pi_ratio = 0.0;     // max pi(x) / bound(x)
    double max_theta_ratio = 0.0;  // max theta(x) / x
    std::uint64_t argmax_theta_ratio = 0;

    bool ok() const { return pi_violations.empty() && theta_violations.empty(); }
};

// Checks both bounds at every integer x in [2, limit]. theta(x)/x attains its
// supremum over [p, p') at the prime p, so integers cover all real x > 0.
inline DusartReport check_dusart(const PrimeTable& table, std::uint64_t limit) {
    table.require(limit);
    DusartReport r;
    r.limit = limit;
    std::uint64_t count = 0;
    CompensatedSum theta;
    std::uint64_t next = 2;
    auto walk = [&](std::uint64_t upto) {
        for (; next <= upto; ++next) {
            auto x = static_cast<double>(next);
            double pr = static_cast<double>(count) / dusart_pi_bound(x);
            double tr = theta.value() / x;
            if (pr > r.max_pi_ratio) r.max_pi_ratio = pr;
            if (tr > r.max_theta_ratio) { r.max_theta_ratio = tr; r.argmax_theta_ratio = next; }
            if (pr >= 1.0) r.pi_violations.push_back(next);
            if (tr > dusart_theta_factor) r.theta_violations.push_back(next);
        }
    };
    table.for_each_prime(2, limit, [&](std::uint64_t p) {
        walk(p - 1);
        ++count;
        theta += std::log(static_cast<double>(p));
    });
    walk(limit);
    return r;
}

struct StirlingReport {
    std::uint64_t k_max = 0;
    std::vector<std::uint64_t> violations;
    double min_margin = 0.0;  // min over k of log k! - log(rhs)
};

inline StirlingReport check_stirling(std::uint64_t k_max) {
    StirlingReport r;
    r.k_max = k_max;
    r.min_margin = INFINITY;
    for (std::uint64_t k = 2; k <= k_max; ++k) {
        auto kd = static_cast<double>(k);
        double lhs = std::lgamma(kd + 1.0);
        double rhs = 0.5 * std::log(2.0 * std::numbers::pi * kd) - kd + kd * std::log(kd) +
                     1.0 / (12.0 * kd + 1.0);
        double margin = lhs - rhs;
        r.min_margin = std::min(r.min_margin, margin);
        if (!(margin > 0.0)) r.violations.push_back(k);
    }
    return r;
}

} // namespace grimm

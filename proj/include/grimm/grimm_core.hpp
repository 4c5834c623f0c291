#pragma once

// Prime representations of (n, k): distinct primes P_1..P_k with
// P_i | n + i. Decides representability by bipartite matching, computes
// g(n) and g1(n), and verifies Grimm's conjecture over prime gaps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "grimm/interval_factor.hpp"
#include "grimm/matching.hpp"
#include "grimm/parallel.hpp"
#include "grimm/primes.hpp"

namespace grimm {

enum class Representability { representable, not_representable };

inline const char* to_string(Representability s) {
    return s == Representability::representable ? "representable" : "not_representable";
}

struct RepresentationResult {
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    Representability status = Representability::representable;
    std::vector<std::uint64_t> assignment;    // assignment[i-1] divides n+i; iff representable
    std::vector<std::uint64_t> hall_witness;  // 1-based offsets; iff not representable

    bool representable() const { return status == Representability::representable; }
};

// Yields the prime sets of n+1, n+2, ... factoring the window in growing chunks.
class WindowCursor {
public:
    WindowCursor(std::uint64_t n, const PrimeTable& table) : n_(n), table_(table) {}

    std::span<const std::uint64_t> prime_set(std::uint64_t offset) {
        while (offset > covered_) extend();
        const auto& chunk = chunks_[(offset - 1) / kChunkLength];
        return chunk.prime_set((offset - 1) % kChunkLength + 1);
    }

private:
    static constexpr std::uint64_t kChunkLength = 256;

    void extend() {
        chunks_.push_back(factor_interval(n_ + covered_, kChunkLength, table_));
        covered_ += kChunkLength;
    }

    std::uint64_t n_;
    const PrimeTable& table_;
    std::uint64_t covered_ = 0;
    std::vector<IntervalFactorization> chunks_;
};

inline RepresentationResult has_representation(std::uint64_t n, std::uint64_t k, const PrimeTable& table) {
    if (n < 2) throw std::invalid_argument("has_representation: n must be >= 2");
    if (k < 1) throw std::invalid_argument("has_representation: k must be >= 1");
    auto f = factor_interval(n, k, table);
    RepresentationResult r;
    r.n = n;
    r.k = k;
    SdrMatcher m;
    for (std::uint64_t i = 1; i <= k; ++i) {
        if (!m.add(f.prime_set(i))) {
            r.status = Representability::not_representable;
            for (std::uint32_t o : m.witness()) r.hall_witness.push_back(std::uint64_t{o} + 1);
            return r;
        }
    }
    r.assignment = m.assignment();
    return r;
}

// Loop cap for the g / g1 searches. No a priori bound on g(n) is available,
// so exceeding this raises cap_exceeded rather than returning a guess.
inline std::uint64_t search_cap(std::uint64_t n) {
    auto nd = static_cast<double>(n);
    return static_cast<std::uint64_t>(std::floor(4.0 * std::sqrt(nd) * std::log(nd)));
}

inline std::uint64_t g(std::uint64_t n, const PrimeTable& table) {
    if (n < 2) throw std::invalid_argument("g: n must be >= 2");
    const std::uint64_t cap = search_cap(n);
    WindowCursor window(n, table);
    SdrMatcher m;
    for (std::uint64_t k = 1;; ++k) {
        if (!m.add(window.prime_set(k))) return k - 1;
        if (k > cap)
            throw cap_exceeded("g(" + std::to_string(n) + ") exceeds search cap " + std::to_string(cap));
    }
}

inline std::uint64_t g1(std::uint64_t n, const PrimeTable& table) {
    if (n < 2) throw std::invalid_argument("g1: n must be >= 2");
    const std::uint64_t cap = search_cap(n);
    WindowCursor window(n, table);
    std::unordered_set<std::uint64_t> seen;
    for (std::uint64_t l = 1;; ++l) {
        for (std::uint64_t p : window.prime_set(l)) seen.insert(p);
        if (seen.size() < l) return l - 1;
        if (l > cap)
            throw cap_exceeded("g1(" + std::to_string(n) + ") exceeds search cap " + std::to_string(cap));
    }
}

// ---------------------------------------------------------------------------
// Verification over composite runs between consecutive primes.

struct GrimmRunReport {
    std::uint64_t p = 0;  // the run is p+1, ..., p+k
    std::uint64_t k = 0;
    RepresentationResult result;
};

struct GrimmVerifySummary {
    std::uint64_t limit = 0;
    std::uint64_t start = 0;
    std::uint64_t runs = 0;
    std::uint64_t failures = 0;
    std::uint64_t longest_run = 0;
    std::uint64_t longest_run_prime = 0;
};

struct VerifyOptions {
    std::uint64_t start = 2;        // only runs whose base prime p >= start
    unsigned workers = 1;
    std::uint64_t chunk_primes = 4096;  // consecutive primes handled per work item
    std::uint64_t batch_chunks = 64;    // work items in flight between flushes
    // Called after each flushed batch with the prime from which a resumed
    // run would continue (pass it back as `start`).
    std::function<void(std::uint64_t resume_from, const GrimmVerifySummary&)> on_progress;
};

namespace detail {

// Runs between the primes with indices [first, last] (1-based, last > first).
inline std::vector<GrimmRunReport> verify_prime_block(const PrimeTable& table, std::uint64_t first,
                                                      std::uint64_t last) {
    std::vector<GrimmRunReport> out;
    const std::uint64_t lo = table.nth_prime(first);
    const std::uint64_t hi = table.nth_prime(last);
    if (hi - lo < 2) return out;
    auto f = factor_interval(lo, hi - lo - 1, table);
    std::uint64_t prev = 0;
    table.for_each_prime(lo, hi, [&](std::uint64_t q) {
        if (prev != 0 && q - prev >= 2) {
            GrimmRunReport rep;
            rep.p = prev;
            rep.k = q - prev - 1;
            rep.result.n = prev;
            rep.result.k = rep.k;
            SdrMatcher m;
            bool ok = true;
            for (std::uint64_t i = 1; i <= rep.k && ok; ++i) {
                if (!m.add(f.prime_set(prev - lo + i))) {
                    ok = false;
                    rep.result.status = Representability::not_representable;
                    for (std::uint32_t o : m.witness()) rep.result.hall_witness.push_back(std::uint64_t{o} + 1);
                }
            }
            if (ok) rep.result.assignment = m.assignment();
            out.push_back(std::move(rep));
        }
        prev = q;
    });
    return out;
}

} // namespace detail

// Decides every run p+1..p'-1 for consecutive primes start <= p < p' <= limit
// and streams the reports to `on_report` in increasing p. The output does not
// depend on the worker count.
template <class Fn>
GrimmVerifySummary verify_grimm(const PrimeTable& table, std::uint64_t limit, Fn&& on_report,
                                const VerifyOptions& opt = {}) {
    table.require(limit);
    GrimmVerifySummary s;
    s.limit = limit;
    s.start = opt.start;
    if (opt.start > limit) return s;
    const std::uint64_t first = std::max<std::uint64_t>(1, table.pi(opt.start > 0 ? opt.start - 1 : 0) + 1);
    const std::uint64_t last = table.pi(limit);
    if (last <= first) return s;

    const std::uint64_t chunk = std::max<std::uint64_t>(1, opt.chunk_primes);
    // Chunk c covers prime indices [first + c*chunk, min(first + (c+1)*chunk, last)].
    const std::uint64_t nchunks = (last - first + chunk - 1) / chunk;
    const std::uint64_t batch = std::max<std::uint64_t>(1, opt.batch_chunks);
    for (std::uint64_t b0 = 0; b0 < nchunks; b0 += batch) {
        const std::uint64_t b1 = std::min(nchunks, b0 + batch);
        auto results = parallel_map(static_cast<std::size_t>(b1 - b0), opt.workers, [&](std::size_t i) {
            std::uint64_t c = b0 + i;
            std::uint64_t a = first + c * chunk;
            std::uint64_t z = std::min(a + chunk, last);
            return detail::verify_prime_block(table, a, z);
        });
        for (auto& block : results) {
            for (auto& rep : block) {
                ++s.runs;
                if (!rep.result.representable()) ++s.failures;
                if (rep.k > s.longest_run) {
                    s.longest_run = rep.k;
                    s.longest_run_prime = rep.p;
                }
                on_report(rep);
            }
        }
        if (opt.on_progress) {
            opt.on_progress(table.nth_prime(std::min(first + b1 * chunk, last)), s);
        }
    }
    return s;
}

inline GrimmVerifySummary verify_grimm(const PrimeTable& table, std::uint64_t limit,
                                       const VerifyOptions& opt = {}) {
    return verify_grimm(table, limit, [](const GrimmRunReport&) {}, opt);
}

} // namespace grimm

#pragma once

// Incremental bipartite matching between window offsets and primes
// (Kuhn's augmenting paths). Offsets are added one at a time; when an
// offset cannot be matched, the offsets reached by the failed search form a
// Hall violator: together they see exactly one prime fewer than their count.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace grimm {

class SdrMatcher {
public:
    // Tries to match a new offset whose admissible primes are `primes`
    // (sorted ascending; tried in that order). Returns true on success.
    // On failure the matcher is left unchanged apart from the recorded
    // witness, and the offset is not added.
    bool add(std::span<const std::uint64_t> primes) {
        const auto offset = static_cast<std::uint32_t>(adjacency_.size());
        adjacency_.emplace_back();
        auto& adj = adjacency_.back();
        adj.reserve(primes.size());
        for (std::uint64_t p : primes) adj.push_back(prime_index(p));

        ++stamp_;
        visited_offsets_.clear();
        if (augment(offset)) {
            witness_.clear();
            return true;
        }
        witness_ = visited_offsets_;
        std::sort(witness_.begin(), witness_.end());
        adjacency_.pop_back();
        return false;
    }

    std::size_t size() const noexcept { return adjacency_.size(); }

    // Prime currently matched to the given 0-based offset.
    std::uint64_t assigned(std::size_t offset) const { return primes_[owner_prime_[offset]]; }

    std::vector<std::uint64_t> assignment() const {
        std::vector<std::uint64_t> out(adjacency_.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = assigned(i);
        return out;
    }

    // 0-based offsets of the last failed search (the rejected offset is
    // numbered size()).
    const std::vector<std::uint32_t>& witness() const noexcept { return witness_; }

private:
    static constexpr std::uint32_t kNone = UINT32_MAX;

    std::uint32_t prime_index(std::uint64_t p) {
        auto [it, inserted] = index_.try_emplace(p, static_cast<std::uint32_t>(primes_.size()));
        if (inserted) {
            primes_.push_back(p);
            match_.push_back(kNone);
            seen_.push_back(0);
        }
        return it->second;
    }

    bool augment(std::uint32_t offset) {
        visited_offsets_.push_back(offset);
        for (std::uint32_t q : adjacency_[offset]) {
            if (seen_[q] == stamp_) continue;
            seen_[q] = stamp_;
            if (match_[q] == kNone || augment(match_[q])) {
                match_[q] = offset;
                if (owner_prime_.size() <= offset) owner_prime_.resize(offset + 1, kNone);
                owner_prime_[offset] = q;
                return true;
            }
        }
        return false;
    }

    std::vector<std::vector<std::uint32_t>> adjacency_;
    std::unordered_map<std::uint64_t, std::uint32_t> index_;
    std::vector<std::uint64_t> primes_;
    std::vector<std::uint32_t> match_;        // prime -> offset
    std::vector<std::uint32_t> owner_prime_;  // offset -> prime
    std::vector<std::uint64_t> seen_;
    std::uint64_t stamp_ = 0;
    std::vector<std::uint32_t> visited_offsets_;
    std::vector<std::uint32_t> witness_;
};

} // namespace grimm

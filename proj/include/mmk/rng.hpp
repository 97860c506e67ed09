// Seedable, splittable pseudo-random source used by every stochastic
// operation in the library.
//
// Stream discipline: a (seed, stream) pair names an independent xoshiro256**
// stream whose state is expanded from splitmix64. Monte Carlo code derives
// one stream per trial, so results are independent of how trials are
// distributed over workers.
#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>
#include <algorithm>

namespace mmk {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            word = detail::splitmix64(sm);
        }
        // All-zero state is invalid for xoshiro; splitmix cannot emit four
        // zero words for any seed, but keep the guard explicit.
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
            state_[0] = 0x9e3779b97f4a7c15ULL;
        }
    }

    // Independent stream for the same logical seed.
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t sm = seed;
        std::uint64_t a = detail::splitmix64(sm);
        sm = a ^ (stream_id * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
        return Rng(detail::splitmix64(sm));
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform integer in [0, bound), rejection-sampled to avoid modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) {
            throw std::invalid_argument("Rng::below: bound must be positive");
        }
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) {
                return r % bound;
            }
        }
    }

    // Uniform double in [0, 1).
    double unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

// Uniform k-subset of {0, .., n-1} by Floyd's algorithm; sorted ascending.
inline std::vector<int> sample_index_subset(int n, int k, Rng& rng) {
    if (n < 0 || k < 0 || k > n) {
        throw std::invalid_argument("sample_index_subset: need 0 <= k <= n");
    }
    std::unordered_set<int> chosen;
    chosen.reserve(static_cast<std::size_t>(k) * 2);
    for (int j = n - k; j < n; ++j) {
        const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(j) + 1));
        if (!chosen.insert(t).second) {
            chosen.insert(j);
        }
    }
    std::vector<int> out(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
}

// Uniform k-subset of an arbitrary sorted pool; sorted ascending.
inline std::vector<int> sample_subset(const std::vector<int>& pool, int k, Rng& rng) {
    const std::vector<int> picks = sample_index_subset(static_cast<int>(pool.size()), k, rng);
    std::vector<int> out;
    out.reserve(picks.size());
    for (int idx : picks) {
        out.push_back(pool[static_cast<std::size_t>(idx)]);
    }
    return out;
}

} // namespace mmk

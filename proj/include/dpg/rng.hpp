#pragma once

#include <cstdint>
#include <vector>

namespace dpg {

// xoshiro256** seeded through splitmix64. Chosen over std:: engines because the
// output stream is fully pinned by this file: identical seeds give identical
// draws on every platform, which is what makes traces replayable. Distributions
// are implemented here (rejection sampling) for the same reason -- libstdc++'s
// uniform_int_distribution is not specified bit-for-bit.
//
// Stream order contract for a growth run (one Rng per run, seeded from the CLI):
//   per step: [protocol degree draw][r draw, odd degree without stub only]
//             [matching-selection draws][matching-repair shuffle draws]
// The degree sampler consumes one unit() draw; subset selection consumes one
// below() per selected edge. Replay consumes no randomness at all.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        // splitmix64 expansion of the seed into the 256-bit state
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    std::uint64_t next_u64() {
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

    // uniform on [0, n), n >= 1; rejection keeps it exactly uniform
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    // uniform double in [0, 1) with 53 random bits
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // derive an independent child stream (used to give parallel pipelines their
    // own deterministic seeds)
    Rng split() { return Rng(next_u64() ^ 0x9e3779b97f4a7c15ULL); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_[4];
};

} // namespace dpg

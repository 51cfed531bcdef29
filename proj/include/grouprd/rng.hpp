#pragma once

// Counter-based pseudo-random generator for reproducible simulation.
//
// Every draw is a pure function of (seed, stream, counter), so trials can be
// partitioned across threads in any order and still produce bit-identical
// results: give each logical unit of work its own stream and let it burn
// through its private counter.  The mixer is the splitmix64 finalizer, whose
// output sequence over consecutive counters passes standard statistical
// batteries.

#include <cstdint>

namespace grouprd {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(detail::mix64(detail::mix64(seed + 0x9e3779b97f4a7c15ULL) ^
                              (stream * 0xd1342543de82ef95ULL +
                               0x632be59bd9b4e019ULL))) {}

    std::uint64_t next_u64() {
        ++counter_;
        return detail::mix64(base_ + counter_ * 0x9e3779b97f4a7c15ULL);
    }

    // Unbiased draw from [0, bound) by rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform in [0, 1) with 53 significant bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double prob) { return next_double() < prob; }

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

}  // namespace grouprd

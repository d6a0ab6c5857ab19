#pragma once

#include <cstdint>

namespace sdiqkd {

/// SplitMix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based random stream. The state is derived from (seed, counter),
/// so the randomness of work item i is a pure function of (seed, i) and does
/// not depend on how items are chunked across calls or threads.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t counter)
        : state_(mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^
                       (counter * 0xd1b54a32d192ed03ULL + 0x8bb84b93962eacc9ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform bit.
    int next_bit() { return static_cast<int>(next_u64() >> 63); }

private:
    std::uint64_t state_;
};

}  // namespace sdiqkd

#pragma once

#include <cstdint>
#include <initializer_list>

namespace syncgrid {

/// Counter-based generator: output k of a stream is a SplitMix64 finaliser
/// applied to key + k * golden_gamma. The key is derived from a master seed
/// and a tuple of stream coordinates, so any (seed, sample, stage) draw can be
/// reproduced without replaying other streams.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    /// Standard normal via Box-Muller.
    double normal();

    [[nodiscard]] std::uint64_t key() const noexcept { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace syncgrid

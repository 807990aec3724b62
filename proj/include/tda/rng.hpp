#pragma once

#include <cstddef>
#include <cstdint>

namespace tda {

// Splittable counter-based PRNG (xoshiro256++ seeded through splitmix64).
//
// A master seed plus a stream index fully determine the sequence, and
// split(i) derives an independent child stream.  Monte Carlo loops split
// one child per task index, so results do not depend on evaluation order
// or thread count.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    // uniform in [0, 1)
    double uniform();
    double uniform(double lo, double hi);

    // standard normal via Box-Muller (pairs cached)
    double normal();

    // unbiased draw from {0, ..., n-1}, n >= 1
    std::size_t uniform_index(std::size_t n);

    // independent stream keyed by (seed, stream, index)
    Rng split(std::uint64_t index) const;

private:
    std::uint64_t state_[4];
    std::uint64_t seed_;
    std::uint64_t stream_;
    bool have_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

} // namespace tda

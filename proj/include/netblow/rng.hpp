#pragma once

#include <cstddef>
#include <cstdint>

namespace netblow {

/// splitmix64, the seedable generator behind every randomized suite.
/// State advances by the 64-bit golden gamma; the output mix is the
/// finalizer from Steele, Lea and Flood's SplittableRandom. Streams are
/// reproducible from a seed; trial k of a suite draws from split(k) so
/// results do not depend on evaluation order.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform();
    }

    /// Uniform integer in [0, n); n must be positive.
    std::size_t index(std::size_t n) noexcept {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

    /// Independent stream for subtask k.
    SplitMix64 split(std::uint64_t k) const noexcept {
        SplitMix64 g(state_ ^ (0x632be59bd9b4e019ull * (k + 1)));
        g.next();
        return g;
    }

private:
    std::uint64_t state_;
};

}  // namespace netblow

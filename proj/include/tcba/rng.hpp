#pragma once

#include <cmath>
#include <cstdint>

namespace tcba {

namespace detail {

// 64-bit finalizer from splitmix64; full avalanche, bijective.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace detail

// Counter-style generator (splitmix64). One instance per logical substream;
// instances derived from distinct keys are treated as independent.
class Stream {
public:
    explicit Stream(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64() {
        state_ += detail::kGolden;
        return detail::mix64(state_);
    }

    // Uniform on [0,1) with 53 random bits.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on the open interval (0,1); used where exact 0 or 1 must not occur.
    double u01_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    bool bernoulli(double prob) { return u01() < prob; }

    // Exponential(rate); strictly positive.
    double exponential(double rate) { return -std::log(u01_open()) / rate; }

    // Uniform on (lo, hi); strictly inside the interval.
    double uniform(double lo, double hi) { return lo + u01_open() * (hi - lo); }

    // Geometric on {1,2,...} with success probability 1-x: P(k) = x^(k-1)(1-x).
    // Number of blockades an arrow can destroy before it dies.
    long geometric_quiver(double x) {
        if (x <= 0.0) return 1;
        double u = u01_open();
        return 1 + static_cast<long>(std::floor(std::log(u) / std::log(x)));
    }

private:
    std::uint64_t state_;
};

// Purposes keep substreams of one trial independent of each other.
enum class StreamPurpose : std::uint64_t {
    Config = 1,      // spacings and velocities
    Engine = 2,      // lazy collision outcomes
    TapeQuiver = 3,  // per-particle quiver sizes (keyed by particle index)
    TapeQueue = 4,   // per-particle instruction queues (keyed by particle index)
    Scratch = 5,     // harness-level draws (parameter triples, splits)
};

// Deterministic seed -> substream map. The stream for a given
// (masterSeed, trial, purpose, key) triple never depends on how many other
// streams were created or on thread scheduling.
class RngContract {
public:
    explicit RngContract(std::uint64_t master_seed) : master_(master_seed) {}

    std::uint64_t master_seed() const { return master_; }

    Stream stream_for(std::uint64_t trial, StreamPurpose purpose,
                      std::uint64_t key = 0) const {
        std::uint64_t h = detail::mix64(master_ ^ detail::kGolden);
        h = detail::mix64(h ^ (trial + 1) * 0xd1342543de82ef95ULL);
        h = detail::mix64(h ^ (static_cast<std::uint64_t>(purpose) + 1) *
                                  0xaf251af3b0f025b5ULL);
        h = detail::mix64(h ^ (key + 1) * 0xb564ef22ec7aece5ULL);
        return Stream(h);
    }

private:
    std::uint64_t master_;
};

inline constexpr std::uint64_t kDefaultSeed = 0x7cba5eedULL;

}  // namespace tcba

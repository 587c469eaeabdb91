#pragma once

#include <stdexcept>
#include <vector>

#include "tcba/params.hpp"
#include "tcba/rng.hpp"

namespace tcba {

struct Particle {
    int index = 0;  // identity; stable across interval restrictions
    double position = 0.0;
    Velocity velocity = Velocity::Still;
};

// Particles sorted by strictly increasing position. Indices are strictly
// increasing as well (1..n one-sided, -n..n two-sided).
struct Configuration {
    std::vector<Particle> particles;
    double lo = 0.0;  // open interval containing every position
    double hi = 0.0;

    int size() const { return static_cast<int>(particles.size()); }

    void check() const {
        for (std::size_t i = 0; i < particles.size(); ++i) {
            if (i > 0) {
                if (!(particles[i - 1].position < particles[i].position))
                    throw std::invalid_argument(
                        "Configuration: positions must be strictly increasing");
                if (!(particles[i - 1].index < particles[i].index))
                    throw std::invalid_argument(
                        "Configuration: indices must be strictly increasing");
            }
            if (!(particles[i].position > lo && particles[i].position < hi))
                throw std::invalid_argument(
                    "Configuration: position outside (lo,hi)");
        }
    }

    // Particles with index in [lo_index, hi_index], same positions.
    Configuration restrict_to(int lo_index, int hi_index) const {
        Configuration sub;
        sub.lo = lo;
        sub.hi = hi;
        for (const Particle& q : particles)
            if (q.index >= lo_index && q.index <= hi_index)
                sub.particles.push_back(q);
        return sub;
    }
};

struct SpacingDistribution {
    enum class Kind { Exponential, Uniform };
    Kind kind = Kind::Exponential;
    double rate = 1.0;  // Exponential
    double lo = 0.0;    // Uniform; samples stay strictly positive
    double hi = 1.0;

    static SpacingDistribution exponential(double rate) {
        if (!(rate > 0.0))
            throw std::invalid_argument("SpacingDistribution: rate must be > 0");
        SpacingDistribution d;
        d.kind = Kind::Exponential;
        d.rate = rate;
        return d;
    }

    static SpacingDistribution uniform(double lo, double hi) {
        if (!(lo >= 0.0 && hi > lo))
            throw std::invalid_argument(
                "SpacingDistribution: need 0 <= lo < hi");
        SpacingDistribution d;
        d.kind = Kind::Uniform;
        d.lo = lo;
        d.hi = hi;
        return d;
    }

    double sample(Stream& s) const {
        return kind == Kind::Exponential ? s.exponential(rate)
                                         : s.uniform(lo, hi);
    }
};

inline Velocity sample_velocity(const ModelParams& mp, Stream& s) {
    double u = s.u01();
    if (u < mp.p) return Velocity::Still;
    if (u < mp.p + (1.0 - mp.p) / 2.0) return Velocity::Left;
    return Velocity::Right;
}

// One-sided configuration on (0, inf): indices 1..n, x_k the sum of k iid
// spacings (the origin itself holds no particle).
inline Configuration sample_configuration(const ModelParams& mp, int n,
                                          const SpacingDistribution& spacing,
                                          Stream& s) {
    if (n < 0) throw std::invalid_argument("sample_configuration: n < 0");
    Configuration cfg;
    cfg.particles.reserve(static_cast<std::size_t>(n));
    double pos = 0.0;
    for (int k = 1; k <= n; ++k) {
        pos += spacing.sample(s);
        cfg.particles.push_back(Particle{k, pos, sample_velocity(mp, s)});
    }
    cfg.lo = 0.0;
    cfg.hi = pos + 1.0;
    return cfg;
}

// Two-sided configuration: indices -n..n, the index-0 particle pinned at the
// origin with a forced velocity (used by the blockade-survival estimator;
// forcing instead of rejection sampling is equivalent because velocities are
// independent of everything else).
inline Configuration sample_configuration_two_sided(
    const ModelParams& mp, int n, const SpacingDistribution& spacing, Stream& s,
    Velocity origin_velocity) {
    if (n < 0) throw std::invalid_argument("sample_configuration: n < 0");
    std::vector<Particle> right;
    right.reserve(static_cast<std::size_t>(n));
    double pos = 0.0;
    for (int k = 1; k <= n; ++k) {
        pos += spacing.sample(s);
        right.push_back(Particle{k, pos, sample_velocity(mp, s)});
    }
    double hi = pos + 1.0;
    std::vector<Particle> left;
    left.reserve(static_cast<std::size_t>(n));
    pos = 0.0;
    for (int k = 1; k <= n; ++k) {
        pos -= spacing.sample(s);
        left.push_back(Particle{-k, pos, sample_velocity(mp, s)});
    }
    double lo = pos - 1.0;

    Configuration cfg;
    cfg.lo = lo;
    cfg.hi = hi;
    cfg.particles.reserve(2 * static_cast<std::size_t>(n) + 1);
    for (auto it = left.rbegin(); it != left.rend(); ++it)
        cfg.particles.push_back(*it);
    cfg.particles.push_back(Particle{0, 0.0, origin_velocity});
    for (const Particle& q : right) cfg.particles.push_back(q);
    return cfg;
}

}  // namespace tcba

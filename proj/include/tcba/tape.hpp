#pragma once

#include <unordered_map>
#include <vector>

#include "tcba/configuration.hpp"
#include "tcba/errors.hpp"
#include "tcba/params.hpp"
#include "tcba/rng.hpp"

namespace tcba {

// Collision outcome. Left/Right refer to the surviving arrow's direction of
// motion, not to which side of the collision it came from: SurviveLeft means
// the left-moving arrow lives on. Arrow-blockade collisions use the two
// Survive values and Annihilate; MakeBlockade is arrow-arrow only.
enum class Outcome : uint8_t {
    SurviveLeft,   // probability a/2
    SurviveRight,  // probability a/2
    MakeBlockade,  // probability b
    Annihilate,    // probability c = 1-(a+b)
};

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::SurviveLeft: return "survive_left";
        case Outcome::SurviveRight: return "survive_right";
        case Outcome::MakeBlockade: return "make_blockade";
        case Outcome::Annihilate: return "annihilate";
    }
    return "?";
}

inline Outcome sample_outcome(const ModelParams& mp,
                                                    Stream& s) {
    double u = s.u01();
    if (u < mp.a / 2.0) return Outcome::SurviveLeft;
    if (u < mp.a) return Outcome::SurviveRight;
    if (u < mp.a + mp.b) return Outcome::MakeBlockade;
    return Outcome::Annihilate;
}

// Pre-sampled randomness, keyed by particle index only. Every arrow carries a
// quiver: the number of blockades it can destroy, dying together with the
// last one (Geometric on {1,2,...} with success 1-x). Every left arrow
// carries a queue of arrow-arrow instructions consumed in collision order.
// Because entries depend only on the index, restricting a configuration to a
// sub-interval leaves the retained entries untouched, which is what makes
// runs on different intervals couple consistently.
struct ReactionTape {
    std::unordered_map<int, long> quiver;                            // arrows
    std::unordered_map<int, std::vector<Outcome>> queues;  // left arrows
    int max_queue = 64;

    long quiver_for(int index) const {
        auto it = quiver.find(index);
        if (it == quiver.end())
            throw std::invalid_argument("ReactionTape: no quiver for index " +
                                        std::to_string(index));
        return it->second;
    }

    const std::vector<Outcome>& queue_for(int index) const {
        auto it = queues.find(index);
        if (it == queues.end())
            throw std::invalid_argument("ReactionTape: no queue for index " +
                                        std::to_string(index));
        return it->second;
    }
};

constexpr int kDefaultMaxQueue = 64;

// Per-index substreams: the entries for an index never depend on which other
// particles exist, so any restriction of cfg yields byte-identical entries.
inline ReactionTape sample_tape(const Configuration& cfg, const ModelParams& mp,
                                const RngContract& rng, std::uint64_t trial,
                                int max_queue = kDefaultMaxQueue) {
    if (max_queue < 1)
        throw std::invalid_argument("sample_tape: max_queue must be >= 1");
    ReactionTape tape;
    tape.max_queue = max_queue;
    for (const Particle& q : cfg.particles) {
        if (q.velocity == Velocity::Still) continue;
        auto key = static_cast<std::uint64_t>(static_cast<std::int64_t>(q.index));
        Stream qs = rng.stream_for(trial, StreamPurpose::TapeQuiver, key);
        tape.quiver[q.index] = qs.geometric_quiver(mp.x);
        if (q.velocity == Velocity::Left) {
            Stream ins = rng.stream_for(trial, StreamPurpose::TapeQueue, key);
            std::vector<Outcome> entries;
            entries.reserve(static_cast<std::size_t>(max_queue));
            for (int i = 0; i < max_queue; ++i)
                entries.push_back(sample_outcome(mp, ins));
            tape.queues[q.index] = std::move(entries);
        }
    }
    return tape;
}

}  // namespace tcba

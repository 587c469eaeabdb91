#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "tcba/configuration.hpp"
#include "tcba/errors.hpp"
#include "tcba/params.hpp"
#include "tcba/rng.hpp"
#include "tcba/tape.hpp"

namespace tcba {

enum class EventKind : uint8_t { ArrowArrow, ArrowBlockade };

inline const char* to_string(EventKind k) {
    return k == EventKind::ArrowArrow ? "arrow_arrow" : "arrow_blockade";
}

struct CollisionEvent {
    double time = 0.0;
    double location = 0.0;
    EventKind kind = EventKind::ArrowArrow;
    int left_id = 0;   // spatially left participant
    int right_id = 0;  // spatially right participant
    Outcome outcome = Outcome::Annihilate;
    std::optional<int> generated_id;  // MakeBlockade only

    bool operator==(const CollisionEvent&) const = default;
};

struct SurvivorInfo {
    int id = 0;
    Velocity velocity = Velocity::Still;
    // Remaining quiver for surviving arrows when it is known (tape runs and
    // recorded lazy runs); empty for blockades and plain lazy runs.
    std::optional<long> quiver_remaining;

    bool operator==(const SurvivorInfo&) const = default;
};

struct ProbeVisit {
    double time = 0.0;
    int id = 0;

    bool operator==(const ProbeVisit&) const = default;
};

enum class FirstVisit { NoVisit, SharpVisit, BluntVisit };

struct CollisionLog {
    std::vector<CollisionEvent> events;      // non-decreasing in time
    std::vector<SurvivorInfo> survivors;     // ascending id
    std::vector<ProbeVisit> probe_visits;    // ascending (time, id)
    // For the first visit only: true iff the visitor would destroy a blockade
    // sitting at the probe and keep going, i.e. it carries a spare sharp
    // arrow past the crossing. Empty when no probe or no visit.
    std::optional<bool> first_visit_quiver_nonempty;

    bool operator==(const CollisionLog&) const = default;

    bool visited() const { return !probe_visits.empty(); }

    bool survived(int id) const {
        for (const SurvivorInfo& s : survivors)
            if (s.id == id) return true;
        return false;
    }
};

inline FirstVisit classify_first_visit(const CollisionLog& log) {
    if (log.probe_visits.empty()) return FirstVisit::NoVisit;
    return *log.first_visit_quiver_nonempty ? FirstVisit::SharpVisit
                                            : FirstVisit::BluntVisit;
}

constexpr double kTieTolerance = 1e-12;

namespace detail {

struct Body {
    int id = 0;
    Velocity v = Velocity::Still;
    double x0 = 0.0;  // anchor position at time t0; trajectories never bend
    double t0 = 0.0;
    bool alive = true;
    bool original = true;
    std::uint32_t version = 0;  // bumped on death; stale heap entries expire
    long quiver = 0;   // tape: sharp arrows remaining; lazy: blockade hits so far
    int queue_pos = 0;  // tape: next arrow-arrow instruction
    double death_time = 0.0;
    double death_pos = 0.0;
    bool died_at_blockade = false;
    int prev = -1;
    int next = -1;

    bool is_arrow() const { return v != Velocity::Still; }
    double x_at(double t) const {
        return x0 + static_cast<int>(v) * (t - t0);
    }
};

struct PendingEvent {
    double t = 0.0;
    double loc = 0.0;
    int ls = -1;
    int rs = -1;
    std::uint32_t lv = 0;
    std::uint32_t rv = 0;
};

struct EventAfter {
    bool operator()(const PendingEvent& a, const PendingEvent& b) const {
        if (a.t != b.t) return a.t > b.t;
        if (a.loc != b.loc) return a.loc > b.loc;
        if (a.ls != b.ls) return a.ls > b.ls;
        return a.rs > b.rs;
    }
};

enum class Mode { Lazy, Tape };

// Neighbor-pair event-driven simulation. Velocities take three values, so
// only adjacent particles can collide next; a min-heap over predicted pair
// collisions with lazily invalidated entries resolves the whole run in
// O((n + generated) log n).
class Sim {
public:
    Sim(const Configuration& cfg, const ModelParams& mp, Mode mode,
        Stream* stream, const ReactionTape* tape, std::optional<double> probe)
        : mp_(mp), mode_(mode), stream_(stream), tape_(tape), probe_(probe) {
        cfg.check();
        n_original_ = cfg.size();
        bodies_.reserve(cfg.particles.size() + 16);
        for (const Particle& q : cfg.particles) {
            if (probe_ && q.position == *probe_)
                throw std::invalid_argument(
                    "run: probe coincides with a particle");
            Body b;
            b.id = q.index;
            b.v = q.velocity;
            b.x0 = q.position;
            b.t0 = 0.0;
            if (mode_ == Mode::Tape && b.is_arrow())
                b.quiver = tape_->quiver_for(b.id);
            bodies_.push_back(b);
        }
        next_gen_id_ =
            cfg.particles.empty() ? 1 : cfg.particles.back().index + 1;
        for (int i = 0; i < n_original_; ++i) {
            bodies_[i].prev = i - 1;
            bodies_[i].next = i + 1 < n_original_ ? i + 1 : -1;
        }
        for (int i = 0; i + 1 < n_original_; ++i) predict(i, i + 1);
    }

    void go() {
        while (!heap_.empty()) {
            PendingEvent ev = heap_.top();
            heap_.pop();
            if (stale(ev)) continue;
            drop_stale_top();
            if (!heap_.empty()) {
                const PendingEvent& nx = heap_.top();
                if (std::abs(nx.t - ev.t) <= kTieTolerance &&
                    std::abs(nx.loc - ev.loc) <= kTieTolerance)
                    throw TieError("simultaneous collisions at t=" +
                                   std::to_string(ev.t) + ", x=" +
                                   std::to_string(ev.loc));
            }
            now_ = std::max(now_, ev.t);
            resolve(ev);
        }
        finalize();
    }

    CollisionLog take_log() { return std::move(log_); }

    // Recorded-run support: materialize every random decision the lazy run
    // consumed (or implied) as a tape that replays to the identical log.
    ReactionTape record_tape() {
        ReactionTape tape;
        std::unordered_map<int, std::vector<Outcome>> queues;
        std::size_t longest = 0;
        for (const CollisionEvent& e : log_.events)
            if (e.kind == EventKind::ArrowArrow) {
                auto& q = queues[e.right_id];  // right participant moves left
                q.push_back(e.outcome);
                longest = std::max(longest, q.size());
            }
        for (int i = 0; i < n_original_; ++i) {
            Body& b = bodies_[i];
            if (!b.is_arrow()) continue;
            long hits = b.quiver;
            long sigma;
            if (!b.alive && b.died_at_blockade) {
                sigma = hits;  // the fatal hit consumed the last sharp arrow
            } else if (fresh_classified_id_ && b.id == *fresh_classified_id_) {
                sigma = *log_.first_visit_quiver_nonempty
                            ? hits + 1 + stream_->geometric_quiver(mp_.x)
                            : hits + 1;
            } else {
                sigma = hits + stream_->geometric_quiver(mp_.x);
            }
            tape.quiver[b.id] = sigma;
            if (b.v == Velocity::Left) {
                auto it = queues.find(b.id);
                tape.queues[b.id] = it == queues.end()
                                        ? std::vector<Outcome>{}
                                        : std::move(it->second);
            }
            if (b.alive)
                for (SurvivorInfo& s : log_.survivors)
                    if (s.id == b.id) s.quiver_remaining = sigma - hits;
        }
        tape.max_queue =
            std::max(kDefaultMaxQueue, static_cast<int>(longest));
        return tape;
    }

private:
    bool stale(const PendingEvent& ev) const {
        return bodies_[ev.ls].version != ev.lv ||
               bodies_[ev.rs].version != ev.rv;
    }

    void drop_stale_top() {
        while (!heap_.empty() && stale(heap_.top())) heap_.pop();
    }

    void predict(int a, int bslot) {
        if (a < 0 || bslot < 0) return;
        const Body& A = bodies_[a];
        const Body& B = bodies_[bslot];
        int va = static_cast<int>(A.v);
        int vb = static_cast<int>(B.v);
        if (va <= vb) return;  // not approaching
        double t = ((B.x0 - vb * B.t0) - (A.x0 - va * A.t0)) / (va - vb);
        if (t < now_) t = now_;
        double loc;
        if (va == 0)
            loc = A.x0;
        else if (vb == 0)
            loc = B.x0;
        else
            loc = 0.5 * (A.x_at(t) + B.x_at(t));
        heap_.push(PendingEvent{t, loc, a, bslot, A.version, B.version});
    }

    void kill(int slot, double t, double pos, bool at_blockade) {
        Body& b = bodies_[slot];
        b.alive = false;
        ++b.version;
        b.death_time = t;
        b.death_pos = pos;
        b.died_at_blockade = at_blockade;
        if (b.prev >= 0) bodies_[b.prev].next = b.next;
        if (b.next >= 0) bodies_[b.next].prev = b.prev;
    }

    Outcome next_arrow_arrow(Body& left_moving) {
        if (mode_ == Mode::Lazy) return sample_outcome(mp_, *stream_);
        const auto& queue = tape_->queue_for(left_moving.id);
        if (left_moving.queue_pos >=
            static_cast<int>(queue.size()))
            throw QueueExhausted("arrow " + std::to_string(left_moving.id) +
                                 " consumed all " +
                                 std::to_string(queue.size()) +
                                 " instructions");
        return queue[left_moving.queue_pos++];
    }

    // True iff the arrow survives; the blockade never does.
    bool blockade_collision(Body& arrow) {
        if (mode_ == Mode::Lazy) {
            ++arrow.quiver;  // hit counter
            return stream_->bernoulli(mp_.x);
        }
        --arrow.quiver;  // a sharp arrow annihilates with the blockade
        return arrow.quiver >= 1;
    }

    void resolve(const PendingEvent& ev) {
        Body& L = bodies_[ev.ls];
        Body& R = bodies_[ev.rs];
        int pl = L.prev;
        int nr = R.next;
        if (L.v == Velocity::Right && R.v == Velocity::Left) {
            Outcome out = next_arrow_arrow(R);
            CollisionEvent e{ev.t,  ev.loc, EventKind::ArrowArrow,
                             L.id,  R.id,   out,
                             std::nullopt};
            switch (out) {
                case Outcome::Annihilate:
                    kill(ev.ls, ev.t, ev.loc, false);
                    kill(ev.rs, ev.t, ev.loc, false);
                    predict(pl, nr);
                    break;
                case Outcome::SurviveLeft:  // the left-moving arrow R lives
                    kill(ev.ls, ev.t, ev.loc, false);
                    predict(pl, ev.rs);
                    break;
                case Outcome::SurviveRight:
                    kill(ev.rs, ev.t, ev.loc, false);
                    predict(ev.ls, nr);
                    break;
                case Outcome::MakeBlockade: {
                    kill(ev.ls, ev.t, ev.loc, false);
                    kill(ev.rs, ev.t, ev.loc, false);
                    Body hat;
                    hat.id = next_gen_id_++;
                    hat.v = Velocity::Still;
                    hat.x0 = ev.loc;
                    hat.t0 = ev.t;
                    hat.original = false;
                    hat.prev = pl;
                    hat.next = nr;
                    int hslot = static_cast<int>(bodies_.size());
                    bodies_.push_back(hat);
                    if (pl >= 0) bodies_[pl].next = hslot;
                    if (nr >= 0) bodies_[nr].prev = hslot;
                    e.generated_id = hat.id;
                    predict(pl, hslot);
                    predict(hslot, nr);
                    break;
                }
            }
            log_.events.push_back(e);
        } else {
            // Arrow meets blockade; the blockade is destroyed either way.
            bool arrow_is_left = L.v == Velocity::Right;
            int arrow_slot = arrow_is_left ? ev.ls : ev.rs;
            int block_slot = arrow_is_left ? ev.rs : ev.ls;
            Body& arrow = bodies_[arrow_slot];
            bool survives = blockade_collision(arrow);
            Outcome out = survives ? (arrow.v == Velocity::Left
                                          ? Outcome::SurviveLeft
                                          : Outcome::SurviveRight)
                                   : Outcome::Annihilate;
            log_.events.push_back(CollisionEvent{
                ev.t, ev.loc, EventKind::ArrowBlockade, L.id, R.id, out,
                std::nullopt});
            kill(block_slot, ev.t, ev.loc, false);
            if (survives) {
                if (arrow_is_left)
                    predict(arrow_slot, nr);
                else
                    predict(pl, arrow_slot);
            } else {
                kill(arrow_slot, ev.t, ev.loc, true);
                predict(pl, nr);
            }
        }
    }

    void finalize() {
        if (probe_) {
            double u = *probe_;
            std::vector<ProbeVisit> visits;
            for (int i = 0; i < n_original_; ++i) {
                const Body& b = bodies_[i];
                if (!b.is_arrow()) continue;
                bool crossed = false;
                double t_cross = 0.0;
                if (b.v == Velocity::Left && b.x0 > u) {
                    crossed = b.alive || b.death_pos < u ||
                              (b.death_pos == u && b.died_at_blockade);
                    t_cross = b.x0 - u;
                } else if (b.v == Velocity::Right && b.x0 < u) {
                    crossed = b.alive || b.death_pos > u ||
                              (b.death_pos == u && b.died_at_blockade);
                    t_cross = u - b.x0;
                }
                if (crossed) visits.push_back(ProbeVisit{t_cross, b.id});
            }
            std::sort(visits.begin(), visits.end(),
                      [](const ProbeVisit& a, const ProbeVisit& b) {
                          return a.time != b.time ? a.time < b.time
                                                  : a.id < b.id;
                      });
            log_.probe_visits = std::move(visits);
            if (!log_.probe_visits.empty()) classify_first();
        }
        for (const Body& b : bodies_) {
            if (!b.alive) continue;
            SurvivorInfo s;
            s.id = b.id;
            s.velocity = b.v;
            if (mode_ == Mode::Tape && b.is_arrow())
                s.quiver_remaining = b.quiver;
            log_.survivors.push_back(s);
        }
    }

    // Sharp iff the first visitor would outlive one more blockade met at the
    // crossing. Under a tape that is a quiver count; under lazy draws it is
    // pinned by the visitor's next blockade collision so that the joint law
    // matches the quiver picture, with an independent Bernoulli(x) only when
    // no later collision ever reveals it.
    void classify_first() {
        int F = log_.probe_visits.front().id;
        double t_star = log_.probe_visits.front().time;
        if (mode_ == Mode::Tape) {
            long sigma = tape_->quiver_for(F);
            long before = 0;
            for (const CollisionEvent& e : log_.events)
                if (e.kind == EventKind::ArrowBlockade && e.time < t_star &&
                    (e.left_id == F || e.right_id == F))
                    ++before;
            log_.first_visit_quiver_nonempty = (sigma - before >= 2);
            return;
        }
        for (const CollisionEvent& e : log_.events) {
            if (e.kind != EventKind::ArrowBlockade || e.time < t_star)
                continue;
            if (e.left_id != F && e.right_id != F) continue;
            log_.first_visit_quiver_nonempty =
                (e.outcome != Outcome::Annihilate);
            return;
        }
        log_.first_visit_quiver_nonempty = stream_->bernoulli(mp_.x);
        fresh_classified_id_ = F;
    }

    ModelParams mp_;
    Mode mode_;
    Stream* stream_;
    const ReactionTape* tape_;
    std::optional<double> probe_;
    std::vector<Body> bodies_;
    std::priority_queue<PendingEvent, std::vector<PendingEvent>, EventAfter>
        heap_;
    double now_ = 0.0;
    int n_original_ = 0;
    int next_gen_id_ = 1;
    CollisionLog log_;
    std::optional<int> fresh_classified_id_;
};

}  // namespace detail

// Outcomes drawn from the stream at collision time.
inline CollisionLog run_lazy(const Configuration& cfg, const ModelParams& mp,
                             Stream stream,
                             std::optional<double> probe = std::nullopt) {
    detail::Sim sim(cfg, mp, detail::Mode::Lazy, &stream, nullptr, probe);
    sim.go();
    return sim.take_log();
}

// Lazy run that also returns a tape replaying to the identical log
// (same events, same survivors with quivers filled, same classification).
inline std::pair<CollisionLog, ReactionTape> run_lazy_recorded(
    const Configuration& cfg, const ModelParams& mp, Stream stream,
    std::optional<double> probe = std::nullopt) {
    detail::Sim sim(cfg, mp, detail::Mode::Lazy, &stream, nullptr, probe);
    sim.go();
    ReactionTape tape = sim.record_tape();
    return {sim.take_log(), std::move(tape)};
}

// Fully deterministic run driven by a pre-sampled tape.
inline CollisionLog run_tape(const Configuration& cfg, const ModelParams& mp,
                             const ReactionTape& tape,
                             std::optional<double> probe = std::nullopt) {
    detail::Sim sim(cfg, mp, detail::Mode::Tape, nullptr, &tape, probe);
    sim.go();
    return sim.take_log();
}

// Tape run on the particles with indices in [lo_index, hi_index]; the tape is
// keyed by index, so the retained particles reuse their exact entries.
inline CollisionLog run_restricted(const Configuration& cfg,
                                   const ModelParams& mp,
                                   const ReactionTape& tape, int lo_index,
                                   int hi_index,
                                   std::optional<double> probe = std::nullopt) {
    return run_tape(cfg.restrict_to(lo_index, hi_index), mp, tape, probe);
}

}  // namespace tcba

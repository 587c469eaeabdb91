#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tcba/configuration.hpp"
#include "tcba/engine.hpp"
#include "tcba/errors.hpp"
#include "tcba/params.hpp"
#include "tcba/rng.hpp"
#include "tcba/tape.hpp"

namespace tcba {
namespace stats {

enum class BiasDirection { LowerBound, UpperBound, Unknown };

inline const char* to_string(BiasDirection b) {
    switch (b) {
        case BiasDirection::LowerBound: return "lower_bound";
        case BiasDirection::UpperBound: return "upper_bound";
        default: return "unknown";
    }
}

struct Estimate {
    double value = 0.0;
    double se = 0.0;
    long trials = 0;
    long truncation_n = 0;
    BiasDirection bias = BiasDirection::Unknown;
};

inline double binomial_se(double phat, long trials) {
    return std::sqrt(phat * (1.0 - phat) / static_cast<double>(trials));
}

// Trials that trip the engine's tie detector are discarded (the continuous
// model makes them measure-zero; in floats they are merely astronomically
// rare). A discard rate above this bound means something is actually wrong.
inline constexpr double kMaxDiscardFraction = 1e-4;

namespace detail {

// Runs `body(trial, counters)` for every trial index, splitting the range
// into one contiguous chunk per thread. Counter structs hold only integers
// and are merged with +=, so the totals are identical for any thread count.
template <typename Counters, typename Body>
Counters run_trials(long trials, int threads, Body&& body) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (threads < 1) threads = 1;
    if (static_cast<long>(threads) > trials)
        threads = static_cast<int>(trials);

    std::vector<Counters> partial(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;

    auto work = [&](int w) {
        long lo = trials * w / threads;
        long hi = trials * (w + 1) / threads;
        Counters& c = partial[w];
        try {
            for (long t = lo; t < hi; ++t) {
                if (failed.load(std::memory_order_relaxed)) return;
                try {
                    body(t, c);
                } catch (const TieError&) {
                    c.discarded += 1;
                }
            }
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            error_message = e.what();
            failed.store(true, std::memory_order_relaxed);
        }
    };

    if (threads == 1) {
        work(0);
    } else {
        for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) throw std::runtime_error(error_message);

    Counters total;
    for (const Counters& c : partial) total += c;
    if (static_cast<double>(total.discarded) >
        kMaxDiscardFraction * static_cast<double>(trials))
        throw std::runtime_error(
            "too many trials discarded by tie detection");
    return total;
}

struct HitCounters {
    long long hits = 0;
    long long discarded = 0;
    HitCounters& operator+=(const HitCounters& o) {
        hits += o.hits;
        discarded += o.discarded;
        return *this;
    }
};

}  // namespace detail

// Fraction of one-sided runs on x_1 < ... < x_n in which an arrow reaches the
// origin. Finite n can only miss visits, never invent them, so this estimates
// the infinite-volume visit probability from below.
inline Estimate estimate_q(const ModelParams& mp, long n, long trials,
                           const SpacingDistribution& spacing, uint64_t seed,
                           int threads = 1) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    RngContract rng(seed);
    auto total = detail::run_trials<detail::HitCounters>(
        trials, threads, [&](long t, detail::HitCounters& c) {
            Stream cs = rng.stream_for(t, StreamPurpose::Config);
            Configuration cfg = sample_configuration(mp, n, spacing, cs);
            Stream es = rng.stream_for(t, StreamPurpose::Engine);
            CollisionLog log = run_lazy(cfg, mp, es, 0.0);
            if (log.visited()) c.hits += 1;
        });
    long effective = trials - static_cast<long>(total.discarded);
    Estimate est;
    est.value = static_cast<double>(total.hits) / effective;
    est.se = binomial_se(est.value, effective);
    est.trials = effective;
    est.truncation_n = n;
    est.bias = BiasDirection::LowerBound;
    return est;
}

// Fraction of two-sided runs on x_{-n} < ... < x_n, with a blockade forced at
// the origin, in which that blockade survives. Adding particles can only add
// ways to destroy it, so finite n overestimates the infinite-volume value.
inline Estimate estimate_theta(const ModelParams& mp, long n, long trials,
                               const SpacingDistribution& spacing,
                               uint64_t seed, int threads = 1) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    RngContract rng(seed);
    auto total = detail::run_trials<detail::HitCounters>(
        trials, threads, [&](long t, detail::HitCounters& c) {
            Stream cs = rng.stream_for(t, StreamPurpose::Config);
            Configuration cfg = sample_configuration_two_sided(
                mp, n, spacing, cs, Velocity::Still);
            Stream es = rng.stream_for(t, StreamPurpose::Engine);
            CollisionLog log = run_lazy(cfg, mp, es);
            if (log.survived(0)) c.hits += 1;
        });
    long effective = trials - static_cast<long>(total.discarded);
    Estimate est;
    est.value = static_cast<double>(total.hits) / effective;
    est.se = binomial_se(est.value, effective);
    est.trials = effective;
    est.truncation_n = n;
    est.bias = BiasDirection::UpperBound;
    return est;
}

namespace detail {

struct FateCounters {
    long long visits = 0;
    long long sharp_visits = 0;
    long long visit_left1 = 0;
    long long visit_still1 = 0;
    long long visit_right1 = 0;
    long long wins = 0;
    long long wins_sq = 0;
    long long losses = 0;
    long long hats = 0;
    long long annihilations = 0;
    long long died_blockade_visit = 0;
    long long died_blockade_no_visit = 0;
    long long discarded = 0;
    FateCounters& operator+=(const FateCounters& o) {
        visits += o.visits;
        sharp_visits += o.sharp_visits;
        visit_left1 += o.visit_left1;
        visit_still1 += o.visit_still1;
        visit_right1 += o.visit_right1;
        wins += o.wins;
        wins_sq += o.wins_sq;
        losses += o.losses;
        hats += o.hats;
        annihilations += o.annihilations;
        died_blockade_visit += o.died_blockade_visit;
        died_blockade_no_visit += o.died_blockade_no_visit;
        discarded += o.discarded;
        return *this;
    }
};

}  // namespace detail

// Joint estimates, from one ensemble of one-sided runs with probe 0, of the
// visit probability, its split by the first particle's type, the first-visit
// sharpness, and the fate of the first particle when it is a right arrow.
// The fate events partition that arrow's death; `right_first_beats_left` is
// the mean number of left arrows it defeats (several wins are possible, so
// this one is a count, not a probability).
inline std::map<std::string, Estimate> estimate_collision_probs(
    const ModelParams& mp, long n, long trials,
    const SpacingDistribution& spacing, uint64_t seed, int threads = 1) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    RngContract rng(seed);
    auto total = detail::run_trials<detail::FateCounters>(
        trials, threads, [&](long t, detail::FateCounters& c) {
            Stream cs = rng.stream_for(t, StreamPurpose::Config);
            Configuration cfg = sample_configuration(mp, n, spacing, cs);
            Velocity v1 = cfg.particles.front().velocity;
            Stream es = rng.stream_for(t, StreamPurpose::Engine);
            CollisionLog log = run_lazy(cfg, mp, es, 0.0);

            bool visited = log.visited();
            if (visited) {
                c.visits += 1;
                if (v1 == Velocity::Left) c.visit_left1 += 1;
                if (v1 == Velocity::Still) c.visit_still1 += 1;
                if (v1 == Velocity::Right) c.visit_right1 += 1;
            }
            if (classify_first_visit(log) == FirstVisit::SharpVisit)
                c.sharp_visits += 1;

            if (v1 != Velocity::Right) return;
            long long w = 0;
            bool died_at_blockade = false;
            for (const CollisionEvent& e : log.events) {
                if (e.left_id != 1) continue;
                if (e.kind == EventKind::ArrowArrow) {
                    switch (e.outcome) {
                        case Outcome::SurviveRight: w += 1; break;
                        case Outcome::SurviveLeft: c.losses += 1; break;
                        case Outcome::MakeBlockade: c.hats += 1; break;
                        case Outcome::Annihilate: c.annihilations += 1; break;
                    }
                    if (e.outcome != Outcome::SurviveRight) break;
                } else if (e.outcome == Outcome::Annihilate) {
                    died_at_blockade = true;
                    break;
                }
            }
            c.wins += w;
            c.wins_sq += w * w;
            if (died_at_blockade) {
                if (visited)
                    c.died_blockade_visit += 1;
                else
                    c.died_blockade_no_visit += 1;
            }
        });

    long T = trials - static_cast<long>(total.discarded);
    auto bern = [&](long long hits) {
        Estimate e;
        e.value = static_cast<double>(hits) / T;
        e.se = binomial_se(e.value, T);
        e.trials = T;
        e.truncation_n = n;
        e.bias = BiasDirection::Unknown;
        return e;
    };
    std::map<std::string, Estimate> out;
    Estimate q = bern(total.visits);
    q.bias = BiasDirection::LowerBound;
    out["q"] = q;
    out["sharp_visit"] = bern(total.sharp_visits);
    out["visit_and_left_first"] = bern(total.visit_left1);
    out["visit_and_still_first"] = bern(total.visit_still1);
    out["visit_and_right_first"] = bern(total.visit_right1);
    out["right_first_loses_to_left"] = bern(total.losses);
    out["right_first_makes_blockade"] = bern(total.hats);
    out["right_first_annihilates_left"] = bern(total.annihilations);
    out["right_first_dies_at_blockade_and_visit"] =
        bern(total.died_blockade_visit);
    out["right_first_dies_at_blockade_and_no_visit"] =
        bern(total.died_blockade_no_visit);

    Estimate wins;
    wins.value = static_cast<double>(total.wins) / T;
    double var = (static_cast<double>(total.wins_sq) -
                  static_cast<double>(total.wins) * wins.value) /
                 (static_cast<double>(T) - 1.0);
    wins.se = std::sqrt(std::max(0.0, var) / static_cast<double>(T));
    wins.trials = T;
    wins.truncation_n = n;
    wins.bias = BiasDirection::Unknown;
    out["right_first_beats_left"] = wins;
    return out;
}

struct BlockCounts {
    long B = 0;  // surviving blockades present in the initial configuration
    long A = 0;  // summed remaining quivers of surviving arrows
    long N = 0;  // B - A
};

// Weighted survivor count for the process restricted to indices [j, k]:
// generated blockades do not count toward B, and every surviving arrow counts
// against it with its full remaining budget.
inline BlockCounts block_counts(const Configuration& cfg,
                                const ModelParams& mp,
                                const ReactionTape& tape, int j, int k) {
    CollisionLog log = run_restricted(cfg, mp, tape, j, k);
    BlockCounts out;
    for (const SurvivorInfo& s : log.survivors) {
        if (s.velocity == Velocity::Still) {
            if (s.id >= j && s.id <= k) out.B += 1;
        } else {
            out.A += static_cast<long>(s.quiver_remaining.value());
        }
    }
    out.N = out.B - out.A;
    return out;
}

namespace detail {

struct SumCounters {
    long long sum = 0;
    long long sum_sq = 0;
    long long discarded = 0;
    SumCounters& operator+=(const SumCounters& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        discarded += o.discarded;
        return *this;
    }
};

}  // namespace detail

// Sample mean of N(1, k) over independently sampled configurations and tapes.
inline Estimate estimate_EN(const ModelParams& mp, long k, long trials,
                            const SpacingDistribution& spacing, uint64_t seed,
                            int threads = 1) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    RngContract rng(seed);
    auto total = detail::run_trials<detail::SumCounters>(
        trials, threads, [&](long t, detail::SumCounters& c) {
            Stream cs = rng.stream_for(t, StreamPurpose::Config);
            Configuration cfg = sample_configuration(mp, k, spacing, cs);
            ReactionTape tape = sample_tape(cfg, mp, rng, t);
            BlockCounts bc =
                block_counts(cfg, mp, tape, 1, static_cast<int>(k));
            c.sum += bc.N;
            c.sum_sq += static_cast<long long>(bc.N) * bc.N;
        });
    long T = trials - static_cast<long>(total.discarded);
    Estimate est;
    est.value = static_cast<double>(total.sum) / T;
    double var = (static_cast<double>(total.sum_sq) -
                  static_cast<double>(total.sum) * est.value) /
                 (static_cast<double>(T) - 1.0);
    est.se = std::sqrt(std::max(0.0, var) / static_cast<double>(T));
    est.trials = T;
    est.truncation_n = k;
    est.bias = BiasDirection::Unknown;
    return est;
}

}  // namespace stats
}  // namespace tcba

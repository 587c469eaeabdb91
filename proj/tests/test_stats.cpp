#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <string>

#include "tcba/errors.hpp"
#include "tcba/stats.hpp"
#include "tcba/theory.hpp"

using namespace tcba;
using Catch::Approx;

namespace {
const SpacingDistribution kExp = SpacingDistribution::exponential(1.0);
}

TEST_CASE("a lone particle visits the origin iff it moves left") {
    ModelParams mp = ModelParams::validate(0.0, 0.0, 0.0, 0.0);
    stats::Estimate est = stats::estimate_q(mp, 1, 20000, kExp, 101);
    CHECK(est.trials == 20000);
    CHECK(est.truncation_n == 1);
    CHECK(est.bias == stats::BiasDirection::LowerBound);
    CHECK(est.se ==
          Approx(std::sqrt(est.value * (1 - est.value) / 20000.0)));
    CHECK(std::abs(est.value - 0.5) <= 3 * est.se);
}

TEST_CASE("estimator results do not depend on the thread count") {
    ModelParams mp = ModelParams::validate(0.125, 0.75, 0.0, 0.4);
    stats::Estimate one = stats::estimate_q(mp, 200, 4000, kExp, 77, 1);
    stats::Estimate four = stats::estimate_q(mp, 200, 4000, kExp, 77, 4);
    CHECK(one.value == four.value);
    CHECK(one.se == four.se);

    stats::Estimate t1 = stats::estimate_theta(mp, 100, 2000, kExp, 78, 1);
    stats::Estimate t4 = stats::estimate_theta(mp, 100, 2000, kExp, 78, 4);
    CHECK(t1.value == t4.value);

    auto f1 = stats::estimate_collision_probs(mp, 150, 3000, kExp, 79, 1);
    auto f4 = stats::estimate_collision_probs(mp, 150, 3000, kExp, 79, 4);
    REQUIRE(f1.size() == f4.size());
    for (const auto& [name, est] : f1) {
        CHECK(est.value == f4.at(name).value);
        CHECK(est.se == f4.at(name).se);
    }

    stats::Estimate e1 = stats::estimate_EN(mp, 5, 3000, kExp, 80, 1);
    stats::Estimate e4 = stats::estimate_EN(mp, 5, 3000, kExp, 80, 4);
    CHECK(e1.value == e4.value);
}

TEST_CASE("a blockade in a near-still sea almost always survives") {
    ModelParams mp = ModelParams::validate(0.0, 0.0, 0.0, 0.97);
    stats::Estimate est = stats::estimate_theta(mp, 50, 2000, kExp, 13);
    CHECK(est.bias == stats::BiasDirection::UpperBound);
    CHECK(est.value > 0.9);
}

TEST_CASE("the mean one-site block count matches its closed form") {
    ModelParams mp = ModelParams::validate(0.0, 0.0, 0.2, 0.6);
    stats::Estimate est = stats::estimate_EN(mp, 1, 20000, kExp, 909);
    CHECK(est.bias == stats::BiasDirection::Unknown);
    CHECK(std::abs(est.value - theory::expected_N1(mp)) <= 4 * est.se);
}

TEST_CASE("block counts on hand-built configurations") {
    ModelParams mp = ModelParams::validate(0.2, 0.3, 0.5, 0.5);

    Configuration stills;
    for (int i = 1; i <= 4; ++i)
        stills.particles.push_back(
            Particle{i, static_cast<double>(i), Velocity::Still});
    stills.lo = 0.0;
    stills.hi = 5.0;
    ReactionTape empty_tape;
    stats::BlockCounts bc = stats::block_counts(stills, mp, empty_tape, 1, 4);
    CHECK(bc.B == 4);
    CHECK(bc.A == 0);
    CHECK(bc.N == 4);

    Configuration lone;
    lone.particles.push_back(Particle{1, 1.0, Velocity::Left});
    lone.lo = 0.0;
    lone.hi = 2.0;
    ReactionTape tape;
    tape.quiver[1] = 3;
    bc = stats::block_counts(lone, mp, tape, 1, 1);
    CHECK(bc.B == 0);
    CHECK(bc.A == 3);
    CHECK(bc.N == -3);
}

TEST_CASE("impossible fates estimate to exactly zero") {
    ModelParams mp = ModelParams::validate(0.0, 0.0, 0.0, 0.5);
    auto est = stats::estimate_collision_probs(mp, 200, 10000, kExp, 55, 4);
    CHECK(est.at("right_first_makes_blockade").value == 0.0);
    CHECK(est.at("right_first_beats_left").value == 0.0);
    CHECK(est.at("right_first_loses_to_left").value == 0.0);
    CHECK(est.at("sharp_visit").value == 0.0);  // x = 0: nothing passes
    CHECK(est.at("q").bias == stats::BiasDirection::LowerBound);
}

TEST_CASE("an immediate left arrow visits with probability (1-p)/2") {
    ModelParams mp = ModelParams::validate(0.125, 0.75, 0.0, 0.4);
    auto est = stats::estimate_collision_probs(mp, 50, 50000, kExp, 66, 4);
    const stats::Estimate& ob = est.at("visit_and_left_first");
    CHECK(std::abs(ob.value - 0.3) <= 4 * ob.se);
}

TEST_CASE("visit shares by first-particle type sum to the visit estimate") {
    ModelParams mp = ModelParams::validate(0.25, 0.5, 0.75, 0.66);
    auto est = stats::estimate_collision_probs(mp, 300, 20000, kExp, 88, 4);
    double T = static_cast<double>(est.at("q").trials);
    long long split =
        std::llround(est.at("visit_and_left_first").value * T) +
        std::llround(est.at("visit_and_still_first").value * T) +
        std::llround(est.at("visit_and_right_first").value * T);
    long long visits = std::llround(est.at("q").value * T);
    CHECK(split == visits);
}

TEST_CASE("stranded first arrows vanish deep in the subcritical phase") {
    ModelParams mp = ModelParams::validate(0.0, 0.0, 0.0, 0.05);
    auto est = stats::estimate_collision_probs(mp, 2000, 2000, kExp, 99, 4);
    const stats::Estimate& r = est.at("right_first_dies_at_blockade_and_no_visit");
    CHECK(r.value <= 3 * r.se + 1e-12);
}

TEST_CASE("trial bodies validate their inputs") {
    ModelParams mp = ModelParams::validate(0.0, 0.0, 0.0, 0.5);
    CHECK_THROWS_AS(stats::estimate_q(mp, 0, 100, kExp, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(stats::estimate_EN(mp, 0, 100, kExp, 1),
                    std::invalid_argument);
}

TEST_CASE("rare tie discards are tolerated, systematic ones are fatal") {
    using stats::detail::HitCounters;
    HitCounters ok = stats::detail::run_trials<HitCounters>(
        20000, 4, [](long t, HitCounters& c) {
            if (t == 7) throw TieError("crafted");
            c.hits += 1;
        });
    CHECK(ok.hits == 19999);
    CHECK(ok.discarded == 1);

    CHECK_THROWS_AS(stats::detail::run_trials<HitCounters>(
                        1000, 4,
                        [](long, HitCounters&) {
                            throw TieError("crafted");
                        }),
                    std::runtime_error);

    CHECK_THROWS_AS(stats::detail::run_trials<HitCounters>(
                        100, 2,
                        [](long, HitCounters&) {
                            throw std::logic_error("boom");
                        }),
                    std::runtime_error);
}

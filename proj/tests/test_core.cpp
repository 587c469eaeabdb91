#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>

#include "tcba/configuration.hpp"
#include "tcba/params.hpp"
#include "tcba/rng.hpp"
#include "tcba/tape.hpp"

using namespace tcba;

TEST_CASE("parameter validation enforces the admissible ranges") {
    CHECK_NOTHROW(ModelParams::validate(0.0, 0.0, 0.0, 0.25));
    CHECK(ModelParams::validate(0.0, 0.0, 0.0, 0.25).c() == 1.0);
    CHECK(ModelParams::validate(0.125, 0.75, 0.0, 0.3).c() ==
          Catch::Approx(0.125));
    CHECK(ModelParams::validate(0.25, 0.75, 0.5, 0.3).c() ==
          Catch::Approx(0.0).margin(1e-15));

    CHECK_THROWS_AS(ModelParams::validate(0.6, 0.5, 0.0, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::validate(-0.1, 0.0, 0.0, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::validate(1.0, 0.0, 0.0, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::validate(0.0, 1.0, 0.0, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::validate(0.0, 0.0, 1.0, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::validate(0.0, 0.0, 0.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::validate(0.0, 0.0, 0.0, -0.2),
                    std::invalid_argument);
}

TEST_CASE("sampled velocity frequencies follow the three-point law") {
    ModelParams mp = ModelParams::validate(0.0, 0.0, 0.0, 0.4);
    RngContract rng(kDefaultSeed);
    Stream s = rng.stream_for(0, StreamPurpose::Config);
    const int n = 100000;
    Configuration cfg =
        sample_configuration(mp, n, SpacingDistribution::exponential(1.0), s);
    REQUIRE(cfg.size() == n);

    long still = 0, left = 0, right = 0;
    for (const Particle& q : cfg.particles) {
        if (q.velocity == Velocity::Still) ++still;
        if (q.velocity == Velocity::Left) ++left;
        if (q.velocity == Velocity::Right) ++right;
    }
    auto freq = [&](long c) { return static_cast<double>(c) / n; };
    double se_still = std::sqrt(0.4 * 0.6 / n);
    double se_arrow = std::sqrt(0.3 * 0.7 / n);
    CHECK(std::abs(freq(still) - 0.4) <= 3 * se_still);
    CHECK(std::abs(freq(left) - 0.3) <= 3 * se_arrow);
    CHECK(std::abs(freq(right) - 0.3) <= 3 * se_arrow);
}

TEST_CASE("degenerate densities pin every velocity") {
    RngContract rng(17);
    Stream s1 = rng.stream_for(0, StreamPurpose::Config);
    ModelParams all_still{0.0, 0.0, 0.0, 1.0};
    Configuration cfg = sample_configuration(
        all_still, 3, SpacingDistribution::exponential(1.0), s1);
    for (const Particle& q : cfg.particles)
        CHECK(q.velocity == Velocity::Still);

    Stream s2 = rng.stream_for(1, StreamPurpose::Config);
    ModelParams no_still = ModelParams::validate(0.0, 0.0, 0.0, 0.0);
    cfg = sample_configuration(no_still, 5,
                               SpacingDistribution::exponential(1.0), s2);
    for (const Particle& q : cfg.particles)
        CHECK(q.velocity != Velocity::Still);
}

TEST_CASE("spacings are strictly positive under both distributions") {
    ModelParams mp = ModelParams::validate(0.1, 0.2, 0.3, 0.4);
    RngContract rng(23);
    for (SpacingDistribution spacing : {SpacingDistribution::exponential(1.0),
                                        SpacingDistribution::uniform(0.0, 1.0)}) {
        Stream s = rng.stream_for(0, StreamPurpose::Config);
        Configuration cfg = sample_configuration(mp, 1000, spacing, s);
        REQUIRE(cfg.particles.front().position > 0.0);
        for (int i = 1; i < cfg.size(); ++i)
            REQUIRE(cfg.particles[i].position >
                    cfg.particles[i - 1].position);
        CHECK_NOTHROW(cfg.check());
    }
}

TEST_CASE("two-sided sampling brackets a pinned origin particle") {
    ModelParams mp = ModelParams::validate(0.0, 0.0, 0.0, 0.5);
    RngContract rng(29);
    Stream s = rng.stream_for(0, StreamPurpose::Config);
    Configuration cfg = sample_configuration_two_sided(
        mp, 4, SpacingDistribution::exponential(1.0), s, Velocity::Still);
    REQUIRE(cfg.size() == 9);
    CHECK(cfg.particles.front().index == -4);
    CHECK(cfg.particles.back().index == 4);
    const Particle& origin = cfg.particles[4];
    CHECK(origin.index == 0);
    CHECK(origin.position == 0.0);
    CHECK(origin.velocity == Velocity::Still);
    CHECK_NOTHROW(cfg.check());
}

TEST_CASE("quiver sizes collapse to one at x=0 and average 1/(1-x)") {
    ModelParams mp = ModelParams::validate(0.2, 0.3, 0.0, 0.0);
    RngContract rng(31);
    Stream s = rng.stream_for(0, StreamPurpose::Config);
    Configuration cfg =
        sample_configuration(mp, 200, SpacingDistribution::exponential(1.0), s);
    ReactionTape tape = sample_tape(cfg, mp, rng, 0);
    for (const Particle& q : cfg.particles)
        CHECK(tape.quiver_for(q.index) == 1);

    ModelParams half = ModelParams::validate(0.2, 0.3, 0.5, 0.0);
    Stream s2 = rng.stream_for(1, StreamPurpose::Config);
    const int n = 100000;
    Configuration big = sample_configuration(
        half, n, SpacingDistribution::exponential(1.0), s2);
    ReactionTape big_tape = sample_tape(big, half, rng, 1);
    double sum = 0.0;
    for (const Particle& q : big.particles)
        sum += static_cast<double>(big_tape.quiver_for(q.index));
    double mean = sum / n;
    // Geometric on {1,2,...} with success 1/2: mean 2, variance 2.
    double se = std::sqrt(2.0 / n);
    CHECK(std::abs(mean - 2.0) <= 3 * se);
}

TEST_CASE("pure-annihilation parameters fill queues with annihilations") {
    ModelParams mp = ModelParams::validate(0.0, 0.0, 0.4, 0.0);
    RngContract rng(37);
    Stream s = rng.stream_for(0, StreamPurpose::Config);
    Configuration cfg =
        sample_configuration(mp, 300, SpacingDistribution::exponential(1.0), s);
    ReactionTape tape = sample_tape(cfg, mp, rng, 0);
    long left_arrows = 0;
    for (const Particle& q : cfg.particles) {
        if (q.velocity != Velocity::Left) continue;
        ++left_arrows;
        const auto& queue = tape.queue_for(q.index);
        REQUIRE(queue.size() == static_cast<std::size_t>(tape.max_queue));
        for (Outcome o : queue) CHECK(o == Outcome::Annihilate);
    }
    REQUIRE(left_arrows > 0);
}

TEST_CASE("equal seeds reproduce configurations and tapes exactly") {
    ModelParams mp = ModelParams::validate(0.125, 0.75, 0.3, 0.3);
    SpacingDistribution spacing = SpacingDistribution::exponential(1.0);

    RngContract r1(4242), r2(4242), r3(4243);
    Stream a = r1.stream_for(5, StreamPurpose::Config);
    Stream b = r2.stream_for(5, StreamPurpose::Config);
    Stream c = r3.stream_for(5, StreamPurpose::Config);
    Configuration ca = sample_configuration(mp, 50, spacing, a);
    Configuration cb = sample_configuration(mp, 50, spacing, b);
    Configuration cc = sample_configuration(mp, 50, spacing, c);

    REQUIRE(ca.size() == cb.size());
    bool identical = true, identical_cross = true;
    for (int i = 0; i < ca.size(); ++i) {
        identical &= ca.particles[i].position == cb.particles[i].position &&
                     ca.particles[i].velocity == cb.particles[i].velocity;
        identical_cross &=
            ca.particles[i].position == cc.particles[i].position;
    }
    CHECK(identical);
    CHECK_FALSE(identical_cross);

    ReactionTape ta = sample_tape(ca, mp, r1, 5);
    ReactionTape tb = sample_tape(cb, mp, r2, 5);
    CHECK(ta.quiver == tb.quiver);
    CHECK(ta.queues == tb.queues);
}

TEST_CASE("restricting a configuration preserves its tape entries") {
    ModelParams mp = ModelParams::validate(0.125, 0.75, 0.4, 0.3);
    RngContract rng(55);
    Stream s = rng.stream_for(3, StreamPurpose::Config);
    Configuration cfg =
        sample_configuration(mp, 40, SpacingDistribution::exponential(1.0), s);
    ReactionTape whole = sample_tape(cfg, mp, rng, 3);

    Configuration sub = cfg.restrict_to(10, 25);
    REQUIRE(sub.size() == 16);
    ReactionTape part = sample_tape(sub, mp, rng, 3);

    for (const Particle& q : sub.particles) {
        if (q.velocity == Velocity::Still) continue;
        CHECK(part.quiver_for(q.index) == whole.quiver_for(q.index));
        if (q.velocity == Velocity::Left)
            CHECK(part.queue_for(q.index) == whole.queue_for(q.index));
    }
}

TEST_CASE("streams keyed by purpose never collide") {
    RngContract rng(kDefaultSeed);
    Stream cfg_stream = rng.stream_for(0, StreamPurpose::Config);
    Stream eng_stream = rng.stream_for(0, StreamPurpose::Engine);
    bool differ = false;
    for (int i = 0; i < 8; ++i)
        differ |= cfg_stream.u01() != eng_stream.u01();
    CHECK(differ);
}

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tcba/configuration.hpp"
#include "tcba/engine.hpp"
#include "tcba/errors.hpp"
#include "tcba/io.hpp"
#include "tcba/params.hpp"
#include "tcba/rng.hpp"
#include "tcba/stats.hpp"
#include "tcba/tape.hpp"
#include "tcba/theory.hpp"

namespace tcba {
namespace harness {

// Numeric checks pass when |observed - expected| <= tolerance. Universal
// (counterexample-counting) checks encode observed = violation count,
// expected = 0, tolerance = 0.
struct CheckReport {
    std::string check_id;
    ModelParams params{0, 0, 0, 0};
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double runtime_ms = 0.0;
};

inline bool all_pass(const std::vector<CheckReport>& reports) {
    for (const CheckReport& r : reports)
        if (!r.pass) return false;
    return true;
}

inline constexpr const char* kReportCsvHeader =
    "check_id,a,b,x,p,observed,expected,tolerance,pass,runtime_ms";

inline void write_report_csv(std::ostream& os,
                             const std::vector<CheckReport>& reports) {
    os << kReportCsvHeader << '\n';
    for (const CheckReport& r : reports) {
        os << r.check_id << ',' << io::real6(r.params.a) << ','
           << io::real6(r.params.b) << ',' << io::real6(r.params.x) << ','
           << io::real6(r.params.p) << ',' << io::real6(r.observed) << ','
           << io::real6(r.expected) << ',' << io::real6(r.tolerance) << ','
           << (r.pass ? "true" : "false") << ',' << io::real6(r.runtime_ms)
           << '\n';
    }
}

namespace detail {

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

inline CheckReport numeric_check(std::string id, const ModelParams& mp,
                                 double observed, double expected,
                                 double tolerance, double ms) {
    CheckReport r;
    r.check_id = std::move(id);
    r.params = mp;
    r.observed = observed;
    r.expected = expected;
    r.tolerance = tolerance;
    r.pass = std::abs(observed - expected) <= tolerance;
    r.runtime_ms = ms;
    return r;
}

inline CheckReport violation_check(std::string id, const ModelParams& mp,
                                   long violations, double ms) {
    CheckReport r;
    r.check_id = std::move(id);
    r.params = mp;
    r.observed = static_cast<double>(violations);
    r.expected = 0.0;
    r.tolerance = 0.0;
    r.pass = violations == 0;
    r.runtime_ms = ms;
    return r;
}

// Mixed parameter draws for the universal (any-parameter) checks. x and p are
// capped away from 1 to keep quiver sizes and run lengths reasonable.
inline ModelParams random_params(Stream& s) {
    double a = s.uniform(0.0, 1.0);
    double b = s.uniform(0.0, 1.0 - a);
    double x = s.uniform(0.0, 0.9);
    double p = s.uniform(0.0, 0.95);
    return ModelParams::validate(a, b, x, p);
}

inline std::string format_p(double p) {
    std::string s = io::real6(p);
    return s;
}

}  // namespace detail

// One report per grid point: supercritical points compare the estimate
// against the closed form with belt max(floor, 4 se); subcritical points
// require the lower-bound estimator to reach at least 0.97.
inline std::vector<CheckReport> check_theorem1_curve(
    const ModelParams& mp, const std::vector<double>& p_grid, long n,
    long trials, uint64_t seed, int threads = 1, double floor = 0.01,
    const std::string& id_prefix = "theorem1_curve") {
    std::vector<CheckReport> out;
    double ps = theory::p_star(mp);
    for (double p : p_grid) {
        detail::Timer timer;
        ModelParams point = mp.with_p(p);
        stats::Estimate est = stats::estimate_q(
            point, n, trials, SpacingDistribution::exponential(1.0), seed,
            threads);
        std::string id = id_prefix + "/p=" + detail::format_p(p);
        if (p <= ps) {
            out.push_back(detail::numeric_check(id, point, est.value, 1.0,
                                                0.03, timer.ms()));
        } else {
            double expected = theory::q_theory(point, p);
            double tol = std::max(floor, 4.0 * est.se);
            out.push_back(detail::numeric_check(id, point, est.value,
                                                expected, tol, timer.ms()));
        }
    }
    return out;
}

// Deterministic inequality N(1,l) >= N(1,k) + N(k+1,l) on coupled restricted
// runs sharing one tape. With no fixed params, each trial draws its own.
inline CheckReport check_superadditivity(std::optional<ModelParams> fixed,
                                         long trials, int max_len,
                                         uint64_t seed, int threads = 1) {
    if (max_len < 2) throw std::invalid_argument("max_len must be >= 2");
    detail::Timer timer;
    RngContract rng(seed);
    struct Counters {
        long long violations = 0;
        long long discarded = 0;
        Counters& operator+=(const Counters& o) {
            violations += o.violations;
            discarded += o.discarded;
            return *this;
        }
    };
    auto total = stats::detail::run_trials<Counters>(
        trials, threads, [&](long t, Counters& c) {
            Stream scratch = rng.stream_for(t, StreamPurpose::Scratch);
            ModelParams mp = fixed ? *fixed : detail::random_params(scratch);
            int len = 2 + static_cast<int>(
                              scratch.uniform(0.0, 1.0) * (max_len - 1));
            if (len > max_len) len = max_len;
            int k = 1 + static_cast<int>(scratch.uniform(0.0, 1.0) *
                                         (len - 1));
            if (k > len - 1) k = len - 1;
            Stream cs = rng.stream_for(t, StreamPurpose::Config);
            Configuration cfg = sample_configuration(
                mp, len, SpacingDistribution::exponential(1.0), cs);
            ReactionTape tape = sample_tape(cfg, mp, rng, t);
            long whole = stats::block_counts(cfg, mp, tape, 1, len).N;
            long left = stats::block_counts(cfg, mp, tape, 1, k).N;
            long right = stats::block_counts(cfg, mp, tape, k + 1, len).N;
            if (whole < left + right) c.violations += 1;
        });
    ModelParams label = fixed ? *fixed : ModelParams{0, 0, 0, 0};
    return detail::violation_check("superadditivity/coupled_splits", label,
                                   static_cast<long>(total.violations),
                                   timer.ms());
}

// Supercritical points must show a k with mean N(1,k) clearing 4 standard
// errors above zero; subcritical points must keep every tested mean negative.
inline std::vector<CheckReport> check_survival_criterion(
    const ModelParams& mp, const std::vector<double>& subcritical_ps,
    const std::vector<double>& supercritical_ps, int k_max, long trials,
    uint64_t seed, int threads = 1) {
    std::vector<CheckReport> out;
    for (double p : supercritical_ps) {
        detail::Timer timer;
        ModelParams point = mp.with_p(p);
        bool found = false;
        for (int k = 1; k <= k_max && !found; ++k) {
            stats::Estimate est = stats::estimate_EN(
                point, k, trials, SpacingDistribution::exponential(1.0),
                seed, threads);
            if (est.value > 4.0 * est.se) found = true;
        }
        out.push_back(detail::violation_check(
            "survival_criterion/supercritical/p=" + detail::format_p(p),
            point, found ? 0 : 1, timer.ms()));
    }
    for (double p : subcritical_ps) {
        detail::Timer timer;
        ModelParams point = mp.with_p(p);
        long bad = 0;
        for (int k = 1; k <= k_max; ++k) {
            stats::Estimate est = stats::estimate_EN(
                point, k, trials, SpacingDistribution::exponential(1.0),
                seed, threads);
            if (est.value >= 0.0) bad += 1;
        }
        out.push_back(detail::violation_check(
            "survival_criterion/subcritical/p=" + detail::format_p(p), point,
            bad, timer.ms()));
    }
    return out;
}

// The identity suite at one supercritical parameter point, all quantities
// estimated from a single ensemble of one-sided runs. Same-ensemble
// comparisons use the conservative sum of the member standard errors.
inline std::vector<CheckReport> check_identities(const ModelParams& mp,
                                                 double p, long n, long trials,
                                                 uint64_t seed,
                                                 int threads = 1) {
    ModelParams point = mp.with_p(p);
    detail::Timer timer;
    auto est = stats::estimate_collision_probs(
        point, n, trials, SpacingDistribution::exponential(1.0), seed,
        threads);
    double ms = timer.ms();
    double a = point.a, b = point.b, x = point.x;
    double c = point.c();
    const stats::Estimate& q = est.at("q");
    std::vector<CheckReport> out;

    out.push_back(detail::numeric_check(
        "identities/visit_with_left_first", point,
        est.at("visit_and_left_first").value, (1.0 - p) / 2.0,
        4.0 * est.at("visit_and_left_first").se, ms));

    {
        const stats::Estimate& ob = est.at("visit_and_still_first");
        double expected =
            x * p * q.value + (1.0 - x) * p * q.value * q.value;
        double dq = x * p + 2.0 * (1.0 - x) * p * q.value;
        double tol = 4.0 * (ob.se + dq * q.se);
        out.push_back(detail::numeric_check(
            "identities/visit_with_still_first", point, ob.value, expected,
            tol, ms));
    }

    {
        // Exact partition of the visit event by the first particle's type.
        // Recover the integer counts so the comparison is free of float
        // summation error: all three shares divide by the same trial count.
        double T = static_cast<double>(q.trials);
        long long split =
            std::llround(est.at("visit_and_left_first").value * T) +
            std::llround(est.at("visit_and_still_first").value * T) +
            std::llround(est.at("visit_and_right_first").value * T);
        double sum = static_cast<double>(split) / T;
        out.push_back(detail::numeric_check("identities/visit_partition",
                                            point, sum, q.value, 0.0, ms));
    }

    {
        // All nonzero-parameter members of the outcome-ratio chain must agree.
        std::vector<std::pair<std::string, const stats::Estimate*>> members;
        if (a > 0.0) {
            members.emplace_back("beats", &est.at("right_first_beats_left"));
            members.emplace_back("loses",
                                 &est.at("right_first_loses_to_left"));
        }
        if (b > 0.0)
            members.emplace_back("hat",
                                 &est.at("right_first_makes_blockade"));
        if (c > 0.0)
            members.emplace_back("annihilates",
                                 &est.at("right_first_annihilates_left"));
        auto weight = [&](const std::string& name) {
            if (name == "beats" || name == "loses") return a / 2.0;
            if (name == "hat") return b;
            return c;
        };
        for (size_t i = 0; i < members.size(); ++i) {
            for (size_t j = i + 1; j < members.size(); ++j) {
                double wi = weight(members[i].first);
                double wj = weight(members[j].first);
                double vi = members[i].second->value / wi;
                double vj = members[j].second->value / wj;
                double tol =
                    4.0 * (members[i].second->se / wi +
                           members[j].second->se / wj);
                out.push_back(detail::numeric_check(
                    "identities/outcome_ratio/" + members[i].first + "_vs_" +
                        members[j].first,
                    point, vi, vj, tol, ms));
            }
        }
    }

    const stats::Estimate& hat = est.at("right_first_makes_blockade");
    {
        const stats::Estimate& ob =
            est.at("right_first_dies_at_blockade_and_visit");
        double expected =
            0.5 * (p + hat.value) * (1.0 - x) * q.value * q.value;
        double dq = (p + hat.value) * (1.0 - x) * q.value;
        double dh = 0.5 * (1.0 - x) * q.value * q.value;
        double tol = 4.0 * (ob.se + dq * q.se + dh * hat.se);
        out.push_back(detail::numeric_check(
            "identities/visit_and_first_dies_at_blockade", point, ob.value,
            expected, tol, ms));
    }

    {
        const stats::Estimate& ob =
            est.at("right_first_dies_at_blockade_and_no_visit");
        double expected =
            (p + hat.value) * (1.0 - x) * q.value * (1.0 - q.value);
        double dq = (p + hat.value) * (1.0 - x) *
                    std::abs(1.0 - 2.0 * q.value);
        double dh = (1.0 - x) * q.value * (1.0 - q.value);
        double tol = 4.0 * (ob.se + dq * q.se + dh * hat.se);
        out.push_back(detail::numeric_check(
            "identities/no_visit_and_first_dies_at_blockade", point, ob.value,
            expected, tol, ms));
    }

    if (c > 0.0) {
        const stats::Estimate& ob = est.at("right_first_annihilates_left");
        auto closed = [&](double qq) {
            return c *
                   (p * qq * qq * (1.0 - x) - 2.0 * p * qq * (1.0 - x) - p +
                    1.0) /
                   (2.0 - a + b * (2.0 - qq) * qq * (1.0 - x));
        };
        double expected = closed(q.value);
        double h = 1e-6;
        double dq = std::abs(closed(q.value + h) - closed(q.value - h)) /
                    (2.0 * h);
        double tol = 4.0 * (ob.se + dq * q.se);
        out.push_back(detail::numeric_check(
            "identities/mutual_annihilation_closed_form", point, ob.value,
            expected, tol, ms));
    }

    {
        const stats::Estimate& ob = est.at("sharp_visit");
        double tol = 4.0 * (ob.se + x * q.se);
        out.push_back(detail::numeric_check("identities/sharp_visit_fraction",
                                            point, ob.value, x * q.value, tol,
                                            ms));
    }

    {
        double g_at_qhat = theory::g(point, p, q.value);
        double tol = 4.0 * std::abs(theory::dg_dv(point, p, q.value)) * q.se +
                     1e-12;
        out.push_back(detail::numeric_check("identities/visit_root_of_g",
                                            point, g_at_qhat, 0.0, tol, ms));
    }
    return out;
}

// Decides which candidate map q -> theta the two-sided process obeys.
// The first report must match at 4 sigma, the second must be separated by
// more than 10 sigma; anything else is ambiguous and throws.
inline std::vector<CheckReport> check_theta_relation(const ModelParams& mp,
                                                     double p, long n,
                                                     long trials,
                                                     uint64_t seed,
                                                     int threads = 1) {
    ModelParams point = mp.with_p(p);
    detail::Timer timer;
    stats::Estimate theta = stats::estimate_theta(
        point, n, trials, SpacingDistribution::exponential(1.0), seed,
        threads);
    stats::Estimate q = stats::estimate_q(
        point, n, trials, SpacingDistribution::exponential(1.0),
        tcba::detail::mix64(seed + 1), threads);
    double ms = timer.ms();

    double cand_sq_comp = theory::theta_square_of_complement(q.value);
    double se_sq_comp =
        std::sqrt(theta.se * theta.se +
                  4.0 * (1.0 - q.value) * (1.0 - q.value) * q.se * q.se);
    double cand_comp_sq = theory::theta_complement_of_square(q.value);
    double se_comp_sq = std::sqrt(theta.se * theta.se +
                                  4.0 * q.value * q.value * q.se * q.se);

    bool match_sq_comp =
        std::abs(theta.value - cand_sq_comp) <= 4.0 * se_sq_comp;
    bool match_comp_sq =
        std::abs(theta.value - cand_comp_sq) <= 4.0 * se_comp_sq;
    if (match_sq_comp == match_comp_sq)
        throw AmbiguousVerdict(
            match_sq_comp
                ? "both candidate maps match the blockade survival estimate"
                : "neither candidate map matches the blockade survival "
                  "estimate");

    std::vector<CheckReport> out;
    std::string winner =
        match_sq_comp ? "square_of_complement" : "complement_of_square";
    double wv = match_sq_comp ? cand_sq_comp : cand_comp_sq;
    double wse = match_sq_comp ? se_sq_comp : se_comp_sq;
    out.push_back(detail::numeric_check("theta/matches_" + winner, point,
                                        theta.value, wv, 4.0 * wse, ms));
    double lv = match_sq_comp ? cand_comp_sq : cand_sq_comp;
    double lse = match_sq_comp ? se_comp_sq : se_sq_comp;
    bool separated = std::abs(theta.value - lv) > 10.0 * lse;
    out.push_back(detail::violation_check(
        std::string("theta/rejects_") +
            (match_sq_comp ? "complement_of_square" : "square_of_complement"),
        point, separated ? 0 : 1, ms));
    return out;
}

// Suite workloads default to the pinned acceptance scale; the divisors exist
// for smoke runs and never change expected values, only statistical power.
struct SuiteOptions {
    uint64_t seed = kDefaultSeed;
    int threads = 1;
    long trial_divisor = 1;
    long n_divisor = 1;

    long trials(long pinned) const {
        return std::max(100L, pinned / std::max(1L, trial_divisor));
    }
    long n(long pinned) const {
        return std::max(20L, pinned / std::max(1L, n_divisor));
    }
};

namespace detail {

inline std::vector<CheckReport> suite_ba_curve(const SuiteOptions& opt) {
    ModelParams mp = ModelParams::validate(0.0, 0.0, 0.0, 0.0);
    return check_theorem1_curve(mp, {0.35, 0.5, 0.7, 0.9}, opt.n(1000),
                                opt.trials(100000), opt.seed, opt.threads,
                                0.01, "ba_curve");
}

inline std::vector<CheckReport> suite_coalescing_curves(
    const SuiteOptions& opt) {
    std::vector<CheckReport> out;
    ModelParams green = ModelParams::validate(0.125, 0.75, 0.0, 0.0);
    auto g = check_theorem1_curve(green, {0.2, 0.3, 0.6}, opt.n(1000),
                                  opt.trials(100000), opt.seed, opt.threads,
                                  0.015, "coalescing_curves/a0.125_b0.75_x0");
    out.insert(out.end(), g.begin(), g.end());
    ModelParams orange = ModelParams::validate(0.25, 0.5, 0.75, 0.0);
    auto o = check_theorem1_curve(orange, {0.66, 0.8}, opt.n(1000),
                                  opt.trials(100000),
                                  tcba::detail::mix64(opt.seed + 2),
                                  opt.threads, 0.015,
                                  "coalescing_curves/a0.25_b0.5_x0.75");
    out.insert(out.end(), o.begin(), o.end());
    return out;
}

inline std::vector<CheckReport> suite_subcritical(const SuiteOptions& opt) {
    std::vector<CheckReport> out;
    const ModelParams sets[3] = {ModelParams::validate(0.0, 0.0, 0.0, 0.0),
                                 ModelParams::validate(0.125, 0.75, 0.0, 0.0),
                                 ModelParams::validate(0.25, 0.5, 0.75, 0.0)};
    const char* names[3] = {"a0_b0_x0", "a0.125_b0.75_x0", "a0.25_b0.5_x0.75"};
    for (int i = 0; i < 3; ++i) {
        double half = theory::p_star(sets[i]) / 2.0;
        auto r = check_theorem1_curve(sets[i], {half}, opt.n(2000),
                                      opt.trials(20000),
                                      tcba::detail::mix64(opt.seed + 10 + i),
                                      opt.threads, 0.01,
                                      std::string("subcritical/") + names[i]);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

inline std::vector<CheckReport> suite_critical_density(
    const SuiteOptions&) {
    std::vector<CheckReport> out;
    Timer timer;
    struct Row {
        ModelParams mp;
        double expected;
        const char* name;
    };
    const Row rows[3] = {
        {ModelParams::validate(0.0, 0.0, 0.0, 0.0), 0.25, "a0_b0_x0"},
        {ModelParams::validate(0.125, 0.75, 0.0, 0.0), 0.08,
         "a0.125_b0.75_x0"},
        {ModelParams::validate(0.25, 0.5, 0.75, 0.0), 0.56,
         "a0.25_b0.5_x0.75"}};
    for (const Row& row : rows)
        out.push_back(numeric_check(
            std::string("critical_density/") + row.name, row.mp,
            theory::p_star(row.mp), row.expected, 1e-12, timer.ms()));
    return out;
}

inline std::vector<CheckReport> suite_superadditivity(
    const SuiteOptions& opt) {
    return {check_superadditivity(std::nullopt, opt.trials(10000), 40,
                                  opt.seed, opt.threads)};
}

inline std::vector<CheckReport> suite_mean_first_count(
    const SuiteOptions& opt) {
    std::vector<CheckReport> out;
    RngContract rng(opt.seed);
    Stream s = rng.stream_for(0, StreamPurpose::Scratch, 777);
    for (int i = 0; i < 5; ++i) {
        Timer timer;
        ModelParams mp = random_params(s);
        stats::Estimate est = stats::estimate_EN(
            mp, 1, opt.trials(100000), SpacingDistribution::exponential(1.0),
            tcba::detail::mix64(opt.seed + 20 + i), opt.threads);
        out.push_back(numeric_check(
            "mean_first_count/point" + std::to_string(i), mp, est.value,
            theory::expected_N1(mp), 4.0 * est.se, timer.ms()));
    }
    return out;
}

inline std::vector<CheckReport> suite_identities(const SuiteOptions& opt) {
    std::vector<CheckReport> out;
    auto ba = check_identities(ModelParams::validate(0.0, 0.0, 0.0, 0.0), 0.5,
                               opt.n(1000), opt.trials(100000),
                               tcba::detail::mix64(opt.seed + 30),
                               opt.threads);
    out.insert(out.end(), ba.begin(), ba.end());
    auto co = check_identities(ModelParams::validate(0.125, 0.75, 0.0, 0.0),
                               0.4, opt.n(1000), opt.trials(100000),
                               tcba::detail::mix64(opt.seed + 31),
                               opt.threads);
    out.insert(out.end(), co.begin(), co.end());
    return out;
}

inline std::vector<CheckReport> suite_backend_equivalence(
    const SuiteOptions& opt) {
    std::vector<CheckReport> out;
    {
        Timer timer;
        RngContract rng(tcba::detail::mix64(opt.seed + 40));
        struct Counters {
            long long mismatches = 0;
            long long discarded = 0;
            Counters& operator+=(const Counters& o) {
                mismatches += o.mismatches;
                discarded += o.discarded;
                return *this;
            }
        };
        long n = opt.n(120);
        auto total = stats::detail::run_trials<Counters>(
            opt.trials(1000), opt.threads, [&](long t, Counters& c) {
                Stream scratch = rng.stream_for(t, StreamPurpose::Scratch);
                ModelParams mp = random_params(scratch);
                Stream cs = rng.stream_for(t, StreamPurpose::Config);
                Configuration cfg = sample_configuration(
                    mp, n, SpacingDistribution::exponential(1.0), cs);
                Stream es = rng.stream_for(t, StreamPurpose::Engine);
                auto [lazy_log, tape] = run_lazy_recorded(cfg, mp, es, 0.0);
                CollisionLog replay = run_tape(cfg, mp, tape, 0.0);
                if (!(lazy_log == replay)) c.mismatches += 1;
            });
        out.push_back(violation_check("backend_equivalence/exact_replay",
                                      ModelParams{0, 0, 0, 0},
                                      static_cast<long>(total.mismatches),
                                      timer.ms()));
    }
    {
        Timer timer;
        ModelParams mp = ModelParams::validate(0.25, 0.5, 0.75, 0.66);
        long n = opt.n(500), trials = opt.trials(50000);
        stats::Estimate lazy = stats::estimate_q(
            mp, n, trials, SpacingDistribution::exponential(1.0),
            tcba::detail::mix64(opt.seed + 41), opt.threads);

        RngContract rng(tcba::detail::mix64(opt.seed + 41));
        stats::detail::HitCounters total =
            stats::detail::run_trials<stats::detail::HitCounters>(
                trials, opt.threads,
                [&](long t, stats::detail::HitCounters& c) {
                    Stream cs = rng.stream_for(t, StreamPurpose::Config);
                    Configuration cfg = sample_configuration(
                        mp, n, SpacingDistribution::exponential(1.0), cs);
                    ReactionTape tape = sample_tape(cfg, mp, rng, t);
                    CollisionLog log = run_tape(cfg, mp, tape, 0.0);
                    if (log.visited()) c.hits += 1;
                });
        long effective = trials - static_cast<long>(total.discarded);
        double tape_q = static_cast<double>(total.hits) / effective;
        double tape_se = stats::binomial_se(tape_q, effective);
        double tol = 4.0 * std::sqrt(lazy.se * lazy.se + tape_se * tape_se);
        out.push_back(numeric_check("backend_equivalence/visit_frequency", mp,
                                    lazy.value, tape_q, tol, timer.ms()));
    }
    return out;
}

inline std::vector<CheckReport> suite_monotonicity(const SuiteOptions& opt) {
    Timer timer;
    RngContract rng(tcba::detail::mix64(opt.seed + 50));
    struct Counters {
        long long violations = 0;
        long long discarded = 0;
        Counters& operator+=(const Counters& o) {
            violations += o.violations;
            discarded += o.discarded;
            return *this;
        }
    };
    const int n = static_cast<int>(opt.n(200));
    auto total = stats::detail::run_trials<Counters>(
        opt.trials(1000), opt.threads, [&](long t, Counters& c) {
            Stream scratch = rng.stream_for(t, StreamPurpose::Scratch);
            ModelParams mp = random_params(scratch);
            Stream cs = rng.stream_for(t, StreamPurpose::Config);
            Configuration cfg = sample_configuration(
                mp, n, SpacingDistribution::exponential(1.0), cs);
            ReactionTape tape = sample_tape(cfg, mp, rng, t);
            bool seen = false;
            for (int k = 1; k <= n; ++k) {
                CollisionLog log = run_restricted(cfg, mp, tape, 1, k, 0.0);
                bool visited = log.visited();
                if (seen && !visited) {
                    c.violations += 1;
                    return;
                }
                seen = visited;
            }
        });
    return {violation_check("monotonicity/visit_indicator",
                            ModelParams{0, 0, 0, 0},
                            static_cast<long>(total.violations), timer.ms())};
}

inline std::vector<CheckReport> suite_spacing_invariance(
    const SuiteOptions& opt) {
    Timer timer;
    ModelParams mp = ModelParams::validate(0.0, 0.0, 0.0, 0.5);
    stats::Estimate expo = stats::estimate_q(
        mp, opt.n(1000), opt.trials(100000),
        SpacingDistribution::exponential(1.0),
        tcba::detail::mix64(opt.seed + 60), opt.threads);
    stats::Estimate unif = stats::estimate_q(
        mp, opt.n(1000), opt.trials(100000),
        SpacingDistribution::uniform(0.0, 1.0),
        tcba::detail::mix64(opt.seed + 61), opt.threads);
    double tol = 4.0 * std::sqrt(expo.se * expo.se + unif.se * unif.se);
    return {numeric_check("spacing_invariance/exponential_vs_uniform", mp,
                          expo.value, unif.value, tol, timer.ms())};
}

inline std::vector<CheckReport> suite_theta_relation(const SuiteOptions& opt) {
    return check_theta_relation(ModelParams::validate(0.0, 0.0, 0.0, 0.0),
                                0.5, opt.n(1000), opt.trials(100000),
                                tcba::detail::mix64(opt.seed + 70),
                                opt.threads);
}

inline std::vector<CheckReport> suite_survival_criterion(
    const SuiteOptions& opt) {
    std::vector<CheckReport> out;
    auto ba = check_survival_criterion(
        ModelParams::validate(0.0, 0.0, 0.0, 0.0), {0.1}, {0.9}, 50,
        opt.trials(2000), tcba::detail::mix64(opt.seed + 80), opt.threads);
    out.insert(out.end(), ba.begin(), ba.end());
    auto co = check_survival_criterion(
        ModelParams::validate(0.25, 0.5, 0.75, 0.0), {0.28}, {0.85}, 50,
        opt.trials(2000), tcba::detail::mix64(opt.seed + 81), opt.threads);
    out.insert(out.end(), co.begin(), co.end());
    return out;
}

}  // namespace detail

struct Suite {
    std::string name;
    std::function<std::vector<CheckReport>(const SuiteOptions&)> run;
};

inline const std::vector<Suite>& default_suites() {
    static const std::vector<Suite> suites = {
        {"ba_curve", detail::suite_ba_curve},
        {"coalescing_curves", detail::suite_coalescing_curves},
        {"subcritical", detail::suite_subcritical},
        {"critical_density", detail::suite_critical_density},
        {"superadditivity", detail::suite_superadditivity},
        {"mean_first_count", detail::suite_mean_first_count},
        {"identities", detail::suite_identities},
        {"backend_equivalence", detail::suite_backend_equivalence},
        {"monotonicity", detail::suite_monotonicity},
        {"spacing_invariance", detail::suite_spacing_invariance},
        {"theta_relation", detail::suite_theta_relation},
        {"survival_criterion", detail::suite_survival_criterion},
    };
    return suites;
}

// belt_scale rescales every numeric tolerance (diagnostics only; 1 is the
// contractual belt). Unknown names in `only` are reported by throwing.
inline std::vector<CheckReport> run_default_suite(
    const SuiteOptions& opt, const std::vector<std::string>& only = {},
    double belt_scale = 1.0) {
    for (const std::string& name : only) {
        bool known = false;
        for (const Suite& suite : default_suites())
            if (suite.name == name) known = true;
        if (!known)
            throw std::invalid_argument("unknown check suite: " + name);
    }
    std::vector<CheckReport> out;
    for (const Suite& suite : default_suites()) {
        if (!only.empty()) {
            bool wanted = false;
            for (const std::string& name : only)
                if (name == suite.name) wanted = true;
            if (!wanted) continue;
        }
        std::vector<CheckReport> r = suite.run(opt);
        out.insert(out.end(), r.begin(), r.end());
    }
    if (belt_scale != 1.0) {
        for (CheckReport& r : out) {
            r.tolerance *= belt_scale;
            r.pass = std::abs(r.observed - r.expected) <= r.tolerance;
        }
    }
    return out;
}

}  // namespace harness
}  // namespace tcba

// tcba: command-line front end for the coalescing ballistic annihilation
// library. Subcommands: run, estimate, sweep, verify, theory.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 runtime error.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tcba/engine.hpp"
#include "tcba/harness.hpp"
#include "tcba/io.hpp"
#include "tcba/stats.hpp"
#include "tcba/theory.hpp"

namespace {

// Fields shared by every subcommand; each sub registers the flags it uses.
struct CommonOpts {
    double a = 0.0;
    double b = 0.0;
    double x = 0.0;
    double p = 0.0;
    long n = 1000;
    long trials = 100000;
    std::uint64_t seed = tcba::kDefaultSeed;
    std::string spacing = "exp";
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    std::string out;
};

void add_param_flags(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--a", o.a, "arrow-vs-arrow single-survivor weight a");
    sub->add_option("--b", o.b, "arrow-vs-arrow blockade weight b");
    sub->add_option("--x", o.x, "arrow survival probability at a blockade");
    sub->add_option("--p", o.p, "density of still particles");
}

void add_seed_flag(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--seed", o.seed, "RNG seed")->envname("TCBA_SEED");
}

void add_spacing_flag(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--spacing", o.spacing,
                    "spacing law: exp = Exponential(1), uniform = U(0,1)")
        ->check(CLI::IsMember({"exp", "uniform"}));
}

void add_threads_flag(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--threads", o.threads, "worker threads")
        ->check(CLI::PositiveNumber);
}

void add_config_flag(CLI::App* sub) {
    sub->set_config("--config", "", "flat key=value config file");
}

tcba::SpacingDistribution resolve_spacing(const std::string& name) {
    return name == "uniform" ? tcba::SpacingDistribution::uniform(0.0, 1.0)
                             : tcba::SpacingDistribution::exponential(1.0);
}

// Stream results either to --out or to stdout.
void with_sink(const std::string& path,
               const std::function<void(std::ostream&)>& body) {
    if (path.empty()) {
        body(std::cout);
        return;
    }
    std::ofstream file(path);
    if (!file)
        throw std::runtime_error("cannot open output file: " + path);
    body(file);
}

int cmd_run(const CommonOpts& o, std::optional<double> probe) {
    tcba::ModelParams mp = tcba::ModelParams::validate(o.a, o.b, o.x, o.p);
    tcba::SpacingDistribution spacing = resolve_spacing(o.spacing);
    tcba::RngContract rng(o.seed);
    tcba::Stream cs = rng.stream_for(0, tcba::StreamPurpose::Config);
    tcba::Configuration cfg = tcba::sample_configuration(
        mp, static_cast<int>(o.n), spacing, cs);
    tcba::CollisionLog log = tcba::run_lazy(
        cfg, mp, rng.stream_for(0, tcba::StreamPurpose::Engine), probe);
    with_sink(o.out, [&](std::ostream& os) {
        tcba::io::write_events_jsonl(os, log);
        tcba::io::write_survivor_summary(os, log);
    });
    return 0;
}

int cmd_estimate(const CommonOpts& o, const std::string& estimand, long k) {
    tcba::ModelParams mp = tcba::ModelParams::validate(o.a, o.b, o.x, o.p);
    tcba::SpacingDistribution spacing = resolve_spacing(o.spacing);
    with_sink(o.out, [&](std::ostream& os) {
        os << tcba::io::kEstimateCsvHeader << '\n';
        if (estimand == "q") {
            tcba::stats::Estimate est = tcba::stats::estimate_q(
                mp, o.n, o.trials, spacing, o.seed, o.threads);
            tcba::io::write_estimate_row(os, "q", mp, est);
        } else if (estimand == "theta") {
            tcba::stats::Estimate est = tcba::stats::estimate_theta(
                mp, o.n, o.trials, spacing, o.seed, o.threads);
            tcba::io::write_estimate_row(os, "theta", mp, est);
        } else if (estimand == "en") {
            tcba::stats::Estimate est = tcba::stats::estimate_EN(
                mp, k, o.trials, spacing, o.seed, o.threads);
            tcba::io::write_estimate_row(os, "en", mp, est);
        } else {
            std::map<std::string, tcba::stats::Estimate> ests =
                tcba::stats::estimate_collision_probs(
                    mp, o.n, o.trials, spacing, o.seed, o.threads);
            for (const auto& [name, est] : ests)
                tcba::io::write_estimate_row(os, name, mp, est);
        }
    });
    return 0;
}

int cmd_sweep(const CommonOpts& o, const std::vector<double>& grid) {
    tcba::SpacingDistribution spacing = resolve_spacing(o.spacing);
    std::vector<std::string> rows;
    for (double p : grid) {
        tcba::ModelParams mp = tcba::ModelParams::validate(o.a, o.b, o.x, p);
        tcba::stats::Estimate est = tcba::stats::estimate_q(
            mp, o.n, o.trials, spacing, o.seed, o.threads);
        std::ostringstream row;
        tcba::io::write_sweep_row(row, mp, est, tcba::theory::q_theory(mp, p),
                                  tcba::theory::p_star(mp));
        rows.push_back(row.str());
    }
    with_sink(o.out, [&](std::ostream& os) {
        os << tcba::io::kSweepCsvHeader << '\n';
        for (const std::string& row : rows) os << row;
    });
    return 0;
}

int cmd_verify(const CommonOpts& o, const std::vector<std::string>& only,
               bool quick, double belt_scale, const std::string& report) {
    tcba::harness::SuiteOptions opt;
    opt.seed = o.seed;
    opt.threads = o.threads;
    if (quick) {
        opt.trial_divisor = 100;
        opt.n_divisor = 10;
    }
    std::vector<tcba::harness::CheckReport> reports =
        tcba::harness::run_default_suite(opt, only, belt_scale);
    with_sink(report, [&](std::ostream& os) {
        tcba::harness::write_report_csv(os, reports);
    });
    bool ok = tcba::harness::all_pass(reports);
    long failed = 0;
    for (const tcba::harness::CheckReport& r : reports)
        if (!r.pass) ++failed;
    if (ok)
        std::cerr << "verify: all " << reports.size() << " checks passed\n";
    else
        std::cerr << "verify: " << failed << " of " << reports.size()
                  << " checks FAILED\n";
    return ok ? 0 : 1;
}

int cmd_theory(const CommonOpts& o) {
    tcba::ModelParams mp = tcba::ModelParams::validate(o.a, o.b, o.x, o.p);
    tcba::theory::TheoryPoint tp = tcba::theory::theory_point(mp);
    nlohmann::ordered_json j;
    j["a"] = mp.a;
    j["b"] = mp.b;
    j["x"] = mp.x;
    j["p"] = mp.p;
    j["p_star"] = tp.p_star;
    j["q"] = tp.q;
    j["q_plus"] = tp.q_plus ? nlohmann::ordered_json(*tp.q_plus)
                            : nlohmann::ordered_json(nullptr);
    j["q_minus"] = tp.q_minus ? nlohmann::ordered_json(*tp.q_minus)
                              : nlohmann::ordered_json(nullptr);
    j["discriminant"] = tp.discriminant;
    with_sink(o.out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coalescing ballistic annihilation on the line"};
    app.require_subcommand(1);
    int rc = 0;

    CommonOpts ro;
    std::optional<double> probe;
    CLI::App* run = app.add_subcommand(
        "run", "simulate one realization and dump events plus survivors");
    add_param_flags(run, ro);
    run->add_option("--n", ro.n, "number of particles");
    add_seed_flag(run, ro);
    add_spacing_flag(run, ro);
    run->add_option("--probe", probe,
                    "site whose first arrow visit is tracked");
    run->add_option("--out", ro.out, "output file (default stdout)");
    add_config_flag(run);
    run->callback([&] { rc = cmd_run(ro, probe); });

    CommonOpts eo;
    std::string estimand = "q";
    long k = 1;
    CLI::App* estimate = app.add_subcommand(
        "estimate", "Monte Carlo estimate of a model quantity");
    add_param_flags(estimate, eo);
    estimate->add_option("--estimand", estimand,
                         "q | theta | en | fates")
        ->check(CLI::IsMember({"q", "theta", "en", "fates"}));
    estimate->add_option("--n", eo.n, "particles per one-sided trial");
    estimate->add_option("--k", k, "block length for --estimand en");
    estimate->add_option("--trials", eo.trials, "Monte Carlo trials");
    add_seed_flag(estimate, eo);
    add_spacing_flag(estimate, eo);
    add_threads_flag(estimate, eo);
    estimate->add_option("--out", eo.out, "output file (default stdout)");
    add_config_flag(estimate);
    estimate->callback([&] { rc = cmd_estimate(eo, estimand, k); });

    CommonOpts so;
    std::vector<double> grid;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "estimate q over a p grid next to the exact curve");
    sweep->add_option("--a", so.a, "arrow-vs-arrow single-survivor weight a");
    sweep->add_option("--b", so.b, "arrow-vs-arrow blockade weight b");
    sweep->add_option("--x", so.x, "arrow survival probability at a blockade");
    sweep->add_option("--p", grid, "grid point (repeatable)")->required();
    sweep->add_option("--n", so.n, "particles per trial");
    sweep->add_option("--trials", so.trials, "Monte Carlo trials per point");
    add_seed_flag(sweep, so);
    add_spacing_flag(sweep, so);
    add_threads_flag(sweep, so);
    sweep->add_option("--out", so.out, "output file (default stdout)");
    add_config_flag(sweep);
    sweep->callback([&] { rc = cmd_sweep(so, grid); });

    CommonOpts vo;
    std::vector<std::string> only;
    bool quick = false;
    double belt_scale = 1.0;
    std::string report;
    CLI::App* verify = app.add_subcommand(
        "verify", "run the statistical check suites and write a report");
    add_seed_flag(verify, vo);
    add_threads_flag(verify, vo);
    verify->add_option("--only", only, "run only this suite (repeatable)");
    verify->add_flag("--quick", quick,
                     "cut trials 100x and sizes 10x (smoke test)");
    verify->add_option("--belt-scale", belt_scale,
                       "rescale numeric tolerances (diagnostics)");
    verify->add_option("--report", report, "report CSV file (default stdout)");
    add_config_flag(verify);
    verify->callback(
        [&] { rc = cmd_verify(vo, only, quick, belt_scale, report); });

    CommonOpts to;
    CLI::App* theory = app.add_subcommand(
        "theory", "print the exact survival point as JSON");
    add_param_flags(theory, to);
    theory->add_option("--out", to.out, "output file (default stdout)");
    add_config_flag(theory);
    theory->callback([&] { rc = cmd_theory(to); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return rc;
}

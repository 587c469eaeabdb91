// Acceptance gate: one pass/fail line per pinned claim, each backed by a
// named check suite run at full scale. Exits nonzero if anything fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "tcba/harness.hpp"

namespace {

struct Criterion {
    std::string label;
    std::vector<std::string> suites;
};

const std::vector<Criterion> kCriteria = {
    {"zero-coalescence survival curve matches the inverse-root law",
     {"ba_curve"}},
    {"coalescing survival curves match the closed form", {"coalescing_curves"}},
    {"subcritical estimates stay within 0.03 of one", {"subcritical"}},
    {"critical densities hit their exact rationals", {"critical_density"}},
    {"coupled block counts are never subadditive", {"superadditivity"}},
    {"mean single-site block count matches its closed form",
     {"mean_first_count"}},
    {"collision fate ratios and visit identities hold at 4 sigma",
     {"identities"}},
    {"lazy and tape randomness backends are equivalent",
     {"backend_equivalence"}},
    {"probe visits are monotone under interval growth", {"monotonicity"}},
    {"visit estimates are invariant to the spacing distribution",
     {"spacing_invariance"}},
    {"blockade survival matches the squared complement of the visit rate",
     {"theta_relation"}},
};

}  // namespace

int main() {
    tcba::harness::SuiteOptions opt;
    unsigned hw = std::thread::hardware_concurrency();
    opt.threads = hw == 0 ? 1 : static_cast<int>(hw);

    bool all_ok = true;
    auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < kCriteria.size(); ++i) {
        const Criterion& cr = kCriteria[i];
        std::string detail;
        bool ok = true;
        try {
            std::vector<tcba::harness::CheckReport> reports =
                tcba::harness::run_default_suite(opt, cr.suites);
            double worst = 0.0;
            double worst_tol = 0.0;
            for (const tcba::harness::CheckReport& r : reports) {
                ok = ok && r.pass;
                double gap = std::abs(r.observed - r.expected);
                if (gap - r.tolerance >= worst - worst_tol) {
                    worst = gap;
                    worst_tol = r.tolerance;
                }
            }
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "%zu checks, worst |obs-exp| %.3g vs tol %.3g",
                          reports.size(), worst, worst_tol);
            detail = buf;
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("error: ") + e.what();
        }
        all_ok = all_ok && ok;
        std::printf("%s  %2zu. %s (%s)\n", ok ? "PASS" : "FAIL", i + 1,
                    cr.label.c_str(), detail.c_str());
        std::fflush(stdout);
    }
    auto dt = std::chrono::duration_cast<std::chrono::seconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::printf("%s in %llds with %d worker threads\n",
                all_ok ? "all criteria passed" : "CRITERIA FAILED",
                static_cast<long long>(dt), opt.threads);
    return all_ok ? 0 : 1;
}

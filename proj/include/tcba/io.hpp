#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>

#include "tcba/engine.hpp"
#include "tcba/params.hpp"
#include "tcba/stats.hpp"

namespace tcba {
namespace io {

// CSV reals are fixed at 6 significant digits so outputs diff cleanly.
inline std::string real6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Event dumps round-trip exactly, so they carry full double precision.
inline std::string real17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline constexpr const char* kEstimateCsvHeader =
    "estimand,a,b,x,p,n,trials,value,stderr,bias";

inline void write_estimate_row(std::ostream& os, const std::string& estimand,
                               const ModelParams& mp,
                               const stats::Estimate& est) {
    os << estimand << ',' << real6(mp.a) << ',' << real6(mp.b) << ','
       << real6(mp.x) << ',' << real6(mp.p) << ',' << est.truncation_n << ','
       << est.trials << ',' << real6(est.value) << ',' << real6(est.se) << ','
       << stats::to_string(est.bias) << '\n';
}

inline constexpr const char* kSweepCsvHeader =
    "p,a,b,x,n,trials,q_hat,stderr,q_theory,p_star";

inline void write_sweep_row(std::ostream& os, const ModelParams& mp,
                            const stats::Estimate& est, double q_theory,
                            double p_star) {
    os << real6(mp.p) << ',' << real6(mp.a) << ',' << real6(mp.b) << ','
       << real6(mp.x) << ',' << est.truncation_n << ',' << est.trials << ','
       << real6(est.value) << ',' << real6(est.se) << ',' << real6(q_theory)
       << ',' << real6(p_star) << '\n';
}

// One collision event per line, fixed field order.
inline void write_event_jsonl(std::ostream& os, const CollisionEvent& e) {
    os << "{\"t\":" << real17(e.time) << ",\"loc\":" << real17(e.location)
       << ",\"kind\":\"" << to_string(e.kind) << "\",\"left_id\":" << e.left_id
       << ",\"right_id\":" << e.right_id << ",\"outcome\":\""
       << to_string(e.outcome) << "\",\"generated_id\":";
    if (e.generated_id)
        os << *e.generated_id;
    else
        os << "null";
    os << "}\n";
}

inline void write_events_jsonl(std::ostream& os, const CollisionLog& log) {
    for (const CollisionEvent& e : log.events) write_event_jsonl(os, e);
}

inline void write_survivor_summary(std::ostream& os, const CollisionLog& log) {
    os << "survivors " << log.survivors.size() << '\n';
    for (const SurvivorInfo& s : log.survivors) {
        os << s.id << ' ' << to_string(s.velocity);
        if (s.quiver_remaining) os << ' ' << *s.quiver_remaining;
        os << '\n';
    }
}

}  // namespace io
}  // namespace tcba

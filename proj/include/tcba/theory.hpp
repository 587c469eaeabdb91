#pragma once

#include <cmath>
#include <optional>

#include "tcba/errors.hpp"
#include "tcba/params.hpp"

namespace tcba {
namespace theory {

// Generating-function kernel whose root in v at u = p is the visit
// probability q(p). g(u, 1) = 0 picks out the critical density.
inline double g(const ModelParams& mp, double u, double v) {
    double a = mp.a, b = mp.b, x = mp.x;
    double c = mp.c();
    double num = 1.0 - u - 2.0 * (1.0 - x) * u * v - b * (1.0 - x) * v * v -
                 c * (1.0 - x) * u * v * v;
    double den = 2.0 - a + b * (1.0 - x) * (2.0 - v) * v;
    return num / den;
}

// Closed-form partials of g. Both are strictly negative on [0,1]^2, which is
// what pins q(p) as the unique root and makes it decreasing in p.
inline double dg_du(const ModelParams& mp, double v) {
    double b = mp.b, x = mp.x;
    double c = mp.c();
    double num = v * v * (1.0 - x) * c + 2.0 * v * (1.0 - x) + 1.0;
    double den = 2.0 - mp.a + b * (2.0 - v) * v * (1.0 - x);
    return -num / den;
}

inline double dg_dv(const ModelParams& mp, double u, double v) {
    double a = mp.a, b = mp.b, x = mp.x;
    double num = 2.0 * (1.0 - x) * ((2.0 - a) * u + b * (1.0 - u)) *
                 ((1.0 - a) * v + b * v * v * (1.0 - x) + 1.0);
    double den = 2.0 - a + b * (2.0 - v) * v * (1.0 - x);
    return -num / (den * den);
}

// Critical density: the unique root of g(u, 1) = 0 in u.
inline double p_star(const ModelParams& mp) {
    double b = mp.b, x = mp.x;
    return (1.0 - b * (1.0 - x)) /
           (4.0 - 3.0 * x - (mp.a + mp.b) * (1.0 - x));
}

// Critical densities never exceed 1/(2-x) < 1.
inline double pc_upper_bound(const ModelParams& mp) {
    return 1.0 / (2.0 - mp.x);
}

inline double discriminant(const ModelParams& mp, double p) {
    double a = mp.a, b = mp.b, x = mp.x;
    return (1.0 - x) *
           (b * (1.0 - p) * (1.0 - p) - p * (a * (1.0 - p) + p * x - 1.0));
}

struct QRoots {
    double q_minus = 0.0;  // negative on [0,1)
    double q_plus = 0.0;   // crosses 1 exactly at p_star
};

// The two roots of g(p, v) = 0 in v.
inline QRoots q_roots(const ModelParams& mp, double p) {
    double a = mp.a, b = mp.b, x = mp.x;
    double den = (1.0 - x) * ((1.0 - a) * p + b * (1.0 - p));
    if (den == 0.0)
        throw DegenerateDenominator(
            "q_roots: (1-x)((1-a)p + b(1-p)) vanishes (p=0 with b=0)");
    double root = std::sqrt(discriminant(mp, p));
    double shift = -p * (1.0 - x);
    return QRoots{(shift - root) / den, (shift + root) / den};
}

// Probability that the origin is visited in the one-sided process:
// 1 up to the critical density, then the q_plus branch.
inline double q_theory(const ModelParams& mp, double p) {
    if (p <= p_star(mp)) return 1.0;
    return q_roots(mp, p).q_plus;
}

// E N_1 = p - (1-p)/(1-x): one particle is a blockade worth +1 with
// probability p, else an arrow whose mean quiver is 1/(1-x).
inline double expected_N1(const ModelParams& mp) {
    return mp.p - (1.0 - mp.p) / (1.0 - mp.x);
}

struct SRTheory {
    double s = 0.0;      // P(probe visited and first particle dies at a blockade)
    double r = 0.0;      // P(probe not visited and first particle dies at a blockade)
    double p_hat = 0.0;  // P(first particle fuses with a left arrow)
    double p_rml = 0.0;  // P(first particle mutually annihilates with a left arrow)
};

// Closed forms for the first-particle fate probabilities, given q = q(p).
// The mutual-annihilation weight c must be positive: p_hat = (b/c) p_rml.
inline SRTheory s_r_theory(const ModelParams& mp, double p) {
    double a = mp.a, b = mp.b, x = mp.x;
    double c = mp.c();
    if (c <= 0.0)
        throw CZeroError("s_r_theory: requires c = 1-(a+b) > 0");
    double q = q_theory(mp, p);
    SRTheory out;
    out.p_rml = c *
                (p * q * q * (1.0 - x) - 2.0 * p * q * (1.0 - x) - p + 1.0) /
                (2.0 - a + b * (2.0 - q) * q * (1.0 - x));
    out.p_hat = (b / c) * out.p_rml;
    out.s = 0.5 * (p + out.p_hat) * (1.0 - x) * q * q;
    out.r = (p + out.p_hat) * (1.0 - x) * q * (1.0 - q);
    return out;
}

// Candidate relations between the blockade survival probability theta and the
// one-sided visit probability q. Which one the process obeys is settled
// empirically by the harness; the origin blockade survives iff neither side
// visits it, and the two sides are independent, which favors the square.
inline double theta_square_of_complement(double q) {
    return (1.0 - q) * (1.0 - q);
}

inline double theta_complement_of_square(double q) { return 1.0 - q * q; }

struct TheoryPoint {
    ModelParams params;
    double p_star = 0.0;
    double q = 0.0;
    std::optional<double> q_plus;  // empty where the root formula degenerates
    std::optional<double> q_minus;
    double discriminant = 0.0;
};

inline TheoryPoint theory_point(const ModelParams& mp) {
    TheoryPoint tp;
    tp.params = mp;
    tp.p_star = p_star(mp);
    tp.q = q_theory(mp, mp.p);
    tp.discriminant = discriminant(mp, mp.p);
    if ((1.0 - mp.x) * ((1.0 - mp.a) * mp.p + mp.b * (1.0 - mp.p)) != 0.0) {
        QRoots roots = q_roots(mp, mp.p);
        tp.q_plus = roots.q_plus;
        tp.q_minus = roots.q_minus;
    }
    return tp;
}

}  // namespace theory
}  // namespace tcba

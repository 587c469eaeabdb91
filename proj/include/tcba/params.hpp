#pragma once

#include <stdexcept>
#include <string>

namespace tcba {

enum class Velocity : int { Left = -1, Still = 0, Right = +1 };

inline const char* to_string(Velocity v) {
    switch (v) {
        case Velocity::Left: return "left";
        case Velocity::Still: return "still";
        case Velocity::Right: return "right";
    }
    return "?";
}

// Model parameters. When two arrows meet: both survive never; the left-moving
// one survives with probability a/2, the right-moving one with a/2, they fuse
// into a blockade with probability b, and mutually annihilate with
// c = 1-(a+b). An arrow meeting a blockade destroys it and survives with
// probability x, else both die. Particle velocities are Still with
// probability p and Left/Right with (1-p)/2 each.
struct ModelParams {
    double a = 0.0;
    double b = 0.0;
    double x = 0.0;
    double p = 0.0;

    double c() const { return 1.0 - (a + b); }

    static ModelParams validate(double a, double b, double x, double p) {
        auto bad = [](const std::string& msg) {
            throw std::invalid_argument("ModelParams: " + msg);
        };
        if (!(a >= 0.0 && a < 1.0)) bad("a must lie in [0,1)");
        if (!(b >= 0.0 && b < 1.0)) bad("b must lie in [0,1)");
        if (!(x >= 0.0 && x < 1.0)) bad("x must lie in [0,1)");
        if (!(a + b <= 1.0)) bad("a+b must not exceed 1");
        if (!(p >= 0.0 && p < 1.0)) bad("p must lie in [0,1)");
        return ModelParams{a, b, x, p};
    }

    ModelParams with_p(double new_p) const {
        return validate(a, b, x, new_p);
    }
};

}  // namespace tcba

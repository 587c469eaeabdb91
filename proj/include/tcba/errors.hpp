#pragma once

#include <stdexcept>
#include <string>

namespace tcba {

// Two predicted collisions coincide in both time and location within 1e-12.
// Continuous spacings make this a measure-zero event; crafted lattice-like
// configurations can trigger it and must not be resolved in arbitrary order.
struct TieError : std::runtime_error {
    explicit TieError(const std::string& what) : std::runtime_error(what) {}
};

// A left arrow needed more arrow-arrow instructions than its tape holds.
struct QueueExhausted : std::runtime_error {
    explicit QueueExhausted(const std::string& what) : std::runtime_error(what) {}
};

// Root formulas divide by (1-x)((1-a)p + b(1-p)), which vanishes at p=0, b=0.
struct DegenerateDenominator : std::runtime_error {
    explicit DegenerateDenominator(const std::string& what) : std::runtime_error(what) {}
};

// s/r decomposition requires a positive mutual-annihilation weight c = 1-(a+b).
struct CZeroError : std::runtime_error {
    explicit CZeroError(const std::string& what) : std::runtime_error(what) {}
};

// The theta comparison matched both candidate relations or neither.
struct AmbiguousVerdict : std::runtime_error {
    explicit AmbiguousVerdict(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tcba

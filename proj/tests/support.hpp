// support.hpp — Shared helpers for the test binaries

#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "fdd/floquet.hpp"
#include "fdd/linalg.hpp"

namespace fdd::test {

inline double rel_err(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Smallest distance between two angles modulo omega.
inline double zone_distance(double a, double b, double omega) {
    const double d = std::remainder(a - b, omega);
    return std::abs(d);
}

// Deterministic random drives; omega = 1, rabi in [rabi_lo, rabi_hi], omega_eg in [eg_lo, eg_hi].
class DriveSampler {
public:
    explicit DriveSampler(unsigned seed, double rabi_lo = 0.0, double rabi_hi = 0.8, double eg_lo = 0.2,
                          double eg_hi = 1.8)
        : rng_(seed), rabi_(rabi_lo, rabi_hi), eg_(eg_lo, eg_hi) {}

    floquet::DriveParams next() { return floquet::DriveParams::from_transition(1.0, rabi_(rng_), eg_(rng_)); }

private:
    std::mt19937 rng_;
    std::uniform_real_distribution<double> rabi_, eg_;
};

} // namespace fdd::test

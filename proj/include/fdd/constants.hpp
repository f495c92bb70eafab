// constants.hpp — CODATA 2018 physical constants in SI units

#pragma once

#include <numbers>

namespace fdd::constants {

inline constexpr double pi = std::numbers::pi;

inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double epsilon0 = 8.8541878128e-12;     // F / m
inline constexpr double speed_of_light = 299792458.0;    // m / s
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double bohr_radius = 5.29177210903e-11; // m
inline constexpr double boltzmann = 1.380649e-23;        // J / K

// Atomic unit of electric dipole moment, e a0.
inline constexpr double ea0 = elementary_charge * bohr_radius;

} // namespace fdd::constants

// bath.hpp — Closed-form spectral functions of the shared electromagnetic reservoir
//
// Rates and energies are returned in rad/s (SI, with hbar made explicit).

#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace fdd::bath {

// Geometry of one atom pair.
struct AtomGeometry {
    double separation{0.0}; // r_ij, m
    double dipole_mag{0.0}; // C m
    double theta_d{0.0};    // angle between dipoles and interatomic axis, rad

    void validate() const;
};

// N atoms with parallel dipoles.
class AtomArray {
public:
    AtomArray(std::vector<Eigen::Vector3d> positions, Eigen::Vector3d dipole_axis,
              double dipole_mag);

    // Two atoms reproducing a given pair geometry; the axis lies along x and
    // the dipole in the x-z plane.
    static AtomArray pair(const AtomGeometry& geometry);

    int size() const { return static_cast<int>(positions_.size()); }
    const std::vector<Eigen::Vector3d>& positions() const { return positions_; }
    const Eigen::Vector3d& dipole_axis() const { return axis_; }
    double dipole_mag() const { return dipole_mag_; }

    AtomGeometry pair_geometry(int i, int j) const;

private:
    std::vector<Eigen::Vector3d> positions_;
    Eigen::Vector3d axis_;
    double dipole_mag_;
};

struct BathParams {
    double temperature{0.0}; // K

    void validate() const;
};

// Decay rate and dipole-dipole energy at one frequency.
struct SpectralValue {
    double gamma{0.0};
    double omega_dd{0.0};
};

enum class Coupling { self, cross };

// Gamma'_ii: mu^2 |omega|^3 / (3 pi eps0 hbar c^3).
double gamma_single(double omega, const AtomGeometry& geometry);

// Gamma'_ij at |omega| with xi = |omega| r / c.
double gamma_pair(double omega, const AtomGeometry& geometry);

// Tilde Omega_ij, even in omega; the static dipole limit at omega = 0.
double omega_dd(double omega, const AtomGeometry& geometry);

// Mean photon number 1 / (exp(hbar |nu| / kB T) - 1); zero at T = 0.
double thermal_occupation(double nu, const BathParams& bath);

// Gamma_ij(nu) including stimulated emission and absorption. Gamma(0) = 0.
double gamma_thermal(double nu, const AtomGeometry& geometry, const BathParams& bath,
                     Coupling coupling);

SpectralValue spectral_value(double nu, const AtomGeometry& geometry, const BathParams& bath,
                             Coupling coupling);

// Bracket functions of the pair rate and of the interaction energy, exposed
// for the cancellation-free small-xi checks.
double pair_rate_bracket(double xi, double theta_d);
double pair_rate_bracket_direct(double xi, double theta_d);

inline constexpr double small_xi_threshold = 1e-4;

} // namespace fdd::bath

// bath.cpp — Lehmberg-type rates and dipole-dipole energies

#include "fdd/bath.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fdd/constants.hpp"

namespace fdd::bath {

namespace {

using namespace fdd::constants;

// mu^2 / (eps0 hbar c^3), the common prefactor of all rate formulas (times omega^3).
double rate_prefactor(const AtomGeometry& g) {
    const double c3 = speed_of_light * speed_of_light * speed_of_light;
    return g.dipole_mag * g.dipole_mag / (epsilon0 * hbar * c3);
}

void require_separation(const AtomGeometry& g) {
    if (!(g.separation > 0.0) || !std::isfinite(g.separation))
        throw std::invalid_argument("interatomic separation must be > 0");
}

} // namespace

void AtomGeometry::validate() const {
    require_separation(*this);
    if (!(dipole_mag > 0.0) || !std::isfinite(dipole_mag))
        throw std::invalid_argument("dipole magnitude must be > 0");
    if (!(theta_d >= 0.0 && theta_d <= pi))
        throw std::invalid_argument("dipole angle theta_d must lie in [0, pi]");
}

AtomArray::AtomArray(std::vector<Eigen::Vector3d> positions, Eigen::Vector3d dipole_axis,
                     double dipole_mag)
    : positions_(std::move(positions)), axis_(dipole_axis), dipole_mag_(dipole_mag) {
    if (positions_.empty()) throw std::invalid_argument("atom array needs at least one atom");
    if (!(axis_.norm() > 0.0)) throw std::invalid_argument("dipole axis must be nonzero");
    if (!(dipole_mag > 0.0)) throw std::invalid_argument("dipole magnitude must be > 0");
    axis_.normalize();
    for (std::size_t i = 0; i < positions_.size(); ++i)
        for (std::size_t j = i + 1; j < positions_.size(); ++j)
            if (!((positions_[i] - positions_[j]).norm() > 0.0))
                throw std::invalid_argument("atom positions must be distinct");
}

AtomArray AtomArray::pair(const AtomGeometry& g) {
    g.validate();
    return AtomArray({Eigen::Vector3d::Zero(), Eigen::Vector3d(g.separation, 0.0, 0.0)},
                     Eigen::Vector3d(std::cos(g.theta_d), 0.0, std::sin(g.theta_d)),
                     g.dipole_mag);
}

AtomGeometry AtomArray::pair_geometry(int i, int j) const {
    const Eigen::Vector3d d = positions_.at(j) - positions_.at(i);
    const double r = d.norm();
    const double c = std::clamp(axis_.dot(d) / r, -1.0, 1.0);
    return {r, dipole_mag_, std::acos(c)};
}

void BathParams::validate() const {
    if (!(temperature >= 0.0) || !std::isfinite(temperature))
        throw std::invalid_argument("bath temperature must be >= 0");
}

double gamma_single(double omega, const AtomGeometry& g) {
    const double w = std::abs(omega);
    return rate_prefactor(g) * w * w * w / (3.0 * pi);
}

double pair_rate_bracket_direct(double xi, double theta_d) {
    // long double keeps cos/xi^2 - sin/xi^3 accurate near the series switchover.
    const long double x = xi;
    const long double c2 = std::cos(static_cast<long double>(theta_d)) *
                           std::cos(static_cast<long double>(theta_d));
    const long double s = std::sin(x);
    const long double c = std::cos(x);
    const long double far = (1.0L - c2) * s / x;
    const long double near = (1.0L - 3.0L * c2) * (x * c - s) / (x * x * x);
    return static_cast<double>(far + near);
}

double pair_rate_bracket(double xi, double theta_d) {
    if (xi >= small_xi_threshold) return pair_rate_bracket_direct(xi, theta_d);
    const double c2 = std::cos(theta_d) * std::cos(theta_d);
    const double x2 = xi * xi;
    // sin(x)/x and cos(x)/x^2 - sin(x)/x^3 to four terms.
    const double sinc = 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0;
    const double near = -1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0 + x2 * x2 * x2 / 45360.0;
    return (1.0 - c2) * sinc + (1.0 - 3.0 * c2) * near;
}

double gamma_pair(double omega, const AtomGeometry& g) {
    require_separation(g);
    const double w = std::abs(omega);
    const double xi = w * g.separation / speed_of_light;
    return rate_prefactor(g) * w * w * w / (2.0 * pi) * pair_rate_bracket(xi, g.theta_d);
}

double omega_dd(double omega, const AtomGeometry& g) {
    require_separation(g);
    // omega^3 times the bracket, rewritten as (c/r)^3 xi^3 [...] so that xi = 0 is regular.
    const double xi = std::abs(omega) * g.separation / speed_of_light;
    const double c2 = std::cos(g.theta_d) * std::cos(g.theta_d);
    const double s = std::sin(xi);
    const double c = std::cos(xi);
    const double bracket = -(1.0 - c2) * xi * xi * c + (1.0 - 3.0 * c2) * (xi * s + c);
    const double r3 = g.separation * g.separation * g.separation;
    return g.dipole_mag * g.dipole_mag / (4.0 * pi * epsilon0 * hbar * r3) * bracket;
}

double thermal_occupation(double nu, const BathParams& bath) {
    if (bath.temperature == 0.0 || nu == 0.0) return 0.0;
    const double x = hbar * std::abs(nu) / (boltzmann * bath.temperature);
    return 1.0 / std::expm1(x);
}

double gamma_thermal(double nu, const AtomGeometry& g, const BathParams& bath,
                     Coupling coupling) {
    if (nu == 0.0) return 0.0;
    const double prime = coupling == Coupling::self ? gamma_single(nu, g) : gamma_pair(nu, g);
    if (prime == 0.0) return 0.0;
    const double n = thermal_occupation(nu, bath);
    return nu > 0.0 ? prime * (1.0 + n) : prime * n;
}

SpectralValue spectral_value(double nu, const AtomGeometry& g, const BathParams& bath,
                             Coupling coupling) {
    return {gamma_thermal(nu, g, bath, coupling),
            coupling == Coupling::cross ? omega_dd(nu, g) : 0.0};
}

} // namespace fdd::bath

// floquet.hpp — Floquet problem of a single monochromatically driven two-level atom
//
// H(t) = rabi cos(omega t) sigma_x + omega_eg sigma_z / 2, bare basis ordering {|e>, |g>}.
// All frequencies are angular (rad/s); times in seconds.

#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace fdd::floquet {

using cd = std::complex<double>;
using Vec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;

class DriveParams {
public:
    static DriveParams from_transition(double omega, double rabi, double omega_eg);
    static DriveParams from_detuning(double omega, double rabi, double detuning);

    double omega() const { return omega_; }
    double rabi() const { return rabi_; }
    double omega_eg() const { return omega_eg_; }
    double detuning() const { return detuning_; } // omega - omega_eg
    double generalized_rabi() const;
    double period() const;

    // Instantaneous Hamiltonian at time t.
    Mat2 hamiltonian(double t) const;

private:
    DriveParams(double omega, double rabi, double omega_eg);

    double omega_;
    double rabi_;
    double omega_eg_;
    double detuning_;
};

// Uniform sampling of one drive period, t_k = k T / n.
class TimeGrid {
public:
    TimeGrid(int n_samples, double period);
    static TimeGrid for_drive(const DriveParams& drive, int n_samples = 1024);

    int n_samples() const { return n_samples_; }
    double period() const { return period_; }
    double step() const { return period_ / n_samples_; }
    double time(int k) const { return k * step(); }

private:
    int n_samples_;
    double period_;
};

enum class Stepper {
    midpoint, // exponential of the midpoint Hamiltonian, second order
    magnus4,  // two-exponential commutator-free Magnus, fourth order
};

struct Propagation {
    std::vector<Mat2> samples; // U(t_k, 0), k = 0 .. n-1
    Mat2 monodromy;            // U(T, 0)
};

// Folds mu into (-omega/2, omega/2].
double fold_to_zone(double mu, double omega);

Propagation propagate_period(const DriveParams& drive, const TimeGrid& grid,
                             Stepper stepper = Stepper::magnus4, int substeps = 1);

enum class Branch { plus = 0, minus = 1 };

struct FloquetMode {
    double quasienergy{0.0};        // folded, rad/s
    std::vector<Vec2> samples;      // phi(t_k)
    std::vector<Vec2> fourier;      // phi^(n), n = -M .. M

    const Vec2& sideband(int n, int truncation) const { return fourier[n + truncation]; }
};

struct FloquetSolution {
    DriveParams drive;
    TimeGrid grid;
    std::array<FloquetMode, 2> modes; // indexed by Branch
    int truncation{0};                // M
    double discarded_weight{0.0};     // max over branches of sum_{|n|>M} |phi^(n)|^2

    const FloquetMode& mode(Branch b) const { return modes[static_cast<int>(b)]; }
    double mu_plus() const { return mode(Branch::plus).quasienergy; }
    double mu_minus() const { return mode(Branch::minus).quasienergy; }
};

struct FloquetOptions {
    int truncation{16};                 // initial sideband cutoff M
    double discarded_tolerance{1e-12};  // adaptive rule for M
    double degeneracy_tolerance{1e-12}; // on monodromy eigenvalues
    Stepper stepper{Stepper::magnus4};
    int substeps{1};
};

// Throws DegeneracyError when U(T, 0) has (nearly) coincident eigenvalues.
FloquetSolution floquet_solve(const DriveParams& drive, const TimeGrid& grid,
                              const FloquetOptions& options = {});

// Quasienergies only, skipping mode and sideband construction. Labels follow
// the same rule as floquet_solve.
std::array<double, 2> quasienergies(const DriveParams& drive, const TimeGrid& grid,
                                    const FloquetOptions& options = {});

// Analytic rotating-wave dressed states.
struct DressedStates {
    double theta_m{0.0};
    double cos_theta{1.0};
    double sin_theta{0.0};
    double mu_plus{0.0};
    double mu_minus{0.0};
    double omega_gen{0.0};

    double cos_half() const;
    double sin_half() const;
    // Components at t = 0 in the {|e>, |g>} basis.
    Vec2 plus_state() const;
    Vec2 minus_state() const;
};

DressedStates dressed_states(const DriveParams& drive);

} // namespace fdd::floquet

// lindblad.hpp — Lindblad models, Liouvillians, integration and steady states
//
// Superoperators act on column-stacked density matrices.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fdd/bath.hpp"
#include "fdd/floquet.hpp"
#include "fdd/linalg.hpp"

namespace fdd::lindblad {

struct Channel {
    double rate{0.0};
    Matrix op;
    std::string label;
};

class LindbladModel {
public:
    // Validates Hermiticity and rate signs; round-off negative rates are clamped to zero.
    LindbladModel(Matrix hamiltonian, std::vector<Channel> channels);

    Eigen::Index dimension() const { return hamiltonian_.rows(); }
    const Matrix& hamiltonian() const { return hamiltonian_; }
    const std::vector<Channel>& channels() const { return channels_; }

private:
    Matrix hamiltonian_;
    std::vector<Channel> channels_;
};

class DensityMatrix {
public:
    // Checks Hermiticity and unit trace within `tolerance`, eigenvalues >= -1e-9.
    explicit DensityMatrix(Matrix rho, double tolerance = 1e-10);

    // Integrator output; invariants are asserted by tests rather than on construction.
    struct Unchecked {};
    DensityMatrix(Matrix rho, Unchecked);

    static DensityMatrix pure(const Vector& psi);
    static DensityMatrix basis_state(Eigen::Index dim, Eigen::Index index);

    const Matrix& matrix() const { return rho_; }
    Eigen::Index dimension() const { return rho_.rows(); }
    double trace() const { return rho_.trace().real(); }
    double purity() const { return (rho_ * rho_).trace().real(); }
    double min_eigenvalue() const;
    double population(Eigen::Index i) const { return rho_(i, i).real(); }

private:
    Matrix rho_;
};

// Dissipator part only: sum_k rate_k (L . L^dag - 1/2 {L^dag L, .}).
Matrix dissipator_superoperator(const std::vector<Channel>& channels, Eigen::Index dim);

Matrix build_liouvillian(const LindbladModel& model);

// exp(L t) by scaling and squaring.
Matrix superoperator_exponential(const Matrix& liouvillian, double t);

struct EvolveOptions {
    double step_fraction{1.0 / 50.0}; // dt <= step_fraction / max(|H|, max rate scale)
    long long max_steps{2'000'000'000LL};
};

// Fixed-step RK4 from rho0 at t = 0; returns the state at each requested time.
// Models without active channels are propagated by the exact unitary instead.
// Times must be non-negative and non-decreasing.
std::vector<DensityMatrix> evolve(const LindbladModel& model, const DensityMatrix& rho0,
                                  const std::vector<double>& times, const EvolveOptions& options = {});

// Same trajectory through the superoperator exponential.
std::vector<DensityMatrix> evolve_exact(const LindbladModel& model, const DensityMatrix& rho0,
                                        const std::vector<double>& times);

// Throws MultiplicityError when the kernel of the Liouvillian is not one-dimensional.
DensityMatrix steady_state(const LindbladModel& model, double gap_tolerance = 1e-12);

// Rotating-frame RWA reference model for one or two atoms in the bare product basis
// {|e>, |g>}^{\otimes N}.
LindbladModel obe_reference(const floquet::DriveParams& drive, const bath::AtomGeometry& geometry,
                            const bath::BathParams& bath, int n_atoms);

struct CoarseGrainedCoefficients {
    double c_pp{0.0};
    double c_pm{0.0};
};

CoarseGrainedCoefficients coarse_grained_coefficients(double theta_m, double omega_dd_value);
// Uses cos(theta) from the drive directly, so theta = pi/2 at zero detuning is exact.
CoarseGrainedCoefficients coarse_grained_coefficients(const floquet::DressedStates& dressed,
                                                      double omega_dd_value);

// Centered moving average with a window of `window` time units over uniform samples.
// Windows are truncated at the ends of the series.
std::vector<double> moving_average(const std::vector<double>& values, double sample_spacing,
                                   double window);

struct PopulationTrace {
    std::vector<double> times;
    std::vector<std::vector<double>> populations; // [sample][basis state]
};

// Max over samples and states of |a - b| after coarse-graining each side.
double population_deviation(const PopulationTrace& a, double window_a, const PopulationTrace& b,
                            double window_b);

struct ComparisonReport {
    PopulationTrace obe_coarse; // dressed-basis populations after coarse-graining
    PopulationTrace fme;        // Floquet-basis populations
    double max_deviation{0.0};
    double window{0.0};
    double target{0.05}; // artifact-defined agreement target
    bool within_target{false};
};

struct CompareOptions {
    int samples{4001};
    int initial_state{1}; // index in {++, +-, -+, --}
    double window_periods{10.0}; // coarse-graining window in units of 1/Omega_gen
    floquet::FloquetOptions floquet{};
    int n_samples{1024};
    double margin{0.1};
};

// Evolves the OBE and FME two-atom models from the same dressed product state.
// Refuses with HierarchyError unless both 1/omega << 1/Omega_gen << tau_s and the
// secular hierarchy hold. The sample count is raised so that at least 20 samples
// fall inside one coarse-graining window.
ComparisonReport fme_vs_obe_compare(const floquet::DriveParams& drive,
                                    const bath::AtomGeometry& geometry,
                                    const bath::BathParams& bath, double horizon,
                                    const CompareOptions& options = {});

} // namespace fdd::lindblad

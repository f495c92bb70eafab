// lindblad.cpp — Liouvillian assembly, RK4 and exponential propagation, steady states

#include "fdd/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "fdd/constants.hpp"
#include "fdd/dipole.hpp"
#include "fdd/errors.hpp"
#include "fdd/validity.hpp"

namespace fdd::lindblad {

namespace {

DensityMatrix make_unchecked(const Matrix& rho) { return DensityMatrix(rho, DensityMatrix::Unchecked{}); }

double rate_scale(const Channel& ch) {
    const double n = linalg::operator_norm(ch.op);
    return ch.rate * std::max(1.0, n * n);
}

} // namespace

LindbladModel::LindbladModel(Matrix hamiltonian, std::vector<Channel> channels)
    : hamiltonian_(std::move(hamiltonian)), channels_(std::move(channels)) {
    const Eigen::Index d = hamiltonian_.rows();
    if (d == 0 || hamiltonian_.cols() != d)
        throw std::invalid_argument("Hamiltonian must be a nonempty square matrix");
    const double h_scale = linalg::max_abs(hamiltonian_);
    if (linalg::max_abs(hamiltonian_ - hamiltonian_.adjoint()) > 1e-12 * h_scale)
        throw std::invalid_argument("Hamiltonian is not Hermitian");
    hamiltonian_ = linalg::hermitian_part(hamiltonian_);

    double max_rate = 0.0;
    for (const auto& ch : channels_) {
        if (ch.op.rows() != d || ch.op.cols() != d)
            throw std::invalid_argument("jump operator '" + ch.label + "' has wrong dimension");
        if (!std::isfinite(ch.rate)) throw std::invalid_argument("non-finite rate");
        max_rate = std::max(max_rate, std::abs(ch.rate));
    }
    const double tol = 1e-12 * std::max(max_rate, 1.0e-300);
    for (auto& ch : channels_) {
        if (ch.rate >= 0.0) continue;
        if (ch.rate < -tol)
            throw std::invalid_argument("negative rate " + std::to_string(ch.rate) +
                                        " on channel '" + ch.label + "'");
        log_warning("clamping round-off negative rate " + std::to_string(ch.rate) +
                    " on channel '" + ch.label + "' to zero");
        ch.rate = 0.0;
    }
}

DensityMatrix::DensityMatrix(Matrix rho, double tolerance) : rho_(std::move(rho)) {
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols())
        throw std::invalid_argument("density matrix must be square");
    if (linalg::max_abs(rho_ - rho_.adjoint()) > tolerance)
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(rho_.trace() - cd(1.0)) > tolerance)
        throw std::invalid_argument("density matrix trace differs from one");
    if (min_eigenvalue() < -1e-9) throw std::invalid_argument("density matrix is not positive");
}

DensityMatrix::DensityMatrix(Matrix rho, Unchecked) : rho_(std::move(rho)) {
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols())
        throw std::invalid_argument("density matrix must be square");
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
    const Vector n = psi / psi.norm();
    return DensityMatrix(n * n.adjoint());
}

DensityMatrix DensityMatrix::basis_state(Eigen::Index dim, Eigen::Index index) {
    Matrix rho = Matrix::Zero(dim, dim);
    rho(index, index) = 1.0;
    return DensityMatrix(rho);
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(linalg::hermitian_part(rho_), Eigen::EigenvaluesOnly);
    return eig.eigenvalues()(0);
}

Matrix dissipator_superoperator(const std::vector<Channel>& channels, Eigen::Index dim) {
    const Matrix id = Matrix::Identity(dim, dim);
    Matrix out = Matrix::Zero(dim * dim, dim * dim);
    for (const auto& ch : channels) {
        if (ch.rate == 0.0) continue;
        const Matrix ldl = ch.op.adjoint() * ch.op;
        out += ch.rate * (linalg::kron(ch.op.conjugate(), ch.op) -
                          0.5 * linalg::kron(id, ldl) - 0.5 * linalg::kron(ldl.transpose(), id));
    }
    return out;
}

Matrix build_liouvillian(const LindbladModel& model) {
    const Eigen::Index d = model.dimension();
    const Matrix id = Matrix::Identity(d, d);
    const Matrix& h = model.hamiltonian();
    const cd i(0.0, 1.0);
    Matrix l = -i * linalg::kron(id, h) + i * linalg::kron(h.transpose(), id);
    l += dissipator_superoperator(model.channels(), d);
    return l;
}

Matrix superoperator_exponential(const Matrix& liouvillian, double t) {
    const Matrix scaled = liouvillian * t;
    return scaled.exp();
}

std::vector<DensityMatrix> evolve(const LindbladModel& model, const DensityMatrix& rho0,
                                  const std::vector<double>& times, const EvolveOptions& options) {
    const Eigen::Index d = model.dimension();
    if (rho0.dimension() != d) throw std::invalid_argument("initial state dimension mismatch");

    const cd i(0.0, 1.0);
    Matrix h_eff = model.hamiltonian();
    double scale = linalg::operator_norm(model.hamiltonian());
    for (const auto& ch : model.channels()) {
        h_eff -= 0.5 * i * ch.rate * (ch.op.adjoint() * ch.op);
        scale = std::max(scale, rate_scale(ch));
    }
    const Matrix h_eff_dag = h_eff.adjoint();
    auto rhs = [&](const Matrix& rho) {
        Matrix out = -i * (h_eff * rho - rho * h_eff_dag);
        for (const auto& ch : model.channels())
            if (ch.rate != 0.0) out += ch.rate * (ch.op * rho * ch.op.adjoint());
        return out;
    };

    const bool dissipative = std::any_of(model.channels().begin(), model.channels().end(),
                                         [](const Channel& ch) { return ch.rate != 0.0; });
    Eigen::SelfAdjointEigenSolver<Matrix> hermitian;
    if (!dissipative) hermitian.compute(model.hamiltonian());

    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    Matrix rho = rho0.matrix();
    double t = 0.0;
    for (double target : times) {
        if (!(target >= t)) throw std::invalid_argument("evolve: times must be non-decreasing and >= 0");
        const double span = target - t;
        if (span > 0.0 && !dissipative) {
            // Closed system: the unitary is exact and keeps the purity.
            const Vector phase = (-i * span * hermitian.eigenvalues().cast<cd>()).array().exp();
            const Matrix u = hermitian.eigenvectors() * phase.asDiagonal() * hermitian.eigenvectors().adjoint();
            rho = linalg::hermitian_part(u * rho * u.adjoint());
        } else if (span > 0.0 && scale > 0.0) {
            const double dt_max = options.step_fraction / scale;
            const double steps_real = std::ceil(span / dt_max);
            if (steps_real > static_cast<double>(options.max_steps))
                throw StepSizeError("evolve: interval needs " + std::to_string(steps_real) +
                                    " steps; rates are too stiff for the fixed-step integrator");
            const long long steps = std::max(1LL, static_cast<long long>(steps_real));
            const double dt = span / static_cast<double>(steps);
            for (long long s = 0; s < steps; ++s) {
                const Matrix k1 = rhs(rho);
                const Matrix k2 = rhs(rho + 0.5 * dt * k1);
                const Matrix k3 = rhs(rho + 0.5 * dt * k2);
                const Matrix k4 = rhs(rho + dt * k3);
                rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                rho = linalg::hermitian_part(rho);
            }
        }
        t = target;
        out.push_back(make_unchecked(rho));
    }
    return out;
}

std::vector<DensityMatrix> evolve_exact(const LindbladModel& model, const DensityMatrix& rho0,
                                        const std::vector<double>& times) {
    const Eigen::Index d = model.dimension();
    if (rho0.dimension() != d) throw std::invalid_argument("initial state dimension mismatch");
    const Matrix l = build_liouvillian(model);

    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    Vector v = linalg::vec(rho0.matrix());
    double t = 0.0;
    double cached_span = -1.0;
    Matrix step;
    for (double target : times) {
        if (!(target >= t)) throw std::invalid_argument("evolve: times must be non-decreasing and >= 0");
        const double span = target - t;
        if (span > 0.0) {
            if (std::abs(span - cached_span) > 1e-12 * span) {
                step = superoperator_exponential(l, span);
                cached_span = span;
            }
            v = step * v;
        }
        t = target;
        out.push_back(make_unchecked(linalg::hermitian_part(linalg::unvec(v, d))));
    }
    return out;
}

DensityMatrix steady_state(const LindbladModel& model, double gap_tolerance) {
    const Eigen::Index d = model.dimension();
    const Matrix l = build_liouvillian(model);
    Eigen::BDCSVD<Matrix> svd(l, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double norm = sv(0);
    int kernel = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) <= gap_tolerance * norm) ++kernel;
    if (kernel != 1)
        throw MultiplicityError("steady state is not unique: Liouvillian kernel has dimension " +
                                    std::to_string(kernel),
                                kernel);

    const Vector v = svd.matrixV().col(sv.size() - 1);
    Matrix rho = linalg::unvec(v, d);
    rho /= rho.trace();
    rho = linalg::hermitian_part(rho);
    rho /= rho.trace().real();

    const double residual = (l * linalg::vec(rho)).norm();
    if (residual > 1e-10 * norm)
        throw std::runtime_error("steady state residual " + std::to_string(residual) +
                                 " exceeds 1e-10 |L|");
    return make_unchecked(rho);
}

LindbladModel obe_reference(const floquet::DriveParams& drive, const bath::AtomGeometry& geometry,
                            const bath::BathParams& bath, int n_atoms) {
    using bath::Coupling;
    if (n_atoms < 1 || n_atoms > 2)
        throw std::invalid_argument("OBE reference supports one or two atoms");
    const double w_eg = drive.omega_eg();
    const Matrix sx = linalg::sigma_x();
    const Matrix sz = linalg::sigma_z();
    const Matrix sm = linalg::sigma_minus();
    const Matrix sp = linalg::sigma_plus();

    const Matrix single = 0.5 * drive.rabi() * sx - 0.5 * drive.detuning() * sz;
    Matrix h = Matrix::Zero(1 << n_atoms, 1 << n_atoms);
    for (int i = 0; i < n_atoms; ++i) h += linalg::embed(single, i, n_atoms);

    const double g11_down = bath::gamma_thermal(w_eg, geometry, bath, Coupling::self);
    const double g11_up = bath::gamma_thermal(-w_eg, geometry, bath, Coupling::self);
    std::vector<Channel> channels;
    if (n_atoms == 1) {
        channels.push_back({g11_down, sm, "decay"});
        channels.push_back({g11_up, sp, "absorption"});
        return LindbladModel(h, channels);
    }

    const double dd = bath::omega_dd(w_eg, geometry);
    const Matrix sp1 = linalg::embed(sp, 0, 2);
    const Matrix sm1 = linalg::embed(sm, 0, 2);
    const Matrix sp2 = linalg::embed(sp, 1, 2);
    const Matrix sm2 = linalg::embed(sm, 1, 2);
    h += dd * (sp1 * sm2 + sm1 * sp2);

    const double g12_down = bath::gamma_thermal(w_eg, geometry, bath, Coupling::cross);
    const double g12_up = bath::gamma_thermal(-w_eg, geometry, bath, Coupling::cross);
    const double r = 1.0 / std::sqrt(2.0);
    channels.push_back({g11_down + g12_down, r * (sm1 + sm2), "superradiant"});
    channels.push_back({g11_down - g12_down, r * (sm1 - sm2), "subradiant"});
    channels.push_back({g11_up + g12_up, r * (sp1 + sp2), "absorption_sym"});
    channels.push_back({g11_up - g12_up, r * (sp1 - sp2), "absorption_anti"});
    return LindbladModel(h, channels);
}

namespace {

CoarseGrainedCoefficients coarse_grained_from_cos(double cos_theta, double omega_dd_value) {
    const double c2 = 0.5 * (1.0 + cos_theta); // cos^2(theta/2)
    const double s2 = 0.5 * (1.0 - cos_theta); // sin^2(theta/2)
    return {2.0 * omega_dd_value * c2 * s2, omega_dd_value * (s2 * s2 + c2 * c2)};
}

} // namespace

CoarseGrainedCoefficients coarse_grained_coefficients(const floquet::DressedStates& dressed,
                                                      double omega_dd_value) {
    return coarse_grained_from_cos(dressed.cos_theta, omega_dd_value);
}

CoarseGrainedCoefficients coarse_grained_coefficients(double theta_m, double omega_dd_value) {
    if (!(theta_m >= 0.0 && theta_m <= constants::pi))
        throw std::invalid_argument("mixing angle must lie in [0, pi]");
    return coarse_grained_from_cos(std::cos(theta_m), omega_dd_value);
}

std::vector<double> moving_average(const std::vector<double>& values, double sample_spacing,
                                   double window) {
    const long n = static_cast<long>(values.size());
    if (n == 0 || window <= 0.0) return values;
    if (!(sample_spacing > 0.0)) throw std::invalid_argument("sample spacing must be > 0");
    const long half = std::lround(0.5 * window / sample_spacing);
    std::vector<double> prefix(n + 1, 0.0);
    for (long k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + values[k];
    std::vector<double> out(n);
    for (long k = 0; k < n; ++k) {
        const long lo = std::max(0L, k - half);
        const long hi = std::min(n - 1, k + half);
        out[k] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }
    return out;
}

double population_deviation(const PopulationTrace& a, double window_a, const PopulationTrace& b,
                            double window_b) {
    if (a.times != b.times || a.populations.size() != b.populations.size())
        throw std::invalid_argument("population traces must share their time grid");
    if (a.times.empty()) return 0.0;
    const std::size_t states = a.populations.front().size();
    const double spacing = a.times.size() > 1 ? a.times[1] - a.times[0] : 1.0;
    double worst = 0.0;
    for (std::size_t s = 0; s < states; ++s) {
        std::vector<double> sa, sb;
        for (std::size_t k = 0; k < a.times.size(); ++k) {
            sa.push_back(a.populations[k].at(s));
            sb.push_back(b.populations[k].at(s));
        }
        const auto ca = moving_average(sa, spacing, window_a);
        const auto cb = moving_average(sb, spacing, window_b);
        for (std::size_t k = 0; k < ca.size(); ++k) worst = std::max(worst, std::abs(ca[k] - cb[k]));
    }
    return worst;
}

ComparisonReport fme_vs_obe_compare(const floquet::DriveParams& drive,
                                    const bath::AtomGeometry& geometry,
                                    const bath::BathParams& bath, double horizon,
                                    const CompareOptions& options) {
    if (!(horizon > 0.0)) throw std::invalid_argument("comparison horizon must be > 0");
    if (options.initial_state < 0 || options.initial_state > 3)
        throw std::invalid_argument("initial state index must be in [0, 3]");

    validity::HierarchyOptions hopt;
    hopt.margin = options.margin;
    hopt.n_samples = options.n_samples;
    const auto report = validity::timescale_report(drive, geometry, bath, hopt);
    if (!report.hierarchy_ok || !report.rwa_ok) {
        std::ostringstream msg;
        msg << "FME/OBE comparison refused: " << validity::describe(report);
        throw HierarchyError(msg.str());
    }

    const auto sol = floquet::floquet_solve(
        drive, floquet::TimeGrid::for_drive(drive, options.n_samples), options.floquet);
    const LindbladModel fme = dipole::fme_model(sol, geometry, bath);
    const LindbladModel obe = obe_reference(drive, geometry, bath, 2);

    const auto dressed = floquet::dressed_states(drive);
    Matrix u(2, 2);
    u.col(0) = dressed.plus_state();
    u.col(1) = dressed.minus_state();
    const Matrix u2 = linalg::kron(u, u);

    const double window = options.window_periods / dressed.omega_gen;
    const long needed = static_cast<long>(std::ceil(20.0 * horizon / window)) + 1;
    const long n = std::max<long>(options.samples, needed);
    std::vector<double> times(n);
    for (long k = 0; k < n; ++k) times[k] = horizon * static_cast<double>(k) / static_cast<double>(n - 1);

    const auto k0 = options.initial_state;
    const DensityMatrix fme0 = DensityMatrix::basis_state(4, k0);
    const DensityMatrix obe0(u2 * fme0.matrix() * u2.adjoint());

    const auto fme_traj = evolve_exact(fme, fme0, times);
    const auto obe_traj = evolve_exact(obe, obe0, times);

    ComparisonReport out;
    out.window = window;
    PopulationTrace obe_raw;
    obe_raw.times = times;
    out.fme.times = times;
    for (long k = 0; k < n; ++k) {
        const Matrix dressed_rho = u2.adjoint() * obe_traj[k].matrix() * u2;
        std::vector<double> p_obe(4), p_fme(4);
        for (int s = 0; s < 4; ++s) {
            p_obe[s] = dressed_rho(s, s).real();
            p_fme[s] = fme_traj[k].population(s);
        }
        obe_raw.populations.push_back(std::move(p_obe));
        out.fme.populations.push_back(std::move(p_fme));
    }

    out.obe_coarse.times = times;
    out.obe_coarse.populations.assign(n, std::vector<double>(4));
    const double spacing = times[1] - times[0];
    for (int s = 0; s < 4; ++s) {
        std::vector<double> series(n);
        for (long k = 0; k < n; ++k) series[k] = obe_raw.populations[k][s];
        const auto smooth = moving_average(series, spacing, window);
        for (long k = 0; k < n; ++k) out.obe_coarse.populations[k][s] = smooth[k];
    }
    out.max_deviation = population_deviation(obe_raw, window, out.fme, 0.0);
    out.within_target = out.max_deviation <= out.target;
    return out;
}

} // namespace fdd::lindblad

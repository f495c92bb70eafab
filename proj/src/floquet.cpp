// floquet.cpp — Single-atom propagation, monodromy diagonalization and sidebands

#include "fdd/floquet.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "fdd/errors.hpp"

namespace fdd::floquet {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// exp(-i dt (a sigma_x + b sigma_z)) in closed form.
Mat2 exp_traceless(double a, double b, double dt) {
    const double r = std::hypot(a, b);
    const double phase = r * dt;
    const double c = std::cos(phase);
    const double s_over_r = r > 0.0 ? std::sin(phase) / r : dt;
    Mat2 u;
    u << cd(c, -s_over_r * b), cd(0.0, -s_over_r * a),
         cd(0.0, -s_over_r * a), cd(c, s_over_r * b);
    return u;
}

// Coefficients (a, b) of H(t) = a sigma_x + b sigma_z.
struct PauliCoeffs {
    double x;
    double z;
};

PauliCoeffs coeffs_at(const DriveParams& d, double t) {
    return {d.rabi() * std::cos(d.omega() * t), 0.5 * d.omega_eg()};
}

Mat2 step(const DriveParams& d, double t, double dt, Stepper stepper) {
    if (stepper == Stepper::midpoint) {
        const auto h = coeffs_at(d, t + 0.5 * dt);
        return exp_traceless(h.x, h.z, dt);
    }
    // Gauss-Legendre nodes with the two-exponential fourth-order weights.
    static const double sqrt3 = std::sqrt(3.0);
    static const double c1 = 0.5 - sqrt3 / 6.0;
    static const double c2 = 0.5 + sqrt3 / 6.0;
    static const double a1 = 0.25 + sqrt3 / 6.0;
    static const double a2 = 0.25 - sqrt3 / 6.0;
    const auto h1 = coeffs_at(d, t + c1 * dt);
    const auto h2 = coeffs_at(d, t + c2 * dt);
    const Mat2 first = exp_traceless(a1 * h1.x + a2 * h2.x, a1 * h1.z + a2 * h2.z, dt);
    const Mat2 second = exp_traceless(a2 * h1.x + a1 * h2.x, a2 * h1.z + a1 * h2.z, dt);
    return second * first;
}

template <typename Visitor>
Mat2 integrate(const DriveParams& d, const TimeGrid& grid, Stepper stepper, int substeps,
               Visitor&& visit) {
    if (substeps < 1) throw std::invalid_argument("substeps must be >= 1");
    const double dt = grid.step() / substeps;
    Mat2 u = Mat2::Identity();
    for (int k = 0; k < grid.n_samples(); ++k) {
        visit(k, u);
        const double t0 = grid.time(k);
        for (int s = 0; s < substeps; ++s)
            u = step(d, t0 + s * dt, dt, stepper) * u;
    }
    return u;
}

struct Monodromy {
    std::array<Vec2, 2> vectors; // eigenvectors, labeled plus/minus
    std::array<double, 2> mu;    // folded quasienergies, labeled plus/minus
};

Vec2 fix_phase(Vec2 v) {
    const int big = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
    const cd p = v(big) / std::abs(v(big));
    return v / p;
}

Monodromy diagonalize(const DriveParams& d, const Mat2& u_period, const FloquetOptions& opt) {
    Eigen::ComplexSchur<Mat2> schur(u_period);
    const Mat2& t = schur.matrixT();
    const Mat2& q = schur.matrixU();
    const cd l0 = t(0, 0);
    const cd l1 = t(1, 1);
    if (std::abs(l0 - l1) < opt.degeneracy_tolerance)
        throw DegeneracyError("monodromy eigenvalues are degenerate (|l1 - l2| = " +
                              std::to_string(std::abs(l0 - l1)) +
                              "); perturb the drive parameters");

    const double period = d.period();
    std::array<Vec2, 2> v{fix_phase(q.col(0)), fix_phase(q.col(1))};
    std::array<double, 2> mu{fold_to_zone(-std::arg(l0) / period, d.omega()),
                             fold_to_zone(-std::arg(l1) / period, d.omega())};

    // Branch "+" is the eigenvector closest to the analytic dressed state |+>.
    int plus = 0;
    const double tie = 1e-12;
    const double omega_gen = d.generalized_rabi();
    bool decided = false;
    if (omega_gen > 0.0) {
        const Vec2 ref = dressed_states(d).plus_state();
        const double o0 = std::norm(v[0].dot(ref));
        const double o1 = std::norm(v[1].dot(ref));
        if (std::abs(o0 - o1) > tie) {
            plus = o0 > o1 ? 0 : 1;
            decided = true;
        }
    }
    if (!decided) {
        const double e0 = std::norm(v[0](0));
        const double e1 = std::norm(v[1](0));
        if (std::abs(e0 - e1) > tie)
            plus = e0 > e1 ? 0 : 1;
        else
            plus = mu[0] >= mu[1] ? 0 : 1;
    }
    const int minus = 1 - plus;
    return {{v[plus], v[minus]}, {mu[plus], mu[minus]}};
}

std::vector<Vec2> sidebands(const std::vector<Vec2>& samples, int truncation,
                            const std::vector<cd>& twiddle) {
    const int n = static_cast<int>(samples.size());
    std::vector<Vec2> out(2 * truncation + 1, Vec2::Zero());
    for (int m = -truncation; m <= truncation; ++m) {
        Vec2 acc = Vec2::Zero();
        const int stride = ((m % n) + n) % n;
        int idx = 0;
        for (int k = 0; k < n; ++k) {
            acc += samples[k] * twiddle[idx];
            idx += stride;
            if (idx >= n) idx -= n;
        }
        out[m + truncation] = acc / static_cast<double>(n);
    }
    return out;
}

double retained_weight(const std::vector<Vec2>& fourier) {
    double w = 0.0;
    for (const auto& f : fourier) w += f.squaredNorm();
    return w;
}

} // namespace

DriveParams::DriveParams(double omega, double rabi, double omega_eg)
    : omega_(omega), rabi_(rabi), omega_eg_(omega_eg), detuning_(omega - omega_eg) {
    if (!std::isfinite(omega) || !std::isfinite(rabi) || !std::isfinite(omega_eg))
        throw std::invalid_argument("drive parameters must be finite");
    if (omega <= 0.0) throw std::invalid_argument("drive frequency omega must be > 0");
    if (omega_eg <= 0.0) throw std::invalid_argument("transition frequency omega_eg must be > 0");
    if (rabi < 0.0) throw std::invalid_argument("Rabi frequency must be >= 0");
}

DriveParams DriveParams::from_transition(double omega, double rabi, double omega_eg) {
    return DriveParams(omega, rabi, omega_eg);
}

DriveParams DriveParams::from_detuning(double omega, double rabi, double detuning) {
    return DriveParams(omega, rabi, omega - detuning);
}

double DriveParams::generalized_rabi() const { return std::hypot(detuning_, rabi_); }

double DriveParams::period() const { return two_pi / omega_; }

Mat2 DriveParams::hamiltonian(double t) const {
    const double x = rabi_ * std::cos(omega_ * t);
    Mat2 h;
    h << 0.5 * omega_eg_, x, x, -0.5 * omega_eg_;
    return h;
}

TimeGrid::TimeGrid(int n_samples, double period) : n_samples_(n_samples), period_(period) {
    if (!is_power_of_two(n_samples) || n_samples < 64)
        throw std::invalid_argument("n_samples must be a power of two >= 64, got " +
                                    std::to_string(n_samples));
    if (!(period > 0.0) || !std::isfinite(period))
        throw std::invalid_argument("period must be positive and finite");
}

TimeGrid TimeGrid::for_drive(const DriveParams& drive, int n_samples) {
    return TimeGrid(n_samples, drive.period());
}

double fold_to_zone(double mu, double omega) {
    if (!std::isfinite(mu) || !std::isfinite(omega))
        throw std::invalid_argument("fold_to_zone: non-finite input");
    if (omega <= 0.0) throw std::invalid_argument("fold_to_zone: omega must be > 0");
    double r = mu - omega * std::ceil(mu / omega - 0.5);
    // Round-off can leave r a hair outside the half-open zone.
    if (r <= -0.5 * omega) r += omega;
    if (r > 0.5 * omega) r -= omega;
    return r;
}

Propagation propagate_period(const DriveParams& drive, const TimeGrid& grid, Stepper stepper,
                             int substeps) {
    Propagation out;
    out.samples.reserve(grid.n_samples());
    out.monodromy = integrate(drive, grid, stepper, substeps,
                              [&](int, const Mat2& u) { out.samples.push_back(u); });
    return out;
}

FloquetSolution floquet_solve(const DriveParams& drive, const TimeGrid& grid,
                              const FloquetOptions& options) {
    const int n = grid.n_samples();
    if (options.truncation < 0 || options.truncation > n / 4)
        throw std::invalid_argument("sideband cutoff must lie in [0, n_samples/4]");

    const Propagation prop = propagate_period(drive, grid, options.stepper, options.substeps);
    const Monodromy mono = diagonalize(drive, prop.monodromy, options);

    std::vector<cd> twiddle(n);
    for (int j = 0; j < n; ++j) twiddle[j] = std::polar(1.0, -two_pi * j / n);

    FloquetSolution sol{drive, grid, {}, options.truncation, 0.0};
    for (int b = 0; b < 2; ++b) {
        FloquetMode& mode = sol.modes[b];
        mode.quasienergy = mono.mu[b];
        mode.samples.resize(n);
        for (int k = 0; k < n; ++k)
            mode.samples[k] = std::polar(1.0, mode.quasienergy * grid.time(k)) *
                              (prop.samples[k] * mono.vectors[b]);
    }

    int m = options.truncation;
    while (true) {
        double discarded = 0.0;
        for (auto& mode : sol.modes) {
            mode.fourier = sidebands(mode.samples, m, twiddle);
            discarded = std::max(discarded, std::max(0.0, 1.0 - retained_weight(mode.fourier)));
        }
        sol.truncation = m;
        sol.discarded_weight = discarded;
        if (discarded < options.discarded_tolerance || m >= n / 4) break;
        m = std::min(std::max(2 * m, m + 1), n / 4);
    }
    return sol;
}

std::array<double, 2> quasienergies(const DriveParams& drive, const TimeGrid& grid,
                                    const FloquetOptions& options) {
    const Mat2 u = integrate(drive, grid, options.stepper, options.substeps,
                             [](int, const Mat2&) {});
    return diagonalize(drive, u, options).mu;
}

double DressedStates::cos_half() const { return std::sqrt(std::max(0.0, 0.5 * (1.0 + cos_theta))); }

double DressedStates::sin_half() const { return std::sqrt(std::max(0.0, 0.5 * (1.0 - cos_theta))); }

Vec2 DressedStates::plus_state() const { return Vec2(cos_half(), sin_half()); }

Vec2 DressedStates::minus_state() const { return Vec2(-sin_half(), cos_half()); }

DressedStates dressed_states(const DriveParams& drive) {
    const double gen = drive.generalized_rabi();
    if (!(gen > 0.0))
        throw std::invalid_argument(
            "dressed states: mixing angle undefined for zero generalized Rabi frequency");
    DressedStates s;
    s.omega_gen = gen;
    s.cos_theta = -drive.detuning() / gen;
    s.sin_theta = drive.rabi() / gen;
    s.theta_m = std::atan2(s.sin_theta, s.cos_theta);
    s.mu_plus = 0.5 * (drive.omega() + gen);
    s.mu_minus = 0.5 * (drive.omega() - gen);
    return s;
}

} // namespace fdd::floquet

// dipole.cpp — Floquet dipole-dipole Hamiltonian and dissipator ingredients

#include "fdd/dipole.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "fdd/errors.hpp"

namespace fdd::dipole {

namespace {

int slot(Branch a, Branch b) { return 2 * static_cast<int>(a) + static_cast<int>(b); }

constexpr std::array<Branch, 2> branches{Branch::plus, Branch::minus};

// Single-atom operator |a><b| in the {|+>, |->} basis.
Matrix ket_bra(int a, int b) {
    Matrix m = Matrix::Zero(2, 2);
    m(a, b) = 1.0;
    return m;
}

Matrix projector4(int i) {
    Matrix m = Matrix::Zero(4, 4);
    m(i, i) = 1.0;
    return m;
}

double relative_change(double a_old, double a_new, double scale) {
    return scale > 0.0 ? std::abs(a_new - a_old) / scale : 0.0;
}

template <typename Compute, typename Change>
auto converge(const floquet::FloquetSolution& sol, const ConvergenceOptions& options,
              Compute&& compute, Change&& change) {
    const int limit = sol.grid.n_samples() / 4;
    int m = options.start >= 0 ? options.start : sol.truncation;
    m = std::min(m, limit);
    auto current = compute(matrix_elements(sol, m));
    while (m + 2 <= limit) {
        auto next = compute(matrix_elements(sol, m + 2));
        if (change(current, next) < options.relative_tolerance) return current;
        current = std::move(next);
        m += 2;
    }
    throw TruncationError("sideband sums did not converge up to cutoff M = " +
                          std::to_string(limit) + " (n_samples/4)");
}

} // namespace

MatrixElementTable::MatrixElementTable(int truncation, std::array<std::vector<cd>, 4> entries)
    : truncation_(truncation), entries_(std::move(entries)) {
    for (const auto& e : entries_)
        if (static_cast<int>(e.size()) != 2 * truncation + 1)
            throw std::invalid_argument("matrix element table: inconsistent sideband count");
}

cd MatrixElementTable::entry(Branch a, Branch b, int m) const {
    if (std::abs(m) > truncation_) return 0.0;
    return entries_[slot(a, b)][m + truncation_];
}

double MatrixElementTable::sum_rule(Branch b) const {
    double total = 0.0;
    for (Branch a : branches)
        for (int m = -truncation_; m <= truncation_; ++m) total += weight(a, b, m);
    return total;
}

MatrixElementTable matrix_elements(const floquet::FloquetSolution& sol, int truncation) {
    const int n = sol.grid.n_samples();
    if (truncation < 0 || truncation >= n / 2)
        throw std::invalid_argument("sideband cutoff " + std::to_string(truncation) +
                                    " reaches the grid Nyquist index " + std::to_string(n / 2));

    std::vector<cd> twiddle(n);
    for (int j = 0; j < n; ++j) twiddle[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / n);

    std::array<std::vector<cd>, 4> entries;
    for (Branch a : branches) {
        for (Branch b : branches) {
            const auto& pa = sol.mode(a).samples;
            const auto& pb = sol.mode(b).samples;
            std::vector<cd> f(n);
            for (int k = 0; k < n; ++k)
                f[k] = std::conj(pa[k](0)) * pb[k](1) + std::conj(pa[k](1)) * pb[k](0);
            auto& out = entries[slot(a, b)];
            out.assign(2 * truncation + 1, 0.0);
            for (int m = -truncation; m <= truncation; ++m) {
                const int stride = ((m % n) + n) % n;
                cd acc = 0.0;
                int idx = 0;
                for (int k = 0; k < n; ++k) {
                    acc += f[k] * twiddle[idx];
                    idx += stride;
                    if (idx >= n) idx -= n;
                }
                out[m + truncation] = acc / static_cast<double>(n);
            }
        }
    }
    return MatrixElementTable(truncation, std::move(entries));
}

CouplingCoefficients coupling_coefficients(const MatrixElementTable& table,
                                           const floquet::FloquetSolution& sol,
                                           const bath::AtomGeometry& geometry) {
    const double omega = sol.drive.omega();
    const double split = sol.mu_plus() - sol.mu_minus();
    CouplingCoefficients c;
    c.truncation = table.truncation();
    for (int m = -table.truncation(); m <= table.truncation(); ++m) {
        CouplingTerm term{m, 0.0, 0.0};
        const double w_pp = table.weight(Branch::plus, Branch::plus, m);
        const double w_pm = table.weight(Branch::minus, Branch::plus, m);
        if (w_pp != 0.0) term.pp = w_pp * bath::omega_dd(m * omega, geometry);
        if (w_pm != 0.0) term.pm = w_pm * bath::omega_dd(split + m * omega, geometry);
        c.c_pp += term.pp;
        c.c_pm += term.pm;
        c.breakdown.push_back(term);
    }
    return c;
}

CouplingCoefficients converged_coupling_coefficients(const floquet::FloquetSolution& sol,
                                                     const bath::AtomGeometry& geometry,
                                                     const ConvergenceOptions& options) {
    return converge(
        sol, options,
        [&](const MatrixElementTable& t) { return coupling_coefficients(t, sol, geometry); },
        [](const CouplingCoefficients& a, const CouplingCoefficients& b) {
            const double scale = std::max(std::abs(b.c_pp), std::abs(b.c_pm));
            return std::max(relative_change(a.c_pp, b.c_pp, scale),
                            relative_change(a.c_pm, b.c_pm, scale));
        });
}

Matrix build_hdp2(double c_pp, double c_pm) {
    Matrix h = Matrix::Zero(4, 4);
    h(0, 0) = c_pp;
    h(1, 1) = -c_pp;
    h(2, 2) = -c_pp;
    h(3, 3) = c_pp;
    h(1, 2) = c_pm;
    h(2, 1) = c_pm;
    return h;
}

ChannelSet build_channels(const MatrixElementTable& table, const floquet::FloquetSolution& sol,
                          const bath::AtomGeometry& geometry, const bath::BathParams& bath) {
    using bath::Coupling;
    const double omega = sol.drive.omega();
    const double split = sol.mu_plus() - sol.mu_minus();
    std::array<double, 6> rate{};
    auto gamma = [&](double nu, double sign) {
        return bath::gamma_thermal(nu, geometry, bath, Coupling::self) +
               sign * bath::gamma_thermal(nu, geometry, bath, Coupling::cross);
    };
    for (int m = -table.truncation(); m <= table.truncation(); ++m) {
        const double w_pp = table.weight(Branch::plus, Branch::plus, m);
        const double w_mp = table.weight(Branch::minus, Branch::plus, m);
        const double w_pm = table.weight(Branch::plus, Branch::minus, m);
        const double nu_0 = m * omega;
        const double nu_down = m * omega + split;
        const double nu_up = m * omega - split;
        if (w_pp != 0.0) {
            rate[0] += w_pp * gamma(nu_0, 1.0);
            rate[1] += w_pp * gamma(nu_0, -1.0);
        }
        if (w_mp != 0.0) {
            rate[2] += w_mp * gamma(nu_down, 1.0);
            rate[3] += w_mp * gamma(nu_down, -1.0);
        }
        if (w_pm != 0.0) {
            rate[4] += w_pm * gamma(nu_up, 1.0);
            rate[5] += w_pm * gamma(nu_up, -1.0);
        }
    }

    const Matrix id = Matrix::Identity(2, 2);
    const Matrix lower = ket_bra(1, 0); // |-><+|
    const Matrix raise = ket_bra(0, 1); // |+><-|
    const double r2 = std::sqrt(2.0);

    ChannelSet set;
    set.truncation = table.truncation();
    set.channels[0] = {rate[0], r2 * (projector4(0) - projector4(3)), "L1"};
    set.channels[1] = {rate[1], r2 * (projector4(1) - projector4(2)), "L2"};
    // Collective ladder operators carry 1/sqrt(2) so that the rates above reproduce
    // the Gamma-matrix double sum, as the sqrt(2) on L1 and L2 does for the dephasing pair.
    set.channels[2] = {rate[2], (linalg::kron(lower, id) + linalg::kron(id, lower)) / r2, "L3"};
    set.channels[3] = {rate[3], (linalg::kron(lower, id) - linalg::kron(id, lower)) / r2, "L4"};
    set.channels[4] = {rate[4], (linalg::kron(raise, id) + linalg::kron(id, raise)) / r2, "L5"};
    set.channels[5] = {rate[5], (linalg::kron(raise, id) - linalg::kron(id, raise)) / r2, "L6"};
    return set;
}

ChannelSet converged_channels(const floquet::FloquetSolution& sol,
                              const bath::AtomGeometry& geometry, const bath::BathParams& bath,
                              const ConvergenceOptions& options) {
    return converge(
        sol, options,
        [&](const MatrixElementTable& t) { return build_channels(t, sol, geometry, bath); },
        [](const ChannelSet& a, const ChannelSet& b) {
            double scale = 0.0;
            for (const auto& ch : b.channels) scale = std::max(scale, std::abs(ch.rate));
            double worst = 0.0;
            for (int k = 0; k < 6; ++k)
                worst = std::max(worst, relative_change(a.channels[k].rate, b.channels[k].rate, scale));
            return worst;
        });
}

lindblad::LindbladModel fme_model(const floquet::FloquetSolution& sol,
                                  const bath::AtomGeometry& geometry,
                                  const bath::BathParams& bath,
                                  const ConvergenceOptions& options) {
    const auto coeffs = converged_coupling_coefficients(sol, geometry, options);
    const auto channels = converged_channels(sol, geometry, bath, options);
    return lindblad::LindbladModel(build_hdp2(coeffs), channels.as_vector());
}

double product_quasienergy(const std::vector<AtomFloquetData>& atoms, int state) {
    const int n = static_cast<int>(atoms.size());
    double mu = 0.0;
    for (int i = 0; i < n; ++i) {
        const bool minus = (state >> (n - 1 - i)) & 1;
        mu += minus ? atoms[i].mu_minus : atoms[i].mu_plus;
    }
    return mu;
}

std::vector<double> quasienergy_differences(const std::vector<AtomFloquetData>& atoms,
                                            double omega) {
    const int dim = 1 << atoms.size();
    std::vector<double> diffs;
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            diffs.push_back(product_quasienergy(atoms, b) - product_quasienergy(atoms, a));
    std::sort(diffs.begin(), diffs.end());
    const double tol = quasienergy_match_tolerance * omega;
    std::vector<double> out;
    for (double d : diffs)
        if (out.empty() || d - out.back() > tol) out.push_back(d);
    return out;
}

std::vector<Matrix> build_D_operators(const std::vector<AtomFloquetData>& atoms, int m,
                                      double delta_mu, double omega) {
    const int n = static_cast<int>(atoms.size());
    if (n < 1) throw std::invalid_argument("need at least one atom");
    if (n > max_atoms)
        throw SizeError("at most " + std::to_string(max_atoms) + " atoms supported, got " +
                        std::to_string(n));
    const int dim = 1 << n;
    const double tol = quasienergy_match_tolerance * omega;

    std::vector<double> mu(dim);
    for (int s = 0; s < dim; ++s) mu[s] = product_quasienergy(atoms, s);

    std::vector<Matrix> ops(n, Matrix::Zero(dim, dim));
    for (int alpha = 0; alpha < dim; ++alpha) {
        for (int beta = 0; beta < dim; ++beta) {
            if (std::abs(mu[beta] - mu[alpha] - delta_mu) > tol) continue;
            const int differ = alpha ^ beta;
            for (int i = 0; i < n; ++i) {
                const int bit = 1 << (n - 1 - i);
                if ((differ & ~bit) != 0) continue; // other atoms must coincide
                const Branch a = (alpha & bit) ? Branch::minus : Branch::plus;
                const Branch b = (beta & bit) ? Branch::minus : Branch::plus;
                ops[i](alpha, beta) = atoms[i].table.entry(a, b, m);
            }
        }
    }
    return ops;
}

std::vector<Channel> diagonalize_dissipator(const Matrix& gamma, const std::vector<Matrix>& d_ops) {
    if (gamma.rows() != gamma.cols() || gamma.rows() != static_cast<Eigen::Index>(d_ops.size()))
        throw std::invalid_argument("rate matrix and operator list dimensions disagree");
    const double scale = linalg::max_abs(gamma);
    if (linalg::max_abs(gamma - gamma.adjoint()) > 1e-12 * std::max(scale, 1e-300))
        throw std::invalid_argument("rate matrix is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Matrix> eig(linalg::hermitian_part(gamma));
    std::vector<Channel> out;
    for (Eigen::Index k = 0; k < gamma.rows(); ++k) {
        double lambda = eig.eigenvalues()(k);
        if (lambda < -1e-10 * scale)
            throw NonCpError("rate matrix has negative eigenvalue " + std::to_string(lambda));
        lambda = std::max(lambda, 0.0);
        Matrix op = Matrix::Zero(d_ops.front().rows(), d_ops.front().cols());
        for (Eigen::Index i = 0; i < gamma.rows(); ++i) op += eig.eigenvectors()(i, k) * d_ops[i];
        out.push_back({lambda, std::move(op), "k" + std::to_string(k)});
    }
    return out;
}

std::vector<Channel> generic_channels(const AtomFloquetData& atom, double omega,
                                      const bath::AtomGeometry& geometry,
                                      const bath::BathParams& bath) {
    using bath::Coupling;
    const std::vector<AtomFloquetData> atoms{atom, atom};
    const auto diffs = quasienergy_differences(atoms, omega);
    const int cutoff = atom.table.truncation();
    std::vector<Channel> out;
    for (int m = -cutoff; m <= cutoff; ++m) {
        for (double dmu : diffs) {
            auto ops = build_D_operators(atoms, m, dmu, omega);
            if (linalg::max_abs(ops[0]) == 0.0 && linalg::max_abs(ops[1]) == 0.0) continue;
            const double nu = m * omega + dmu;
            const double g11 = bath::gamma_thermal(nu, geometry, bath, Coupling::self);
            const double g12 = bath::gamma_thermal(nu, geometry, bath, Coupling::cross);
            Matrix gamma(2, 2);
            gamma << g11, g12, g12, g11;
            for (auto& ch : diagonalize_dissipator(gamma, ops))
                if (ch.rate > 0.0) out.push_back(std::move(ch));
        }
    }
    return out;
}

} // namespace fdd::dipole

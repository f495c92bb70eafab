// test_lindblad.cpp — Liouvillian, integrators, steady states and the OBE reference

#include <doctest.h>

#include <cmath>
#include <random>

#include "fdd/constants.hpp"
#include "fdd/dipole.hpp"
#include "fdd/errors.hpp"
#include "fdd/lindblad.hpp"
#include "support.hpp"

using namespace fdd;
using namespace fdd::lindblad;
using fdd::test::max_diff;
using fdd::test::rel_err;

namespace {

const bath::AtomGeometry unit_geometry{0.8 * constants::speed_of_light, 1.5e-11, 1.1};

Matrix random_matrix(std::mt19937& rng, int dim) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = cd(n(rng), n(rng));
    return m;
}

LindbladModel random_model(std::mt19937& rng, int dim, int channels) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<Channel> ch;
    for (int k = 0; k < channels; ++k) ch.push_back({u(rng), random_matrix(rng, dim) / std::sqrt(dim), "r"});
    return {linalg::hermitian_part(random_matrix(rng, dim)), ch};
}

LindbladModel amplitude_damping(double gamma) {
    return {Matrix::Zero(2, 2), {{gamma, linalg::sigma_minus(), "decay"}}};
}

LindbladModel fme_pair(double rabi, double delta) {
    const auto d = floquet::DriveParams::from_detuning(1.0, rabi, delta);
    return dipole::fme_model(floquet::floquet_solve(d, floquet::TimeGrid::for_drive(d, 512)), unit_geometry,
                             bath::BathParams{0.0});
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> t(n);
    for (int k = 0; k < n; ++k) t[k] = lo + (hi - lo) * k / (n - 1);
    return t;
}

} // namespace

TEST_CASE("model and density matrix validation") {
    Matrix h = Matrix::Zero(2, 2);
    h(0, 1) = 1.0;
    CHECK_THROWS_AS(LindbladModel(h, {}), std::invalid_argument);
    CHECK_THROWS_AS(LindbladModel(Matrix::Zero(2, 2), {{-1.0, linalg::sigma_minus(), "x"}}), std::invalid_argument);
    CHECK_THROWS_AS(LindbladModel(Matrix::Zero(2, 2), {{1.0, Matrix::Identity(3, 3), "x"}}), std::invalid_argument);
    const LindbladModel clamped(Matrix::Zero(2, 2),
                                {{1.0, linalg::sigma_minus(), "a"}, {-1e-15, linalg::sigma_plus(), "b"}});
    CHECK(clamped.channels()[1].rate == 0.0);

    CHECK_THROWS_AS(DensityMatrix(2.0 * Matrix::Identity(2, 2)), std::invalid_argument);
    CHECK_THROWS_AS(DensityMatrix{h}, std::invalid_argument);
    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
    CHECK(DensityMatrix::basis_state(4, 2).population(2) == 1.0);
}

TEST_CASE("Liouvillian preserves trace and has a Lindblad spectrum") {
    std::mt19937 rng(1);
    for (int k = 0; k < 5; ++k) {
        const auto model = random_model(rng, 4, 3);
        const Matrix l = build_liouvillian(model);
        const Vector id = linalg::vec(Matrix::Identity(4, 4));
        CHECK((l.adjoint() * id).cwiseAbs().maxCoeff() <= 1e-12 * l.cwiseAbs().maxCoeff());
        Eigen::ComplexEigenSolver<Matrix> es(l);
        double top = -1e300, closest = 1e300;
        for (const auto& ev : es.eigenvalues()) {
            top = std::max(top, ev.real());
            closest = std::min(closest, std::abs(ev));
        }
        CHECK(top <= 1e-10);
        CHECK(closest <= 1e-10);
    }
}

TEST_CASE("amplitude damping decays exponentially in both integrators") {
    const double gamma = 0.7;
    const auto model = amplitude_damping(gamma);
    const auto rho0 = DensityMatrix::basis_state(2, 0);
    const auto times = linspace(0.0, 5.0, 11);
    const auto rk = evolve(model, rho0, times);
    const auto ex = evolve_exact(model, rho0, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(std::abs(rk[k].population(0) - std::exp(-gamma * times[k])) <= 1e-8);
        CHECK(std::abs(ex[k].population(0) - std::exp(-gamma * times[k])) <= 1e-12);
    }
}

TEST_CASE("unitary precession keeps the purity") {
    const LindbladModel model(0.5 * 1.3 * Matrix(linalg::sigma_z()), {});
    Vector psi(2);
    psi << 1.0, 1.0;
    psi /= std::sqrt(2.0);
    const auto states = evolve(model, DensityMatrix::pure(psi), linspace(0.0, 20.0, 41));
    for (const auto& r : states) CHECK(std::abs(r.purity() - 1.0) <= 1e-10);
    CHECK(std::abs(states.back().matrix()(0, 1) - 0.5 * std::exp(cd(0.0, -1.3 * 20.0))) < 1e-8);
}

TEST_CASE("step integrator agrees with the superoperator exponential on random models") {
    std::mt19937 rng(2);
    for (int k = 0; k < 3; ++k) {
        const auto model = random_model(rng, 4, 2);
        const Matrix psi = random_matrix(rng, 4);
        const Matrix rho = psi * psi.adjoint();
        const DensityMatrix rho0(rho / rho.trace().real());
        const auto times = linspace(0.0, 3.0, 7);
        const auto rk = evolve(model, rho0, times);
        const auto ex = evolve_exact(model, rho0, times);
        for (std::size_t s = 0; s < times.size(); ++s) {
            CHECK(max_diff(rk[s].matrix(), ex[s].matrix()) <= 1e-8);
            const Matrix direct = linalg::unvec(superoperator_exponential(build_liouvillian(model), times[s]) *
                                                    linalg::vec(rho0.matrix()),
                                                4);
            CHECK(max_diff(ex[s].matrix(), direct) <= 1e-12);
        }
    }
}

TEST_CASE("two-atom FME trajectory: invariants and exponential oracle") {
    const auto model = fme_pair(0.2, 0.05);
    double gamma = 0.0;
    for (const auto& ch : model.channels()) gamma = std::max(gamma, ch.rate);
    const auto times = linspace(0.0, 10.0 / gamma, 21);
    const auto rho0 = DensityMatrix::basis_state(4, 1);
    EvolveOptions opt;
    opt.step_fraction = 1.0 / 200.0;
    const auto rk = evolve(model, rho0, times, opt);
    const auto ex = evolve_exact(model, rho0, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(std::abs(rk[k].trace() - 1.0) <= 1e-9);
        CHECK(rk[k].min_eigenvalue() >= -1e-9);
        CHECK(rk[k].purity() <= 1.0 + 1e-10);
        CHECK(max_diff(rk[k].matrix(), rk[k].matrix().adjoint()) == 0.0);
    }
    CHECK(max_diff(rk.back().matrix(), ex.back().matrix()) <= 1e-7);
}

TEST_CASE("exchange symmetry is preserved by FME and OBE dynamics") {
    const Matrix swap = linalg::swap_operator();
    Vector psi = Vector::Zero(4);
    psi(1) = psi(2) = 1.0 / std::sqrt(2.0);
    const auto rho0 = DensityMatrix::pure(psi);

    const auto fme = fme_pair(0.2, 0.05);
    for (const auto& r : evolve(fme, rho0, linspace(0.0, 3000.0, 7)))
        CHECK(max_diff(r.matrix() * swap, swap * r.matrix()) <= 1e-8);

    const auto d = floquet::DriveParams::from_detuning(1.0, 0.01, 0.002);
    const auto obe = obe_reference(d, unit_geometry, bath::BathParams{0.0}, 2);
    for (const auto& r : evolve(obe, rho0, linspace(0.0, 3000.0, 7)))
        CHECK(max_diff(r.matrix() * swap, swap * r.matrix()) <= 1e-8);
}

TEST_CASE("steady states: decay, driven Bloch atom, undriven pair") {
    const auto ground = steady_state(amplitude_damping(0.3));
    CHECK(std::abs(ground.population(1) - 1.0) <= 1e-12);

    // Bloch equations for (u, v, w) with H = rabi sx / 2 and decay gamma, solved directly.
    const double rabi = 0.05, gamma = bath::gamma_single(1.0, unit_geometry);
    const auto d = floquet::DriveParams::from_detuning(1.0, rabi, 0.0);
    const auto rho = steady_state(obe_reference(d, unit_geometry, bath::BathParams{0.0}, 1));
    Eigen::Matrix3d a;
    a << -gamma / 2, 0, 0, 0, -gamma / 2, -rabi, 0, rabi, -gamma;
    const Eigen::Vector3d b(0, 0, gamma);
    const Eigen::Vector3d uvw = a.colPivHouseholderQr().solve(b);
    const double ree = 0.5 * (1.0 + uvw(2));
    CHECK(rel_err(rho.population(0), ree) < 1e-8);
    CHECK(rel_err(ree, (rabi * rabi / 4) / (rabi * rabi / 2 + gamma * gamma / 4)) < 1e-12);

    // delta > 0: |+> = |g>, so |gg> is |++>.
    const auto pair = steady_state(fme_pair(0.0, 0.3));
    CHECK(std::abs(pair.population(0) - 1.0) <= 1e-10);

    CHECK_THROWS_AS(steady_state(LindbladModel(Matrix::Zero(2, 2), {})), MultiplicityError);
    try {
        steady_state(LindbladModel(Matrix::Zero(2, 2), {}));
    } catch (const MultiplicityError& e) {
        CHECK(e.dimension() == 4);
    }
}

TEST_CASE("OBE reference: Dicke decay, excitation conservation, size limit") {
    const auto d = floquet::DriveParams::from_detuning(1.0, 0.0, 0.0);
    const bath::BathParams vac{0.0};
    const auto model = obe_reference(d, unit_geometry, vac, 2);
    const double g11 = bath::gamma_single(1.0, unit_geometry), g12 = bath::gamma_pair(1.0, unit_geometry);
    for (double sign : {1.0, -1.0}) {
        Vector psi = Vector::Zero(4);
        psi(1) = 1.0 / std::sqrt(2.0);
        psi(2) = sign / std::sqrt(2.0);
        const double t = 0.3 / g11;
        const auto out = evolve_exact(model, DensityMatrix::pure(psi), {0.0, t});
        const double kept = std::real(psi.dot(out[1].matrix() * psi));
        CHECK(rel_err(kept, std::exp(-(g11 + sign * g12) * t)) < 1e-10);
    }
    const Matrix n_exc = linalg::embed(Matrix(linalg::sigma_z()), 0, 2) + linalg::embed(Matrix(linalg::sigma_z()), 1, 2);
    CHECK(max_diff(model.hamiltonian() * n_exc, n_exc * model.hamiltonian()) <= 1e-20);
    CHECK(model.hamiltonian().cwiseAbs().maxCoeff() == doctest::Approx(std::abs(bath::omega_dd(1.0, unit_geometry))));
    CHECK_THROWS_AS(obe_reference(d, unit_geometry, vac, 3), std::invalid_argument);
}

TEST_CASE("coarse-grained coefficients") {
    const auto half = coarse_grained_coefficients(constants::pi / 2, 2.0);
    CHECK(half.c_pp == doctest::Approx(1.0));
    CHECK(half.c_pm == doctest::Approx(1.0));
    const auto zero = coarse_grained_coefficients(0.0, 2.0);
    CHECK(zero.c_pp == 0.0);
    CHECK(zero.c_pm == 2.0);
    for (int k = 0; k <= 100; ++k) {
        const auto c = coarse_grained_coefficients(constants::pi * k / 100.0, 3.7);
        CHECK(std::abs(c.c_pp + c.c_pm - 3.7) <= 4e-16 * 3.7);
    }
    CHECK_THROWS_AS(coarse_grained_coefficients(-0.1, 1.0), std::invalid_argument);
}

TEST_CASE("FME vs OBE comparison on the Rydberg parameters") {
    const auto d = floquet::DriveParams::from_detuning(1e10, 1e8, 0.0);
    const bath::AtomGeometry g{40e-6, 1000.0 * constants::ea0, constants::pi / 2};
    const bath::BathParams vac{0.0};
    const double horizon = 2.0 * constants::pi / bath::omega_dd(1e10, g);
    const auto report = fme_vs_obe_compare(d, g, vac, horizon);
    CHECK(report.max_deviation <= 0.05);
    CHECK(report.within_target);
    CHECK(report.window == doctest::Approx(10.0 / 1e8));
    CHECK(population_deviation(report.fme, report.window, report.fme, report.window) == 0.0);

    CHECK_THROWS_AS(fme_vs_obe_compare(floquet::DriveParams::from_detuning(1e10, 0.0, 0.0), g, vac, horizon),
                    HierarchyError);
}

TEST_CASE("step-size guard") {
    EvolveOptions opt;
    opt.max_steps = 10;
    CHECK_THROWS_AS(evolve(amplitude_damping(1.0), DensityMatrix::basis_state(2, 0), {0.0, 100.0}, opt),
                    StepSizeError);
}

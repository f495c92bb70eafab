// test_floquet.cpp — Propagation, quasienergies, modes and dressed states

#include <doctest.h>

#include <cmath>
#include <complex>

#include "fdd/constants.hpp"
#include "fdd/errors.hpp"
#include "fdd/floquet.hpp"
#include "support.hpp"

using namespace fdd;
using namespace fdd::floquet;
using fdd::test::zone_distance;

namespace {

double unitarity_defect(const Mat2& u) { return (u.adjoint() * u - Mat2::Identity()).cwiseAbs().maxCoeff(); }

// RWA reference, folded.
double rwa_mu_plus(const DriveParams& d) { return fold_to_zone(0.5 * (d.omega() + d.generalized_rabi()), d.omega()); }

} // namespace

TEST_CASE("fold_to_zone maps into the half-open zone") {
    CHECK(fold_to_zone(0.75, 1.0) == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(fold_to_zone(0.0, 1.0) == 0.0);
    CHECK(fold_to_zone(0.55, 1.0) == doctest::Approx(-0.45).epsilon(1e-14));
    CHECK(fold_to_zone(0.5, 1.0) == 0.5);
    CHECK(fold_to_zone(-0.5, 1.0) == 0.5);
    CHECK_THROWS_AS(fold_to_zone(std::nan(""), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(fold_to_zone(std::numeric_limits<double>::infinity(), 1.0), std::invalid_argument);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-50.0, 50.0), w(0.1, 10.0);
    for (int k = 0; k < 1000; ++k) {
        const double omega = w(rng), mu = u(rng);
        const double f = fold_to_zone(mu, omega);
        CHECK(f > -0.5 * omega);
        CHECK(f <= 0.5 * omega);
        CHECK(zone_distance(f, mu, omega) < 1e-12 * std::max(1.0, std::abs(mu)));
    }
}

TEST_CASE("DriveParams validates and derives the detuning") {
    const auto d = DriveParams::from_transition(2.0, 0.1, 1.7);
    CHECK(d.detuning() == d.omega() - d.omega_eg());
    const auto e = DriveParams::from_detuning(2.0, 0.1, 0.3);
    CHECK(e.omega_eg() == doctest::Approx(1.7));
    CHECK(e.detuning() == e.omega() - e.omega_eg());
    CHECK(d.generalized_rabi() == doctest::Approx(std::hypot(0.3, 0.1)));
    CHECK_THROWS_AS(DriveParams::from_transition(0.0, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(DriveParams::from_transition(1.0, -0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(DriveParams::from_transition(1.0, 0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(DriveParams::from_detuning(1.0, 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("TimeGrid requires a power of two of at least 64") {
    CHECK_NOTHROW(TimeGrid(64, 1.0));
    CHECK_THROWS_AS(TimeGrid(32, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(100, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(128, 0.0), std::invalid_argument);
    const TimeGrid g(128, 2.0);
    CHECK(g.time(5) == doctest::Approx(5.0 * 2.0 / 128.0));
}

TEST_CASE("undriven propagator is diagonal with the bare phases") {
    const auto d = DriveParams::from_transition(1.0, 0.0, 0.3);
    const TimeGrid grid(256, d.period());
    const auto prop = propagate_period(d, grid);
    for (int k = 0; k < grid.n_samples(); k += 17) {
        const double t = grid.time(k);
        Mat2 ref = Mat2::Zero();
        ref(0, 0) = std::exp(cd(0.0, -0.15 * t));
        ref(1, 1) = std::exp(cd(0.0, 0.15 * t));
        CHECK((prop.samples[k] - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK((prop.samples[0] - Mat2::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("propagators are unitary for random drives") {
    test::DriveSampler sampler(3, 0.0, 1.5);
    for (int k = 0; k < 20; ++k) {
        const auto d = sampler.next();
        for (auto stepper : {Stepper::midpoint, Stepper::magnus4}) {
            const auto prop = propagate_period(d, TimeGrid::for_drive(d, 256), stepper);
            double worst = unitarity_defect(prop.monodromy);
            for (const auto& u : prop.samples) worst = std::max(worst, unitarity_defect(u));
            CHECK(worst <= 1e-12);
        }
    }
}

TEST_CASE("monodromy eigenphases agree with an 8x finer integration") {
    const auto d = DriveParams::from_detuning(1.0, 0.01, 0.0);
    const auto coarse = quasienergies(d, TimeGrid::for_drive(d, 1024));
    const auto fine = quasienergies(d, TimeGrid::for_drive(d, 8192));
    for (int b = 0; b < 2; ++b) CHECK(zone_distance(coarse[b], fine[b], 1.0) * d.period() < 1e-10 * d.period());
}

TEST_CASE("midpoint stepper converges at second order, Magnus at fourth") {
    const auto d = DriveParams::from_detuning(1.0, 0.4, 0.1);
    const double ref = quasienergies(d, TimeGrid::for_drive(d, 16384))[0];
    auto err = [&](Stepper s, int n) {
        FloquetOptions o;
        o.stepper = s;
        return zone_distance(quasienergies(d, TimeGrid::for_drive(d, n), o)[0], ref, 1.0);
    };
    const double mid_ratio = err(Stepper::midpoint, 64) / err(Stepper::midpoint, 128);
    const double cf4_ratio = err(Stepper::magnus4, 64) / err(Stepper::magnus4, 128);
    CHECK(mid_ratio == doctest::Approx(4.0).epsilon(0.1));
    CHECK(cf4_ratio == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("undriven atom: quasienergies, constant modes, single sideband") {
    const auto d = DriveParams::from_transition(1.0, 0.0, 0.3);
    const auto sol = floquet_solve(d, TimeGrid::for_drive(d, 256));
    const double a = std::min(sol.mu_plus(), sol.mu_minus());
    const double b = std::max(sol.mu_plus(), sol.mu_minus());
    CHECK(a == doctest::Approx(-0.15).epsilon(1e-12));
    CHECK(b == doctest::Approx(0.15).epsilon(1e-12));
    // delta > 0: the "+" dressed state is |g>.
    CHECK(std::norm(sol.mode(Branch::plus).samples[0](1)) == doctest::Approx(1.0));
    for (const auto& mode : sol.modes) {
        for (const auto& phi : mode.samples) CHECK((phi - mode.samples[0]).norm() < 1e-12);
        const int m = sol.truncation;
        CHECK(mode.sideband(0, m).squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
        for (int n = -m; n <= m; ++n)
            if (n != 0) CHECK(mode.sideband(n, m).squaredNorm() < 1e-24);
    }
}

TEST_CASE("resonant weak drive splits the quasienergies by the Rabi frequency") {
    const auto d = DriveParams::from_detuning(1.0, 0.01, 0.0);
    const auto sol = floquet_solve(d, TimeGrid::for_drive(d, 1024));
    const double split = std::abs(std::remainder(sol.mu_plus() - sol.mu_minus(), 1.0));
    CHECK(std::abs(split - 0.01) <= 1e-4);
    CHECK(2.0 * std::abs(sol.mu_plus()) < 1.0);
}

TEST_CASE("modes are orthonormal at every sample and satisfy Parseval") {
    test::DriveSampler sampler(5);
    for (int k = 0; k < 15; ++k) {
        const auto d = sampler.next();
        const auto sol = floquet_solve(d, TimeGrid::for_drive(d, 512));
        const auto& p = sol.mode(Branch::plus).samples;
        const auto& q = sol.mode(Branch::minus).samples;
        double worst = 0.0;
        for (std::size_t s = 0; s < p.size(); ++s) {
            worst = std::max(worst, std::abs(p[s].squaredNorm() - 1.0));
            worst = std::max(worst, std::abs(q[s].squaredNorm() - 1.0));
            worst = std::max(worst, std::abs(p[s].dot(q[s])));
        }
        CHECK(worst <= 1e-10);
        for (const auto& mode : sol.modes) {
            double total = 0.0;
            for (const auto& f : mode.fourier) total += f.squaredNorm();
            CHECK(total + sol.discarded_weight >= 1.0 - 1e-10);
            CHECK(std::abs(total - 1.0) <= 1e-10);
        }
        CHECK(2.0 * std::abs(sol.mu_plus()) < 1.0);
        CHECK(2.0 * std::abs(sol.mu_minus()) <= 1.0);
    }
}

TEST_CASE("Fourier amplitudes reconstruct the mode samples") {
    const auto d = DriveParams::from_detuning(1.0, 0.3, -0.2);
    const auto sol = floquet_solve(d, TimeGrid::for_drive(d, 512));
    const auto& mode = sol.mode(Branch::plus);
    const int m = sol.truncation;
    for (int k = 0; k < 512; k += 31) {
        const double t = sol.grid.time(k);
        Vec2 sum = Vec2::Zero();
        for (int n = -m; n <= m; ++n) sum += mode.sideband(n, m) * std::exp(cd(0.0, n * d.omega() * t));
        CHECK((sum - mode.samples[k]).norm() < 1e-10);
    }
}

TEST_CASE("degenerate monodromy is reported") {
    // omega_eg = omega without drive gives U(T) = -1.
    const auto d = DriveParams::from_transition(1.0, 0.0, 1.0);
    CHECK_THROWS_AS(floquet_solve(d, TimeGrid::for_drive(d, 256)), DegeneracyError);
    CHECK_THROWS_AS(quasienergies(d, TimeGrid::for_drive(d, 256)), DegeneracyError);
}

TEST_CASE("grid doubling changes quasienergies by less than 1e-9 omega") {
    for (double rabi : {0.01, 0.1, 0.25, 0.5}) {
        for (double delta : {-0.3, 0.0, 0.2}) {
            const auto d = DriveParams::from_detuning(1.0, rabi, delta);
            const auto a = quasienergies(d, TimeGrid::for_drive(d, 1024));
            const auto b = quasienergies(d, TimeGrid::for_drive(d, 2048));
            CHECK(zone_distance(a[0], b[0], 1.0) < 1e-9);
            CHECK(zone_distance(a[1], b[1], 1.0) < 1e-9);
        }
    }
}

TEST_CASE("weak drives match the folded RWA quasienergies") {
    for (double rabi : {0.002, 0.01, 0.02}) {
        for (double delta : {-0.02, -0.01, 0.0, 0.01, 0.02}) {
            const auto d = DriveParams::from_detuning(1.0, rabi, delta);
            const auto mu = quasienergies(d, TimeGrid::for_drive(d, 1024));
            const double ref = rwa_mu_plus(d);
            CHECK(zone_distance(mu[0], ref, 1.0) <= 1e-4);
            CHECK(zone_distance(mu[1], -ref, 1.0) <= 1e-4);
        }
    }
}

TEST_CASE("branch labels are continuous along a Rabi sweep") {
    const double delta = 0.1;
    std::array<double, 2> prev = quasienergies(DriveParams::from_detuning(1.0, 0.01, delta),
                                               TimeGrid(512, 2.0 * constants::pi));
    for (int k = 1; k <= 300; ++k) {
        const auto d = DriveParams::from_detuning(1.0, 0.01 + 1e-3 * k, delta);
        const auto mu = quasienergies(d, TimeGrid::for_drive(d, 512));
        const double same = zone_distance(mu[0], prev[0], 1.0);
        const double swapped = zone_distance(mu[0], prev[1], 1.0);
        CHECK(same < swapped);
        CHECK(same < 2e-3);
        prev = mu;
    }
}

TEST_CASE("dressed states: mixing angle, quasienergies and limits") {
    const auto r = dressed_states(DriveParams::from_detuning(1.0, 0.05, 0.0));
    CHECK(r.theta_m == doctest::Approx(constants::pi / 2));
    CHECK(r.cos_theta == 0.0);
    CHECK(r.mu_plus == doctest::Approx(0.525));
    CHECK(r.mu_minus == doctest::Approx(0.475));

    const auto s = dressed_states(DriveParams::from_detuning(1.0, 0.05, 0.05));
    CHECK(s.theta_m == doctest::Approx(3.0 * constants::pi / 4));

    const auto t = dressed_states(DriveParams::from_detuning(1.0, 1e-9, 0.1));
    CHECK(t.theta_m == doctest::Approx(constants::pi).epsilon(1e-7));
    CHECK(std::norm(t.plus_state()(1)) == doctest::Approx(1.0));

    test::DriveSampler sampler(7, 0.001, 1.0);
    for (int k = 0; k < 100; ++k) {
        const auto d = sampler.next();
        const auto ds = dressed_states(d);
        CHECK(std::abs(ds.cos_theta + d.detuning() / ds.omega_gen) <= 1e-12);
        CHECK(std::abs(std::cos(ds.theta_m) - ds.cos_theta) <= 1e-12);
        CHECK(std::abs(ds.mu_plus - ds.mu_minus - ds.omega_gen) <= 1e-12);
        CHECK(std::abs(ds.plus_state().dot(ds.minus_state())) <= 1e-15);
    }
    CHECK_THROWS_AS(dressed_states(DriveParams::from_detuning(1.0, 0.0, 0.0)), std::invalid_argument);
}

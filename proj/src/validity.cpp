// validity.cpp — tau_mu, time-scale reports and parameter-space scans

#include "fdd/validity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fdd/errors.hpp"

namespace fdd::validity {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double linspace(double lo, double hi, int count, int k) {
    return count == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / (count - 1);
}

bool much_less(double a, double b, double margin) { return std::isfinite(a) && a < margin * b; }

} // namespace

double tau_mu_inverse(double mu_plus, double omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("tau_mu: omega must be > 0");
    const double a = std::abs(mu_plus);
    if (!(2.0 * a < omega))
        throw std::invalid_argument("tau_mu: quasienergy outside the zone 2|mu+| < omega");
    const double inv = std::min({std::abs(omega - 2.0 * a), 2.0 * a, std::abs(omega - 4.0 * a)});
    return inv < 1e-12 * omega ? 0.0 : inv;
}

double tau_mu(const floquet::DriveParams& drive, const floquet::FloquetSolution& sol) {
    const double inv = tau_mu_inverse(sol.mu_plus(), drive.omega());
    return inv == 0.0 ? inf : 1.0 / inv;
}

TimescaleReport timescale_report(const floquet::DriveParams& drive,
                                 const bath::AtomGeometry& geometry, const bath::BathParams& bath,
                                 const HierarchyOptions& options) {
    bath.validate();
    TimescaleReport r;
    r.margin_factor = options.margin;
    r.tau_omega = 1.0 / drive.omega();
    const double gen = drive.generalized_rabi();
    r.tau_omega_gen = gen > 0.0 ? 1.0 / gen : inf;

    try {
        const auto mu = floquet::quasienergies(
            drive, floquet::TimeGrid::for_drive(drive, options.n_samples), options.floquet);
        const double inv = 2.0 * std::abs(mu[0]) < drive.omega() ? tau_mu_inverse(mu[0], drive.omega())
                                                                  : 0.0;
        r.tau_mu = inv > 0.0 ? 1.0 / inv : inf;
    } catch (const DegeneracyError&) {
        r.tau_mu = inf;
        r.degenerate = true;
    }

    const double dd = std::abs(bath::omega_dd(drive.omega_eg(), geometry));
    r.tau_s = dd > 0.0 ? 1.0 / dd : inf;

    r.tau_cg_lower = std::max(r.tau_omega, r.tau_mu);
    r.tau_cg_upper = r.tau_s;
    r.margin_mu = r.tau_mu / r.tau_omega;
    r.margin_s = std::isfinite(r.tau_mu) ? r.tau_s / r.tau_mu : 0.0;
    r.hierarchy_ok = much_less(r.tau_omega, r.tau_mu, options.margin) &&
                     much_less(r.tau_mu, r.tau_s, options.margin);
    r.rwa_ok = much_less(r.tau_omega, r.tau_omega_gen, options.margin) &&
               much_less(r.tau_omega_gen, r.tau_s, options.margin);
    return r;
}

std::string describe(const TimescaleReport& r) {
    std::ostringstream out;
    out.precision(4);
    out << "tau_omega=" << r.tau_omega << " s, tau_mu=" << r.tau_mu
        << " s, tau_Omega_gen=" << r.tau_omega_gen << " s, tau_s=" << r.tau_s
        << " s; secular hierarchy " << (r.hierarchy_ok ? "holds" : "violated")
        << ", RWA hierarchy " << (r.rwa_ok ? "holds" : "violated");
    if (r.degenerate) out << " (degenerate monodromy)";
    return out.str();
}

bool weak_driving(const floquet::DriveParams& drive, double limit) {
    return drive.rabi() <= limit * drive.omega() && std::abs(drive.detuning()) <= limit * drive.omega();
}

TauMap scan_tau_map(const TauMapSpec& spec) {
    if (spec.rabi_count < 1 || spec.omega_eg_count < 1)
        throw std::invalid_argument("tau map: empty grid");
    if (!(spec.omega > 0.0) || spec.rabi_min < 0.0 || spec.rabi_max < spec.rabi_min ||
        !(spec.omega_eg_min > 0.0) || spec.omega_eg_max < spec.omega_eg_min)
        throw std::invalid_argument("tau map: ranges must be positive and ordered");

    TauMap map;
    map.rabi_count = spec.rabi_count;
    map.omega_eg_count = spec.omega_eg_count;
    const int total = spec.rabi_count * spec.omega_eg_count;
    map.cells.resize(total);
    const double omega = spec.omega;

    auto work = [&](int first, int stride) {
        for (int idx = first; idx < total; idx += stride) {
            const int i = idx / spec.omega_eg_count;
            const int j = idx % spec.omega_eg_count;
            TauMapCell& cell = map.cells[idx];
            cell.rabi = linspace(spec.rabi_min, spec.rabi_max, spec.rabi_count, i);
            cell.omega_eg = linspace(spec.omega_eg_min, spec.omega_eg_max, spec.omega_eg_count, j);
            const auto drive = floquet::DriveParams::from_transition(omega, cell.rabi, cell.omega_eg);
            try {
                const auto mu = floquet::quasienergies(
                    drive, floquet::TimeGrid::for_drive(drive, spec.n_samples));
                cell.mu_plus = mu[0];
                const double inv = 2.0 * std::abs(mu[0]) < omega ? tau_mu_inverse(mu[0], omega) : 0.0;
                cell.tau_mu_inv_over_omega = inv / omega;
                cell.diverged = inv == 0.0;
            } catch (const DegeneracyError&) {
                cell.mu_plus = std::numeric_limits<double>::quiet_NaN();
                cell.tau_mu_inv_over_omega = 0.0;
                cell.diverged = true;
            }
        }
    };

    const int threads = std::max(1, std::min(spec.threads, total));
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
        for (auto& th : pool) th.join();
    }

    // Sign changes of the arguments between grid neighbours mark the stripes.
    std::vector<char> flag(total, 0);
    auto consider = [&](int p, int q) {
        const double mp = map.cells[p].mu_plus;
        const double mq = map.cells[q].mu_plus;
        if (std::isnan(mp) || std::isnan(mq)) return;
        auto mark_smaller = [&](double vp, double vq) { flag[std::abs(vp) <= std::abs(vq) ? p : q] = 1; };
        const double s3p = omega - 4.0 * std::abs(mp);
        const double s3q = omega - 4.0 * std::abs(mq);
        if (s3p * s3q < 0.0) mark_smaller(s3p, s3q);
        if (mp * mq < 0.0) {
            if (std::abs(mp - mq) < 0.5 * omega)
                mark_smaller(mp, mq); // 2|mu+| through zero
            else
                mark_smaller(omega - 2.0 * std::abs(mp), omega - 2.0 * std::abs(mq)); // zone edge
        }
    };
    for (int i = 0; i < spec.rabi_count; ++i) {
        for (int j = 0; j < spec.omega_eg_count; ++j) {
            const int p = i * spec.omega_eg_count + j;
            if (j + 1 < spec.omega_eg_count) consider(p, p + 1);
            if (i + 1 < spec.rabi_count) consider(p, p + spec.omega_eg_count);
        }
    }
    for (int p = 0; p < total; ++p) {
        if (!flag[p]) continue;
        map.cells[p].diverged = true;
        map.cells[p].tau_mu_inv_over_omega = 0.0;
    }
    return map;
}

} // namespace fdd::validity

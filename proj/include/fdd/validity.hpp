// validity.hpp — Secular-approximation diagnostics and time-scale hierarchy checks

#pragma once

#include <string>
#include <vector>

#include "fdd/bath.hpp"
#include "fdd/floquet.hpp"

namespace fdd::validity {

// tau_mu^{-1} = min(|omega - 2|mu+||, 2|mu+|, |omega - 4|mu+||) for a zone-folded mu+.
// Returns 0 when the minimum is below 1e-12 omega. Throws std::invalid_argument
// unless 2|mu+| < omega.
double tau_mu_inverse(double mu_plus, double omega);

// +infinity on divergence.
double tau_mu(const floquet::DriveParams& drive, const floquet::FloquetSolution& sol);

struct HierarchyOptions {
    double margin{0.1}; // "a << b" means a < margin * b
    int n_samples{1024};
    floquet::FloquetOptions floquet{};
};

struct TimescaleReport {
    double tau_omega{0.0};     // 1/omega
    double tau_mu{0.0};        // may be +inf
    double tau_s{0.0};         // 1/|Omega~(omega_eg)|, may be +inf
    double tau_omega_gen{0.0}; // 1/Omega_gen, may be +inf
    // Admissible coarse-graining times, the open interval (max(tau_omega, tau_mu), tau_s).
    double tau_cg_lower{0.0};
    double tau_cg_upper{0.0};
    double margin_mu{0.0};     // tau_mu / tau_omega
    double margin_s{0.0};      // tau_s / tau_mu
    double margin_factor{0.1};
    bool hierarchy_ok{false};  // tau_omega << tau_mu << tau_s
    bool rwa_ok{false};        // tau_omega << tau_omega_gen << tau_s
    bool degenerate{false};    // monodromy degenerate, tau_mu set to +inf
};

TimescaleReport timescale_report(const floquet::DriveParams& drive,
                                 const bath::AtomGeometry& geometry, const bath::BathParams& bath,
                                 const HierarchyOptions& options = {});

std::string describe(const TimescaleReport& report);

// Omega_R <= limit omega and |delta| <= limit omega.
bool weak_driving(const floquet::DriveParams& drive, double limit = 0.02);

struct TauMapSpec {
    double omega{1.0};
    double rabi_min{0.0};
    double rabi_max{0.0};
    int rabi_count{1};
    double omega_eg_min{0.0};
    double omega_eg_max{0.0};
    int omega_eg_count{1};
    int n_samples{1024};
    int threads{1};
};

struct TauMapCell {
    double rabi{0.0};
    double omega_eg{0.0};
    double tau_mu_inv_over_omega{0.0}; // 0 where diverged
    bool diverged{false};
    double mu_plus{0.0};               // folded, NaN for degenerate cells
};

// Row-major in (rabi, omega_eg): the omega_eg index runs fastest.
struct TauMap {
    int rabi_count{0};
    int omega_eg_count{0};
    std::vector<TauMapCell> cells;

    const TauMapCell& at(int i_rabi, int j_eg) const { return cells[i_rabi * omega_eg_count + j_eg]; }
};

// A cell is flagged as diverged when tau_mu is infinite there, when the monodromy
// is degenerate, or when one of the three min-arguments changes sign between it and
// a grid neighbour and this cell carries the smaller magnitude.
TauMap scan_tau_map(const TauMapSpec& spec);

} // namespace fdd::validity

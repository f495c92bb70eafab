// dipole.hpp — Sideband matrix elements, Floquet dipole-dipole couplings and decay channels
//
// Two-atom matrices use the product Floquet basis ordering {|++>, |+->, |-+>, |-->};
// for N atoms, atom 0 is the most significant factor and |+> precedes |->.

#pragma once

#include <array>
#include <vector>

#include "fdd/bath.hpp"
#include "fdd/floquet.hpp"
#include "fdd/lindblad.hpp"
#include "fdd/linalg.hpp"

namespace fdd::dipole {

using floquet::Branch;
using lindblad::Channel;

// <<phi_a | sigma_x | phi_b>>_m = (1/T) int_0^T <phi_a(t)|sigma_x|phi_b(t)> e^{i m omega t} dt
class MatrixElementTable {
public:
    MatrixElementTable(int truncation, std::array<std::vector<cd>, 4> entries);

    int truncation() const { return truncation_; }
    cd entry(Branch a, Branch b, int m) const;
    double weight(Branch a, Branch b, int m) const { return std::norm(entry(a, b, m)); }

    // sum_{a, |m| <= M} |<<phi_a|sigma_x|phi_b>>_m|^2
    double sum_rule(Branch b) const;

private:
    int truncation_;
    std::array<std::vector<cd>, 4> entries_;
};

// Throws std::invalid_argument when the cutoff reaches the grid's Nyquist index.
MatrixElementTable matrix_elements(const floquet::FloquetSolution& sol, int truncation);

struct CouplingTerm {
    int m{0};
    double pp{0.0}; // |<<+|sx|+>>_m|^2 Omega~(m omega)
    double pm{0.0}; // |<<-|sx|+>>_m|^2 Omega~(mu+ - mu- + m omega)
};

struct CouplingCoefficients {
    double c_pp{0.0};
    double c_pm{0.0};
    int truncation{0};
    std::vector<CouplingTerm> breakdown;
};

CouplingCoefficients coupling_coefficients(const MatrixElementTable& table,
                                           const floquet::FloquetSolution& sol,
                                           const bath::AtomGeometry& geometry);

struct ConvergenceOptions {
    double relative_tolerance{1e-10};
    int start{-1}; // initial cutoff; negative uses the solution's truncation
};

// Grows the cutoff in steps of two until both coefficients change by less than the
// tolerance relative to max(|c_pp|, |c_pm|). Throws TruncationError past n_samples/4.
CouplingCoefficients converged_coupling_coefficients(const floquet::FloquetSolution& sol,
                                                     const bath::AtomGeometry& geometry,
                                                     const ConvergenceOptions& options = {});

// H = c_pp (|++><++| - |+-><+-| - |-+><-+| + |--><--|) + c_pm (|+-><-+| + |-+><+-|)
Matrix build_hdp2(double c_pp, double c_pm);
inline Matrix build_hdp2(const CouplingCoefficients& c) { return build_hdp2(c.c_pp, c.c_pm); }

struct ChannelSet {
    std::array<Channel, 6> channels;
    int truncation{0};

    std::vector<Channel> as_vector() const { return {channels.begin(), channels.end()}; }
};

ChannelSet build_channels(const MatrixElementTable& table, const floquet::FloquetSolution& sol,
                          const bath::AtomGeometry& geometry, const bath::BathParams& bath);

// Cutoff grown as for the coupling coefficients, on the six rates.
ChannelSet converged_channels(const floquet::FloquetSolution& sol,
                              const bath::AtomGeometry& geometry, const bath::BathParams& bath,
                              const ConvergenceOptions& options = {});

// H_dp^(2) together with the six channels.
lindblad::LindbladModel fme_model(const floquet::FloquetSolution& sol,
                                  const bath::AtomGeometry& geometry,
                                  const bath::BathParams& bath,
                                  const ConvergenceOptions& options = {});

// Per-atom Floquet data entering the N-atom jump operators.
struct AtomFloquetData {
    MatrixElementTable table;
    double mu_plus{0.0};
    double mu_minus{0.0};
};

inline constexpr int max_atoms = 6;
inline constexpr double quasienergy_match_tolerance = 1e-9; // in units of omega

// Product-state quasienergy sum_i mu_{b_i} for basis index `state`.
double product_quasienergy(const std::vector<AtomFloquetData>& atoms, int state);

// Distinct pairwise differences mu_beta - mu_alpha of the product spectrum, ascending,
// grouped within the matching tolerance.
std::vector<double> quasienergy_differences(const std::vector<AtomFloquetData>& atoms,
                                            double omega);

// D_m^i[delta_mu] for every atom i, in the product Floquet basis at t = 0.
// Throws SizeError for more than six atoms.
std::vector<Matrix> build_D_operators(const std::vector<AtomFloquetData>& atoms, int m,
                                      double delta_mu, double omega);

// Diagonal Lindblad form of sum_{ij} gamma_ij (D_i . D_j^dag - 1/2 {D_j^dag D_i, .}).
// Throws NonCpError when gamma has an eigenvalue below -1e-10 |gamma|.
std::vector<Channel> diagonalize_dissipator(const Matrix& gamma, const std::vector<Matrix>& d_ops);

// All (m, delta_mu) blocks of the two-atom dissipator, each diagonalized separately.
std::vector<Channel> generic_channels(const AtomFloquetData& atom, double omega,
                                      const bath::AtomGeometry& geometry,
                                      const bath::BathParams& bath);

} // namespace fdd::dipole

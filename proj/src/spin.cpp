// spin.cpp — J-tensor closed forms, basis transformation and N-spin Hamiltonian

#include "fdd/spin.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fdd/constants.hpp"
#include "fdd/errors.hpp"
#include "fdd/validity.hpp"

namespace fdd::spin {

namespace {

std::array<Eigen::Matrix2cd, 3> paulis() {
    return {linalg::sigma_x(), linalg::sigma_y(), linalg::sigma_z()};
}

} // namespace

MixingAngle MixingAngle::from_angle(double theta_m) {
    if (!(theta_m >= 0.0 && theta_m <= constants::pi))
        throw std::invalid_argument("mixing angle must lie in [0, pi]");
    if (theta_m == 0.5 * constants::pi) return {0.0, 1.0};
    return {std::cos(theta_m), std::sin(theta_m)};
}

MixingAngle MixingAngle::from_dressed(const floquet::DressedStates& dressed) {
    return {dressed.cos_theta, dressed.sin_theta};
}

JTensor::JTensor(double xx, double yy, double zz, double xz) {
    m_(0, 0) = xx;
    m_(1, 1) = yy;
    m_(2, 2) = zz;
    m_(0, 2) = xz;
    m_(2, 0) = xz;
}

JTensor j_tensor(double theta_m, double omega_dd_value) {
    return j_tensor(MixingAngle::from_angle(theta_m), omega_dd_value);
}

// Multiple-angle forms rewritten in cos and sin of theta.
JTensor j_tensor(const MixingAngle& a, double w) {
    const double c = a.cos, s = a.sin;
    const double c2 = c * c - s * s;
    return {w * (0.5 - 0.75 * s * s * c * c), w / 8.0 * (c2 + 3.0), w / 8.0 * s * s * (3.0 * c2 + 5.0),
            w / 8.0 * s * c * (1.0 + 3.0 * c2)};
}

Matrix pair_operator(const JTensor& j) {
    const auto p = paulis();
    Matrix h = Matrix::Zero(4, 4);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            if (j.matrix()(a, b) != 0.0) h += j.matrix()(a, b) * linalg::kron(p[a], p[b]);
    return h;
}

Equivalence dressed_bare_equivalence(double c_pp, double c_pm, const MixingAngle& angle) {
    const Eigen::Matrix2cd sx = linalg::sigma_x(), sz = linalg::sigma_z();
    const Eigen::Matrix2cd tz = angle.cos * sz + angle.sin * sx;
    const Eigen::Matrix2cd tx = -angle.sin * sz + angle.cos * sx;
    const Eigen::Matrix2cd ty = linalg::sigma_y();
    const Matrix h = c_pp * linalg::kron(tz, tz) + 0.5 * c_pm * (linalg::kron(tx, tx) + linalg::kron(ty, ty));

    // Pauli products are orthogonal under Tr(A^dag B) / 4.
    const auto p = paulis();
    Eigen::Matrix3d j;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            j(a, b) = (linalg::kron(p[a], p[b]).adjoint() * h).trace().real() / 4.0;

    Equivalence out;
    out.transformed = JTensor(j(0, 0), j(1, 1), j(2, 2), 0.5 * (j(0, 2) + j(2, 0)));
    out.canonical = JTensor(j(0, 0), j(1, 1), j(2, 2), -0.5 * (j(0, 2) + j(2, 0)));
    out.residual = (h - pair_operator(out.transformed)).cwiseAbs().maxCoeff();
    return out;
}

Equivalence dressed_bare_equivalence(double c_pp, double c_pm, double theta_m) {
    return dressed_bare_equivalence(c_pp, c_pm, MixingAngle::from_angle(theta_m));
}

Matrix build_spin_hamiltonian(const bath::AtomArray& atoms, const floquet::DriveParams& drive,
                              const SpinModelOptions& options) {
    const int n = atoms.size();
    if (n > max_spins)
        throw SizeError("spin model limited to " + std::to_string(max_spins) + " atoms, got " +
                        std::to_string(n));
    if (!validity::weak_driving(drive))
        log_warning("spin model used outside weak near-resonant driving; J tensor is approximate");

    const auto angle = MixingAngle::from_dressed(floquet::dressed_states(drive));
    const double nu = options.frequency == CouplingFrequency::drive ? drive.omega() : drive.omega_eg();
    const auto p = paulis();
    const Eigen::Index dim = Eigen::Index{1} << n;
    Matrix h = Matrix::Zero(dim, dim);
    for (int i = 0; i < n; ++i) {
        for (int k = i + 1; k < n; ++k) {
            const JTensor j = j_tensor(angle, bath::omega_dd(nu, atoms.pair_geometry(i, k)));
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    if (j.matrix()(a, b) != 0.0)
                        h += j.matrix()(a, b) * linalg::embed(p[a], i, n) * linalg::embed(p[b], k, n);
        }
    }
    return h;
}

} // namespace fdd::spin

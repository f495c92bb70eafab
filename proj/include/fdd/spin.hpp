// spin.hpp — Anisotropic Heisenberg description of weakly driven dipole-coupled atoms

#pragma once

#include <Eigen/Dense>

#include "fdd/bath.hpp"
#include "fdd/floquet.hpp"
#include "fdd/linalg.hpp"

namespace fdd::spin {

// Mixing angle carried as (cos, sin) so that resonance gives exactly theta = pi/2.
struct MixingAngle {
    double cos{1.0};
    double sin{0.0};

    // Throws std::invalid_argument outside [0, pi].
    static MixingAngle from_angle(double theta_m);
    static MixingAngle from_dressed(const floquet::DressedStates& dressed);
};

// Real symmetric coupling tensor with only xx, yy, zz and xz = zx nonzero (rad/s).
class JTensor {
public:
    JTensor() = default;
    JTensor(double xx, double yy, double zz, double xz);

    double xx() const { return m_(0, 0); }
    double yy() const { return m_(1, 1); }
    double zz() const { return m_(2, 2); }
    double xz() const { return m_(0, 2); }
    const Eigen::Matrix3d& matrix() const { return m_; }
    double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

private:
    Eigen::Matrix3d m_{Eigen::Matrix3d::Zero()};
};

// J_xx = (W/32)(3 cos 4t + 13), J_yy = (W/8)(cos 2t + 3), J_zz = (W/8) sin^2 t (3 cos 2t + 5),
// J_xz = (W/32)(2 sin 2t + 3 sin 4t), with W the dipole-dipole energy.
JTensor j_tensor(double theta_m, double omega_dd_value);
JTensor j_tensor(const MixingAngle& angle, double omega_dd_value);

struct Equivalence {
    JTensor transformed; // components read off the bare-basis expansion
    JTensor canonical;   // same, with the sign of J_xz of the closed form above
    double residual{0.0}; // weight outside the five-component pattern
};

// Expands c_pp sz~ sz~ + (c_pm/2)(sx~ sx~ + sy~ sy~) in bare Pauli products, where
// sz~ = cos t sz + sin t sx, sx~ = -sin t sz + cos t sx, sy~ = sy.
Equivalence dressed_bare_equivalence(double c_pp, double c_pm, const MixingAngle& angle);
Equivalence dressed_bare_equivalence(double c_pp, double c_pm, double theta_m);

// 4x4 operator sum_{ab} J_ab s^a (x) s^b.
Matrix pair_operator(const JTensor& j);

enum class CouplingFrequency { drive, transition };

struct SpinModelOptions {
    CouplingFrequency frequency{CouplingFrequency::drive};
};

inline constexpr int max_spins = 6;

// H = sum_{i<j} sum_{ab} J^{ij}_{ab} s_i^a s_j^b with J^{ij} from the pair geometry and the
// dressing angle of `drive`. Warns outside weak near-resonant driving; throws SizeError above six atoms.
Matrix build_spin_hamiltonian(const bath::AtomArray& atoms, const floquet::DriveParams& drive,
                              const SpinModelOptions& options = {});

} // namespace fdd::spin

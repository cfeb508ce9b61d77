#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

namespace qdc {

using Complex = std::complex<double>;
using Ket2 = Eigen::Vector2cd;
using Ket4 = Eigen::Vector4cd;
using JonesOperator = Eigen::Matrix2cd;

// Polarization conventions, fixed once and used everywhere:
//
//   H = (1, 0)             V = (0, 1)
//   D = (H + V)/sqrt(2)    A = (H - V)/sqrt(2)
//   R = (H - iV)/sqrt(2)   L = (H + iV)/sqrt(2)
//
// Two-photon amplitudes are ordered [HH, HV, VH, VV]; the first slot is the
// biexciton-arm photon. Waveplates follow the retarder convention
// Rot(theta) * diag(1, e^{i Gamma}) * Rot(-theta): the fast axis at angle
// theta from horizontal acquires no phase, the slow axis the full
// retardance. No additional global phases are applied anywhere.
enum class Basis : int { H = 0, V, D, A, R, L };

inline constexpr std::array<Basis, 6> kAllBases = {Basis::H, Basis::V, Basis::D,
                                                   Basis::A, Basis::R, Basis::L};

// Index of an (XX-arm, X-arm) basis pair in a 36-element table.
inline constexpr int pair_index(Basis i, Basis j) {
    return 6 * static_cast<int>(i) + static_cast<int>(j);
}

char basis_symbol(Basis b);
Basis basis_from_symbol(char c);  // throws std::invalid_argument

Ket2 basis_ket(Basis b);

struct TwoPhotonKet {
    Ket4 amp = Ket4::Zero();  // [HH, HV, VH, VV]

    TwoPhotonKet() = default;
    explicit TwoPhotonKet(const Ket4& a) : amp(a) {}

    double norm() const { return amp.norm(); }
    TwoPhotonKet normalized() const;
};

// Unit ket |i>|j| of the measurement pair basis <ij|.
TwoPhotonKet projector(Basis i, Basis j);

inline Complex overlap(const TwoPhotonKet& a, const TwoPhotonKet& b) {
    return a.amp.dot(b.amp);  // <a|b>
}

// Equality up to a global phase: |<a|b>| >= 1 - tol for unit kets.
bool same_state(const TwoPhotonKet& a, const TwoPhotonKet& b, double tol = 1e-10);

struct DensityMatrix4 {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();

    DensityMatrix4() = default;
    explicit DensityMatrix4(const Eigen::Matrix4cd& mat) : m(mat) {}

    static DensityMatrix4 pure(const TwoPhotonKet& k);
    static DensityMatrix4 maximally_mixed();

    double hermiticity_error() const;  // max_ij |m - m^dag|
    double trace_error() const;        // |tr m - 1|
    double min_eigenvalue() const;     // of the Hermitian part
};

// Wootters concurrence in [0, 1]. Throws std::invalid_argument when the
// input is visibly not a density matrix (non-Hermitian or trace != 1),
// which signals an upstream reconstruction bug.
double concurrence(const DensityMatrix4& rho);

// <target|rho|target>, clamped to [0, 1].
double fidelity(const DensityMatrix4& rho, const TwoPhotonKet& target);

// Half-waveplate with fast axis at theta: [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
JonesOperator jones_hwp(double theta);
// Quarter-waveplate with fast axis at theta; jones_qwp(0) = diag(1, i).
JonesOperator jones_qwp(double theta);

// (op_a  ⊗ op_b) |s>, op_a acting on the first (XX-arm) photon.
TwoPhotonKet apply_local(const JonesOperator& op_a, const JonesOperator& op_b,
                         const TwoPhotonKet& s);
DensityMatrix4 apply_local(const JonesOperator& op_a, const JonesOperator& op_b,
                           const DensityMatrix4& rho);

}  // namespace qdc

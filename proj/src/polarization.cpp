#include "qdcascade/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdc {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

// sigma_y ⊗ sigma_y in the [HH, HV, VH, VV] basis.
Eigen::Matrix4cd spin_flip() {
    Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
    s(0, 3) = -1.0;
    s(1, 2) = 1.0;
    s(2, 1) = 1.0;
    s(3, 0) = -1.0;
    return s;
}

// Rot(theta) * diag(1, retard) * Rot(-theta)
JonesOperator waveplate(double theta, Complex retard) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    JonesOperator j;
    j(0, 0) = c * c + retard * s * s;
    j(0, 1) = c * s * (1.0 - retard);
    j(1, 0) = j(0, 1);
    j(1, 1) = s * s + retard * c * c;
    return j;
}

}  // namespace

char basis_symbol(Basis b) {
    return "HVDARL"[static_cast<int>(b)];
}

Basis basis_from_symbol(char c) {
    switch (c) {
        case 'H': return Basis::H;
        case 'V': return Basis::V;
        case 'D': return Basis::D;
        case 'A': return Basis::A;
        case 'R': return Basis::R;
        case 'L': return Basis::L;
        default: throw std::invalid_argument(std::string("unknown basis symbol '") + c + "'");
    }
}

Ket2 basis_ket(Basis b) {
    switch (b) {
        case Basis::H: return Ket2(1.0, 0.0);
        case Basis::V: return Ket2(0.0, 1.0);
        case Basis::D: return Ket2(kInvSqrt2, kInvSqrt2);
        case Basis::A: return Ket2(kInvSqrt2, -kInvSqrt2);
        case Basis::R: return Ket2(Complex(kInvSqrt2, 0.0), Complex(0.0, -kInvSqrt2));
        case Basis::L: return Ket2(Complex(kInvSqrt2, 0.0), Complex(0.0, kInvSqrt2));
    }
    throw std::invalid_argument("invalid basis state");
}

TwoPhotonKet TwoPhotonKet::normalized() const {
    const double n = amp.norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize the zero ket");
    return TwoPhotonKet(amp / n);
}

TwoPhotonKet projector(Basis i, Basis j) {
    const Ket2 a = basis_ket(i);
    const Ket2 b = basis_ket(j);
    Ket4 out;
    out << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
    return TwoPhotonKet(out);
}

bool same_state(const TwoPhotonKet& a, const TwoPhotonKet& b, double tol) {
    return std::abs(overlap(a, b)) >= 1.0 - tol;
}

DensityMatrix4 DensityMatrix4::pure(const TwoPhotonKet& k) {
    return DensityMatrix4(k.amp * k.amp.adjoint());
}

DensityMatrix4 DensityMatrix4::maximally_mixed() {
    return DensityMatrix4(Eigen::Matrix4cd::Identity() * 0.25);
}

double DensityMatrix4::hermiticity_error() const {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix4::trace_error() const {
    return std::abs(m.trace() - Complex(1.0, 0.0));
}

double DensityMatrix4::min_eigenvalue() const {
    const Eigen::Matrix4cd h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
    return es.eigenvalues().minCoeff();
}

double concurrence(const DensityMatrix4& rho) {
    if (rho.hermiticity_error() > 1e-10)
        throw std::invalid_argument("concurrence: input is not Hermitian");
    if (rho.trace_error() > 1e-9)
        throw std::invalid_argument("concurrence: input trace differs from 1");

    const Eigen::Matrix4cd h = 0.5 * (rho.m + rho.m.adjoint());

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
    Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
    const Eigen::Matrix4cd sqrt_rho =
        es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();

    // The Wootters eigenvalues are the singular values of
    // A = sqrt(rho) S sqrt(rho)*: the Hermitian product
    // sqrt(rho) S rho* S sqrt(rho) factors as A A^dag. Reading them off the
    // SVD avoids the square root of eps-level eigenvalue noise, which would
    // otherwise put a ~1e-8 floor under separable states.
    const Eigen::Matrix4cd a = sqrt_rho * spin_flip() * sqrt_rho.conjugate();
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(a);
    const Eigen::Vector4d lam = svd.singularValues();  // sorted descending

    const double c = lam(0) - lam(1) - lam(2) - lam(3);
    return std::clamp(c, 0.0, 1.0);
}

double fidelity(const DensityMatrix4& rho, const TwoPhotonKet& target) {
    if (rho.hermiticity_error() > 1e-10)
        throw std::invalid_argument("fidelity: input is not Hermitian");
    if (rho.trace_error() > 1e-9)
        throw std::invalid_argument("fidelity: input trace differs from 1");
    const Complex f = target.amp.dot(rho.m * target.amp);
    return std::clamp(f.real(), 0.0, 1.0);
}

JonesOperator jones_hwp(double theta) {
    return waveplate(theta, Complex(-1.0, 0.0));
}

JonesOperator jones_qwp(double theta) {
    return waveplate(theta, Complex(0.0, 1.0));
}

TwoPhotonKet apply_local(const JonesOperator& op_a, const JonesOperator& op_b,
                         const TwoPhotonKet& s) {
    Ket4 out = Ket4::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    out(2 * i + j) += op_a(i, k) * op_b(j, l) * s.amp(2 * k + l);
    return TwoPhotonKet(out);
}

DensityMatrix4 apply_local(const JonesOperator& op_a, const JonesOperator& op_b,
                           const DensityMatrix4& rho) {
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    u(2 * i + j, 2 * k + l) = op_a(i, k) * op_b(j, l);
    return DensityMatrix4(u * rho.m * u.adjoint());
}

}  // namespace qdc

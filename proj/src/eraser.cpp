#include "qdcascade/eraser.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qdc {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
}

EraserConfig EraserConfig::compensating(double delta_ueV) {
    return {delta_ueV, compensating_omega(delta_ueV)};
}

bool EraserConfig::is_compensating(double rel_tol) const {
    const double target = compensating_omega(delta_ueV);
    if (target == 0.0) return omega_rad_ns == 0.0;
    return std::abs(omega_rad_ns - target) <= rel_tol * std::abs(target);
}

double compensating_omega(double delta_ueV) {
    return (delta_ueV / kHbar) / 4.0;
}

double rf_frequency_MHz(double delta_ueV) {
    return delta_ueV / (8.0 * std::numbers::pi * kHbar) * 1e3;
}

TwoPhotonKet qwp_pair_transform(const TwoPhotonKet& s) {
    static const JonesOperator qa = jones_qwp(-std::numbers::pi / 4.0);
    static const JonesOperator qb = jones_qwp(std::numbers::pi / 4.0);
    return apply_local(qa, qb, s);
}

JonesOperator rotating_hwp(double t_ns, double omega_rad_ns) {
    return jones_hwp(omega_rad_ns * t_ns);
}

TwoPhotonKet bell_rl_plus_lr() {
    const Ket2 r = basis_ket(Basis::R);
    const Ket2 l = basis_ket(Basis::L);
    Ket4 a;
    a << kInvSqrt2 * (r(0) * l(0) + l(0) * r(0)),
         kInvSqrt2 * (r(0) * l(1) + l(0) * r(1)),
         kInvSqrt2 * (r(1) * l(0) + l(1) * r(0)),
         kInvSqrt2 * (r(1) * l(1) + l(1) * r(1));
    return TwoPhotonKet(a);
}

TwoPhotonKet erase(double t_ns, double delta_ueV, double omega_rad_ns) {
    const TwoPhotonKet circ = qwp_pair_transform(psi(t_ns, delta_ueV));
    // XX photon passes its plate at the pulse reference, the X photon at
    // its emission delay.
    return apply_local(rotating_hwp(0.0, omega_rad_ns),
                       rotating_hwp(t_ns, omega_rad_ns), circ);
}

TwoPhotonKet erase(double t_ns, const CascadeParams& p) {
    return erase(t_ns, p.delta_ueV, compensating_omega(p.delta_ueV));
}

double FreqTaggedPhoton::norm() const {
    double n2 = 0.0;
    for (const Mode& m : modes) n2 += std::norm(m.amp);
    return std::sqrt(n2);
}

void FreqTaggedPhoton::validate(double tol) const {
    if (std::abs(norm() - 1.0) > tol)
        throw std::invalid_argument("frequency-tagged photon is not normalized");
    for (size_t a = 0; a < modes.size(); ++a)
        for (size_t b = a + 1; b < modes.size(); ++b)
            if (modes[a].pol == modes[b].pol &&
                modes[a].detuning_ueV == modes[b].detuning_ueV)
                throw std::invalid_argument("duplicate (polarization, detuning) mode");
}

FreqTaggedPhoton shift_photon(const FreqTaggedPhoton& p, double omega_rad_ns) {
    const double shift = 2.0 * omega_rad_ns;  // rad/ns, exact doubling
    FreqTaggedPhoton out;
    out.modes.reserve(p.modes.size());
    for (const FreqTaggedPhoton::Mode& m : p.modes) {
        const Circular flipped = m.pol == Circular::R ? Circular::L : Circular::R;
        if (shift == 0.0) {
            out.modes.push_back({flipped, m.detuning_ueV, m.amp});
            continue;
        }
        const double nu = m.detuning_ueV / kHbar;
        const double nu_out = m.pol == Circular::R ? nu + shift : nu - shift;
        out.modes.push_back({flipped, nu_out * kHbar, m.amp});
    }
    return out;
}

FreqTaggedPhoton x_photon_paths(double delta_ueV) {
    FreqTaggedPhoton p;
    p.modes.push_back({Circular::R, -delta_ueV / 2.0, Complex(kInvSqrt2)});
    p.modes.push_back({Circular::L, delta_ueV / 2.0, Complex(kInvSqrt2)});
    return p;
}

double which_path_distinguishability(const CascadeParams& p, double omega_rad_ns) {
    const FreqTaggedPhoton shifted = shift_photon(x_photon_paths(p.delta_ueV), omega_rad_ns);
    // The two modes' detunings coincide exactly at the compensating drive:
    // +-delta/2 are exact halvings, the shift is an exact doubling of omega,
    // and compensating_omega quarters delta/hbar exactly.
    return std::abs(shifted.modes[0].detuning_ueV - shifted.modes[1].detuning_ueV);
}

}  // namespace qdc

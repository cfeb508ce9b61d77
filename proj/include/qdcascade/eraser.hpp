#pragma once

#include <vector>

#include "qdcascade/cascade.hpp"

namespace qdc {

// Conventions for the erasure stage, fixed once:
//
//  * The XX-arm quarter-waveplate sits at -pi/4 (H -> L, V -> R), the X-arm
//    one at +pi/4 (H -> R, V -> L), both up to fixed phases.
//  * A half-waveplate at angle theta maps R -> e^{-2i theta} L and
//    L -> e^{+2i theta} R. With theta = omega t and the physical sign
//    convention e^{-iEt/hbar}, a spinning plate therefore up-converts R by
//    2 hbar omega and down-converts L by the same amount.
//  * Each photon meets its spinning plate at its own transit time: the
//    XX photon at the pulse reference (t = 0), the X photon at the
//    emission delay t. Applying one shared plate angle to both arms would
//    be a local unitary at fixed t and could never remove the relative
//    precession phase.
//  * In the frequency picture the X photon of the two decay paths sits at
//    detuning -delta/2 (R polarized) and +delta/2 (L polarized).

struct EraserConfig {
    double delta_ueV = 0.0;
    double omega_rad_ns = 0.0;  // angular frequency of the spinning half-waveplates

    static EraserConfig compensating(double delta_ueV);
    bool is_compensating(double rel_tol = 1e-12) const;
};

// delta/(4 hbar), evaluated as (delta/hbar)/4 so that the frequency-domain
// compensation cancels exactly in floating point.
double compensating_omega(double delta_ueV);

// Drive frequency f = delta/(8 pi hbar) of the spinning plates, in MHz.
double rf_frequency_MHz(double delta_ueV);

// Quarter-waveplate pair: maps (|HH> + e^{-i phi}|VV>)/sqrt2 onto
// (|LR> + e^{-i phi}|RL>)/sqrt2 up to a global phase.
TwoPhotonKet qwp_pair_transform(const TwoPhotonKet& s);

// Jones matrix of the spinning half-waveplate at time t.
JonesOperator rotating_hwp(double t_ns, double omega_rad_ns);

// (|RL> + |LR>)/sqrt2, the target Bell state of the erased cascade.
TwoPhotonKet bell_rl_plus_lr();

// Full erasure chain at emission delay t: quarter-waveplate pair, then the
// spinning plates at the photons' transit times. At the compensating
// frequency the output is (|RL> + |LR>)/sqrt2 up to a global phase for
// every t.
TwoPhotonKet erase(double t_ns, double delta_ueV, double omega_rad_ns);
TwoPhotonKet erase(double t_ns, const CascadeParams& p);  // compensating omega

enum class Circular : int { R = 0, L = 1 };

// Single photon as a superposition of (circular polarization, detuning)
// modes with finite support.
struct FreqTaggedPhoton {
    struct Mode {
        Circular pol;
        double detuning_ueV;
        Complex amp;
    };
    std::vector<Mode> modes;

    double norm() const;
    // unit norm within tol, no duplicate (polarization, detuning) keys
    void validate(double tol = 1e-12) const;
};

// Single-sideband action of the spinning plate: (R, d) -> (L, d + 2 hbar w),
// (L, d) -> (R, d - 2 hbar w). Amplitudes are carried through unchanged;
// the time-domain phase e^{-+2i w t} is exactly the evolution of the shifted
// detuning, so the two pictures stay interconvertible. The arithmetic runs
// in precession-frequency units (detuning/hbar) where the shift is an exact
// doubling of omega.
FreqTaggedPhoton shift_photon(const FreqTaggedPhoton& p, double omega_rad_ns);

// The X photon of the two decay paths after the quarter-waveplate stage:
// (R, -delta/2) and (L, +delta/2), equal weights.
FreqTaggedPhoton x_photon_paths(double delta_ueV);

// Absolute detuning difference (ueV) between the two decay paths' X photons
// after the spinning plate; zero exactly at omega = compensating_omega(delta).
double which_path_distinguishability(const CascadeParams& p, double omega_rad_ns);

}  // namespace qdc

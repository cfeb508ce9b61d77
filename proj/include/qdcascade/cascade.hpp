#pragma once

#include <array>
#include <optional>

#include "qdcascade/constants.hpp"
#include "qdcascade/polarization.hpp"

namespace qdc {

struct CascadeParams {
    double delta_ueV = 0.0;  // fine-structure splitting
    double tau_x_ns = 1.0;   // exciton lifetime
    double n0 = 1.0;         // total detected pair count
    void validate() const;   // throws std::invalid_argument
};

struct DetectorModel {
    double tau_fwhm_ns = 0.0;  // FWHM of the correlation-time response; 0 means ideal
    double sigma() const { return gaussian_sigma_from_fwhm(tau_fwhm_ns); }
    void validate() const;
};

// Physical constants bundled for consumers that want them as data.
struct PhysicalConstants {
    double hbar = kHbar;
    double h = kPlanck;
};

// Emitted pure pair state |chi(s)> = b0 + e^{-i delta s / hbar} b1, split
// into a static and a precessing branch. The cascade uses b0 = |HH>/sqrt2,
// b1 = |VV>/sqrt2; a time-independent source has an empty precessing branch.
struct PairSource {
    Ket4 branch_static = Ket4::Zero();
    Ket4 branch_precessing = Ket4::Zero();

    static PairSource cascade();
    static PairSource constant(const TwoPhotonKet& s);
};

// (|HH> + e^{-i delta t / hbar} |VV>) / sqrt2
TwoPhotonKet psi(double t_ns, double delta_ueV);

// n(t) = n0/tau_x * exp(-t/tau_x) for t >= 0, else 0.
double envelope(double t_ns, const CascadeParams& p);

// |<ij|Psi(t)>|^2 n(t)
double projection_rate(Basis i, Basis j, double t_ns, const CascadeParams& p);

// Projection rate convolved with the Gaussian detector response.
double convolved_rate(Basis i, Basis j, double t_ns, const CascadeParams& p,
                      const DetectorModel& det);
double convolved_rate(Basis i, Basis j, double t_ns, const PairSource& src,
                      const CascadeParams& p, const DetectorModel& det);

// All 36 convolved rates at once (shares the convolution evaluations),
// indexed by pair_index().
std::array<double, 36> convolved_rates(double t_ns, const CascadeParams& p,
                                       const DetectorModel& det);
std::array<double, 36> convolved_rates(double t_ns, const PairSource& src,
                                       const CascadeParams& p, const DetectorModel& det);

// Time bins whose convolved total rate falls below
// kRateFloorFactor * n0 / tau_x carry no usable state information.
inline constexpr double kRateFloorFactor = 1e-12;

struct TimeBinState {
    DensityMatrix4 rho;
    double total_rate = 0.0;  // 1/ns
};

// Normalized detected state at correlation time t: the Gaussian-weighted
// mixture of |chi(s)><chi(s)| over emission times, with the convolved total
// rate as second output. Empty when the total rate is below the floor.
std::optional<TimeBinState> rho_of_t(double t_ns, const CascadeParams& p,
                                     const DetectorModel& det);
std::optional<TimeBinState> rho_of_t(double t_ns, const PairSource& src,
                                     const CascadeParams& p, const DetectorModel& det);

namespace detail {

// F(t; lambda) = Integral_0^inf g(t - s; sigma) e^{-lambda s} ds for
// Re(lambda) >= 0, with g a unit-mass Gaussian of standard deviation sigma.
// Evaluated through the scaled complementary error function so that no
// intermediate overflows; sigma = 0 degenerates to e^{-lambda t} [t >= 0].
Complex exp_gauss_convolution(double t, Complex lambda, double sigma);

}  // namespace detail

}  // namespace qdc

#include "qdcascade/cascade.hpp"

#include <cmath>
#include <stdexcept>

#include "qdcascade/faddeeva.hpp"

namespace qdc {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

// <ij| components of the two source branches: p = <ij|b0>, q = <ij|b1>.
struct BranchAmplitudes {
    Complex p, q;
};

BranchAmplitudes branch_amplitudes(Basis i, Basis j, const PairSource& src) {
    const Ket4 proj = projector(i, j).amp;
    return {proj.dot(src.branch_static), proj.dot(src.branch_precessing)};
}

// Convolved rate from the two scalar kernels:
//   m_ij(t) = (|p|^2 + |q|^2) E0 + 2 Re(conj(p) q Ec)
double rate_from_kernels(const BranchAmplitudes& a, double e0, Complex ec) {
    const double m = (std::norm(a.p) + std::norm(a.q)) * e0 +
                     2.0 * (std::conj(a.p) * a.q * ec).real();
    return m > 0.0 ? m : 0.0;
}

struct ConvolutionKernels {
    double e0 = 0.0;   // n0 * F(t; 1/tau_x) / tau_x, the convolved envelope
    Complex ec = 0.0;  // same with lambda = 1/tau_x + i delta/hbar
};

ConvolutionKernels kernels_at(double t, const CascadeParams& p, const DetectorModel& det) {
    const double sigma = det.sigma();
    const double scale = p.n0 / p.tau_x_ns;
    ConvolutionKernels k;
    if (sigma == 0.0) {
        if (t < 0.0) return k;
        k.e0 = scale * std::exp(-t / p.tau_x_ns);
        k.ec = p.delta_ueV == 0.0
                   ? Complex(k.e0)
                   : k.e0 * std::polar(1.0, -p.delta_ueV / kHbar * t);
        return k;
    }
    const double lam0 = 1.0 / p.tau_x_ns;
    k.e0 = scale * detail::exp_gauss_convolution(t, Complex(lam0), sigma).real();
    if (k.e0 < 0.0) k.e0 = 0.0;
    if (p.delta_ueV == 0.0) {
        k.ec = k.e0;
    } else {
        const Complex lam(lam0, p.delta_ueV / kHbar);
        k.ec = scale * detail::exp_gauss_convolution(t, lam, sigma);
    }
    return k;
}

}  // namespace

void CascadeParams::validate() const {
    if (!(tau_x_ns > 0.0)) throw std::invalid_argument("tau_x_ns must be positive");
    if (!(delta_ueV >= 0.0)) throw std::invalid_argument("delta_ueV must be nonnegative");
    if (!(n0 > 0.0)) throw std::invalid_argument("n0 must be positive");
}

void DetectorModel::validate() const {
    if (!(tau_fwhm_ns >= 0.0)) throw std::invalid_argument("tau_fwhm_ns must be nonnegative");
}

PairSource PairSource::cascade() {
    PairSource s;
    s.branch_static(0) = kInvSqrt2;      // |HH>
    s.branch_precessing(3) = kInvSqrt2;  // |VV>
    return s;
}

PairSource PairSource::constant(const TwoPhotonKet& k) {
    PairSource s;
    s.branch_static = k.amp;
    return s;
}

TwoPhotonKet psi(double t_ns, double delta_ueV) {
    Ket4 a = Ket4::Zero();
    a(0) = kInvSqrt2;
    a(3) = std::polar(kInvSqrt2, -delta_ueV / kHbar * t_ns);
    return TwoPhotonKet(a);
}

double envelope(double t_ns, const CascadeParams& p) {
    if (t_ns < 0.0) return 0.0;
    return p.n0 / p.tau_x_ns * std::exp(-t_ns / p.tau_x_ns);
}

double projection_rate(Basis i, Basis j, double t_ns, const CascadeParams& p) {
    const Complex amp = projector(i, j).amp.dot(psi(t_ns, p.delta_ueV).amp);
    return std::norm(amp) * envelope(t_ns, p);
}

double convolved_rate(Basis i, Basis j, double t_ns, const PairSource& src,
                      const CascadeParams& p, const DetectorModel& det) {
    const ConvolutionKernels k = kernels_at(t_ns, p, det);
    return rate_from_kernels(branch_amplitudes(i, j, src), k.e0, k.ec);
}

double convolved_rate(Basis i, Basis j, double t_ns, const CascadeParams& p,
                      const DetectorModel& det) {
    return convolved_rate(i, j, t_ns, PairSource::cascade(), p, det);
}

std::array<double, 36> convolved_rates(double t_ns, const PairSource& src,
                                       const CascadeParams& p, const DetectorModel& det) {
    const ConvolutionKernels k = kernels_at(t_ns, p, det);
    std::array<double, 36> out{};
    for (Basis i : kAllBases)
        for (Basis j : kAllBases)
            out[pair_index(i, j)] = rate_from_kernels(branch_amplitudes(i, j, src), k.e0, k.ec);
    return out;
}

std::array<double, 36> convolved_rates(double t_ns, const CascadeParams& p,
                                       const DetectorModel& det) {
    return convolved_rates(t_ns, PairSource::cascade(), p, det);
}

std::optional<TimeBinState> rho_of_t(double t_ns, const PairSource& src,
                                     const CascadeParams& p, const DetectorModel& det) {
    p.validate();
    det.validate();
    const double floor = kRateFloorFactor * p.n0 / p.tau_x_ns;
    const ConvolutionKernels k = kernels_at(t_ns, p, det);

    const Ket4& b0 = src.branch_static;
    const Ket4& b1 = src.branch_precessing;
    Eigen::Matrix4cd num = (b0 * b0.adjoint() + b1 * b1.adjoint()) * k.e0;
    num += (b1 * b0.adjoint()) * k.ec + (b0 * b1.adjoint()) * std::conj(k.ec);

    const double total = num.trace().real();
    if (!(total >= floor)) return std::nullopt;

    Eigen::Matrix4cd rho = num / total;
    rho = 0.5 * (rho + rho.adjoint().eval());
    rho /= rho.trace().real();

    return TimeBinState{DensityMatrix4(rho), total};
}

std::optional<TimeBinState> rho_of_t(double t_ns, const CascadeParams& p,
                                     const DetectorModel& det) {
    return rho_of_t(t_ns, PairSource::cascade(), p, det);
}

namespace detail {

Complex exp_gauss_convolution(double t, Complex lambda, double sigma) {
    if (sigma == 0.0) {
        if (t < 0.0) return 0.0;
        return std::exp(-lambda * t);
    }
    const double inv = 1.0 / (std::sqrt(2.0) * sigma);
    const Complex u = (lambda * sigma * sigma - t) * inv;
    const double gauss_exp = -t * t / (2.0 * sigma * sigma);
    if (u.real() >= 0.0) {
        return 0.5 * std::exp(gauss_exp) * math::erfcx(u);
    }
    // Reflection keeps the erfcx argument in the right half plane; the
    // leading exponent has real part sigma^2 Re(lambda^2)/2 - Re(lambda) t,
    // bounded above by (sigma/tau_x)^2/2 in this model, so it cannot overflow.
    const Complex lead = std::exp(0.5 * lambda * lambda * sigma * sigma - lambda * t);
    return lead - 0.5 * std::exp(gauss_exp) * math::erfcx(-u);
}

}  // namespace detail

}  // namespace qdc

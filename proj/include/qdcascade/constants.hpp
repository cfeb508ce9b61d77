#pragma once

#include <cmath>

namespace qdc {

// Unit system used throughout: energies in ueV, times in ns. Rates are then
// 1/ns, energy/hbar is rad/ns, and energy/h is GHz (ordinary frequency).
inline constexpr double kHbar = 0.6582119569;    // ueV * ns
inline constexpr double kPlanck = 4.135667696;   // ueV * ns, h = 2 pi hbar

inline double gaussian_sigma_from_fwhm(double fwhm) {
    return fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

}  // namespace qdc

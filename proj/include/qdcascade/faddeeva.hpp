#pragma once

#include <complex>

namespace qdc::math {

// Scaled complementary error function erfcx(z) = exp(z^2) erfc(z) for
// Re(z) >= 0, where it is bounded; relative accuracy is ~1e-13 over the
// half plane. For Re(z) < 0 the function grows like 2 exp(z^2) and the
// caller must use the reflection erfcx(z) = 2 exp(z^2) - erfcx(-z) with
// its own overflow handling.
std::complex<double> erfcx(std::complex<double> z);

// Faddeeva function w(z) = exp(-z^2) erfc(-iz) for Im(z) >= 0.
std::complex<double> faddeeva_w(std::complex<double> z);

}  // namespace qdc::math

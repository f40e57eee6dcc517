#pragma once

#include <complex>

namespace springs {

/// Faddeeva function w(z) = exp(-z^2) erfc(-i z), accurate for Im z >= 0.
///
/// Weideman's 40-term rational approximation in the Moebius variable
/// (L + i z)/(L - i z).
std::complex<double> faddeeva_w(std::complex<double> z);

/// Imaginary error function (2/sqrt(pi)) * integral from 0 to z of exp(t^2).
/// Throws DomainError when Re(z^2) > 700, where exp(z^2) overflows.
std::complex<double> erfi(std::complex<double> z);

}  // namespace springs

#pragma once

#include <complex>

namespace d2d {

// J(kappa) = integral_0^kappa (1 - e^{-iv}) v^{-1-delta} dv for delta in (0, 1).
// kappa may be +infinity, where J = Gamma(1-delta)/delta * e^{i pi delta / 2}.
std::complex<double> truncated_levy_integral(double kappa, double delta);

// integral_lower^inf (1 - exp(-u tau^-alpha)) tau dtau for complex u with Re u >= 0,
// lower >= 0, alpha > 2. Laplace exponent of a planar PPP shot noise:
// E[exp(-s I)] = exp(-2 pi lambda * shot_noise_laplace(s * P, r_min, alpha)).
std::complex<double> shot_noise_laplace(std::complex<double> u, double lower, double alpha);

// Same integral on the imaginary axis, u = i c (characteristic-function form).
std::complex<double> shot_noise_integral(double c, double lower, double alpha);

}  // namespace d2d

#include "d2dcov/shot_noise.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace d2d {

namespace {

using cd = std::complex<double>;

constexpr double kSeriesLimit = 8.0;

// Upper incomplete gamma Gamma(a, z) by the Legendre continued fraction (modified Lentz).
cd upper_gamma_cf(double a, cd z)
{
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    cd b = z + 1.0 - a;
    cd c = 1.0 / tiny;
    cd d = 1.0 / b;
    cd h = d;
    for (int i = 1; i < 2000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const cd del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps)
            return std::exp(-z + a * std::log(z)) * h;
    }
    throw std::runtime_error("upper_gamma_cf: continued fraction did not converge at a = " + std::to_string(a) +
                             ", z = (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")");
}

// z^delta * integral_0^z (1 - e^{-w}) w^{-1-delta} dw, Re z >= 0, Im z >= 0.
cd scaled_levy(cd z, double delta)
{
    const double mag = std::abs(z);
    if (mag == 0.0)
        return {0.0, 0.0};
    if (mag <= kSeriesLimit) {
        // -sum_{n>=1} (-z)^n / (n! (n - delta))
        cd sum = 0.0;
        cd term = 1.0;
        for (int n = 1; n < 400; ++n) {
            term *= -z / static_cast<double>(n);
            const cd c = term / (n - delta);
            sum += c;
            if (n > mag && std::abs(c) < 1e-18 * std::abs(sum))
                break;
        }
        return -sum;
    }
    const cd zd = std::exp(delta * std::log(z));
    // Gamma(-delta, z) carries e^{-z}, negligible once Re z is large.
    const cd tail = z.real() > 700.0 ? cd(0.0) : upper_gamma_cf(-delta, z);
    return zd * (std::tgamma(1.0 - delta) / delta + tail) - 1.0 / delta;
}

cd levy_infinite(double delta)
{
    const double mag = std::tgamma(1.0 - delta) / delta;
    const double phase = std::numbers::pi * delta / 2.0;
    return {mag * std::cos(phase), mag * std::sin(phase)};
}

}  // namespace

cd truncated_levy_integral(double kappa, double delta)
{
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("truncated_levy_integral: delta must lie in (0, 1)");
    if (!(kappa >= 0.0))
        throw std::invalid_argument("truncated_levy_integral: kappa must be >= 0");
    if (kappa == 0.0)
        return {0.0, 0.0};
    if (std::isinf(kappa))
        return levy_infinite(delta);
    // J(kappa) = e^{i pi delta/2} K(i kappa), K(z) = z^-delta scaled_levy(z).
    return std::pow(kappa, -delta) * scaled_levy(cd(0.0, kappa), delta);
}

cd shot_noise_laplace(cd u, double lower, double alpha)
{
    if (!(alpha > 2.0))
        throw std::invalid_argument("shot_noise_laplace: alpha must be > 2");
    if (!(lower >= 0.0))
        throw std::invalid_argument("shot_noise_laplace: lower limit must be >= 0");
    if (!(u.real() >= 0.0) || !std::isfinite(u.imag()))
        throw std::invalid_argument("shot_noise_laplace: need Re u >= 0");
    if (u == 0.0)
        return {0.0, 0.0};
    if (u.imag() < 0.0)
        return std::conj(shot_noise_laplace(std::conj(u), lower, alpha));
    const double delta = 2.0 / alpha;
    const cd unbounded = 0.5 * std::tgamma(1.0 - delta) * std::exp(delta * std::log(u));
    if (lower == 0.0)
        return unbounded;
    // Substituting w = u tau^-alpha: (delta/2) lower^2 z^delta K(z), z = u lower^-alpha.
    const double log_scale = -alpha * std::log(lower);
    if (std::log(std::abs(u)) + log_scale > 600.0)
        return unbounded - 0.5 * lower * lower;
    const cd z = u * std::exp(log_scale);
    return 0.5 * delta * lower * lower * scaled_levy(z, delta);
}

cd shot_noise_integral(double c, double lower, double alpha)
{
    if (!std::isfinite(c))
        throw std::invalid_argument("shot_noise_integral: c must be finite");
    if (c < 0.0)
        return std::conj(shot_noise_laplace(cd(0.0, -c), lower, alpha));
    return shot_noise_laplace(cd(0.0, c), lower, alpha);
}

}  // namespace d2d

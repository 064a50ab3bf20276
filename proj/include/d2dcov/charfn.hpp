#pragma once

#include "d2dcov/config.hpp"
#include "d2dcov/quadrature.hpp"

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace d2d {

// Characteristic function F(w) = E[exp(-i w Y)] of Y = 1/SINR, stored as
// exp(-i w shift) * residual(w) where shift is a deterministic offset (noise / signal)
// and the residual is the CF of the random part Z = Y - shift.
class CharacteristicFn {
public:
    using Eval = std::function<std::complex<double>(double)>;
    using Laplace = std::function<std::complex<double>(std::complex<double>)>;

    // Generic CF with no known structure (shift 0).
    static CharacteristicFn from_eval(Eval eval, bool nonnegative = false);
    // Residual given by its Laplace transform E[exp(-s Z)], Re s >= 0, Z >= 0.
    static CharacteristicFn from_laplace(double shift, Laplace laplace);
    // Point mass at y (residual identically 1).
    static CharacteristicFn point_mass(double y);

    std::complex<double> operator()(double w) const { return eval(w); }
    std::complex<double> eval(double w) const;
    std::complex<double> residual(double w) const;
    std::complex<double> residual_laplace(std::complex<double> s) const;

    double shift() const { return shift_; }
    bool degenerate() const { return degenerate_; }
    bool nonnegative() const { return nonnegative_; }
    bool has_laplace() const { return static_cast<bool>(laplace_); }

    // Conditioning data, informational.
    Mode mode = Mode::cellular;
    double r0 = 0.0;

private:
    double shift_ = 0.0;
    bool degenerate_ = false;
    bool nonnegative_ = false;
    Eval eval_;
    Laplace laplace_;
};

enum class Inversion {
    automatic,   // euler when a Laplace transform is available, else gil_pelaez
    gil_pelaez,  // truncated Fourier integral along the real axis
    euler,       // Euler-summed Bromwich integral of the Laplace transform
};

// Pr[Y < 1/T] = Pr[SINR > T] for each threshold (linear, > 0).
std::vector<double> invert_ccdf_many(const CharacteristicFn& cf, std::span<const double> thresholds,
                                     const QuadratureSpec& spec = {}, Inversion method = Inversion::automatic);
double invert_ccdf(const CharacteristicFn& cf, double threshold, const QuadratureSpec& spec = {},
                   Inversion method = Inversion::automatic);

// Euler-summed Laplace inversion of a nonnegative variable with transform E[exp(-s Z)]:
// returns {Pr[Z <= y], y * density(y)} for y > 0.
std::pair<double, double> euler_cdf_density(const std::function<std::complex<double>(std::complex<double>)>& laplace,
                                            double y);

// Pr[Z <= y] of the residual, for each y. Exposed for tests.
std::vector<double> residual_cdf(const CharacteristicFn& cf, std::span<const double> ys, const QuadratureSpec& spec,
                                 Inversion method);

}  // namespace d2d

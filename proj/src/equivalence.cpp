#include "d2dcov/equivalence.hpp"

#include "d2dcov/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace d2d {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTailMass = 1e-9;

// x with exp(-x) * (1 + x) == tail.
double gamma2_tail_point(double tail)
{
    double x = -std::log(tail);
    for (int i = 0; i < 50; ++i)
        x = -std::log(tail) + std::log1p(x);
    return x;
}

}  // namespace

double shadow_moment(double sigma_nat, double alpha)
{
    if (!(sigma_nat >= 0.0) || !(alpha > 0.0))
        throw std::invalid_argument("shadow_moment: need sigma >= 0 and alpha > 0");
    return std::exp(2.0 * sigma_nat * sigma_nat / (alpha * alpha));
}

double intensity_measure(double eps, double lambda, double sigma_nat, double alpha)
{
    if (!(eps >= 0.0))
        throw std::invalid_argument("intensity_measure: radius must be >= 0");
    if (!(lambda >= 0.0))
        throw std::invalid_argument("intensity_measure: density must be >= 0");
    return kPi * lambda * eps * eps * shadow_moment(sigma_nat, alpha);
}

double cell_radius(const LinearParams& p)
{
    if (!(p.beta > 0.0))
        throw std::invalid_argument("cell_radius: beta must be > 0 (linear)");
    return std::pow(p.gain_b * p.p_b / p.beta, 1.0 / p.alpha_b);
}

double cell_radius(const NetworkConfig& cfg)
{
    return cell_radius(linearize(cfg));
}

ModeSplit mode_probability(const LinearParams& p)
{
    const double t = cell_radius(p);
    const double q = -std::expm1(-intensity_measure(t, p.lambda_b, p.sigma_b, p.alpha_b));
    return {q, q * p.lambda_u, (1.0 - q) * p.lambda_u};
}

ModeSplit mode_probability(const NetworkConfig& cfg)
{
    return mode_probability(linearize(cfg));
}

double d2d_transmitter_density(const LinearParams& p, double q)
{
    return p.activity * (1.0 - q) * p.lambda_u;
}

DistanceLaw::DistanceLaw(std::string name, Fn pdf, Fn cdf, double lo, double hi, double tail_cutoff)
    : name_(std::move(name)), pdf_(std::move(pdf)), cdf_(std::move(cdf)), lo_(lo), hi_(hi), tail_cutoff_(tail_cutoff)
{
    if (!(hi > lo))
        throw std::invalid_argument("DistanceLaw: empty support");
}

double DistanceLaw::pdf(double r) const
{
    if (r < lo_ || r > hi_)
        return 0.0;
    return pdf_(r);
}

double DistanceLaw::cdf(double r) const
{
    if (r <= lo_)
        return 0.0;
    if (r >= hi_)
        return 1.0;
    return cdf_(r);
}

DistanceLaw nearest_neighbor_law(double lambda, double moment)
{
    const double mu = kPi * lambda * moment;
    if (!(mu > 0.0))
        throw std::invalid_argument("nearest_neighbor_law: density must be > 0");
    return DistanceLaw(
        "nearest_neighbor", [mu](double r) { return 2.0 * mu * r * std::exp(-mu * r * r); },
        [mu](double r) { return -std::expm1(-mu * r * r); }, 0.0, std::numeric_limits<double>::infinity(),
        std::sqrt(-std::log(kTailMass) / mu));
}

DistanceLaw second_neighbor_law(double lambda, double moment)
{
    const double mu = kPi * lambda * moment;
    if (!(mu > 0.0))
        throw std::invalid_argument("second_neighbor_law: density must be > 0");
    return DistanceLaw(
        "second_neighbor",
        [mu](double r) {
            const double x = mu * r * r;
            return 2.0 * mu * x * r * std::exp(-x);
        },
        [mu](double r) {
            const double x = mu * r * r;
            return -std::expm1(-x) - x * std::exp(-x);
        },
        0.0, std::numeric_limits<double>::infinity(), std::sqrt(gamma2_tail_point(kTailMass) / mu));
}

DistanceLaw serving_distance_law(const LinearParams& p)
{
    const double t = cell_radius(p);
    const double mu = kPi * p.lambda_b * shadow_moment(p.sigma_b, p.alpha_b);
    const double q = -std::expm1(-mu * t * t);
    if (!(q > 0.0))
        throw std::invalid_argument("serving_distance_law: cellular mode has zero probability");
    return DistanceLaw(
        "serving_distance", [mu, q](double r) { return 2.0 * mu * r * std::exp(-mu * r * r) / q; },
        [mu, q](double r) { return -std::expm1(-mu * r * r) / q; }, 0.0, t, t);
}

DistanceLaw serving_distance_law(const NetworkConfig& cfg)
{
    return serving_distance_law(linearize(cfg));
}

double cu_mean_tx_power(const NetworkConfig& cfg, const QuadratureSpec& spec)
{
    spec.validate();
    const LinearParams p = linearize(cfg);
    const DistanceLaw law = serving_distance_law(p);
    auto integrand = [&](double r) { return cu_tx_power_mw(r, p) * law.pdf(r); };
    return integrate(integrand, 0.0, law.hi(), 0.0, std::min(spec.rel_tol, 1e-8), spec.max_subdivisions).value;
}

double cellular_overlap_prob(double r_d, double r1, double t)
{
    if (!(r_d > 0.0) || !(r1 > 0.0))
        throw std::invalid_argument("cellular_overlap_prob: distances must be > 0");
    if (!(t >= 0.0))
        throw std::invalid_argument("cellular_overlap_prob: disk radius must be >= 0");
    const double arg = (r_d * r_d + r1 * r1 - t * t) / (2.0 * r_d * r1);
    if (arg >= 1.0)
        return 0.0;
    if (arg <= -1.0)
        return 1.0;
    return std::acos(arg) / kPi;
}

namespace {

struct D2dLawParts {
    double t;
    double mu_b;      // pi * lambda_b * moment_b
    double mu_d;      // pi * lambda_tu * moment_d
    double r1_max;    // truncation of the transmitter-to-BS distance
};

D2dLawParts d2d_parts(const LinearParams& p)
{
    const ModeSplit split = mode_probability(p);
    const double lambda_tu = d2d_transmitter_density(p, split.q);
    if (!(lambda_tu > 0.0))
        throw std::invalid_argument("d2d_distance_law: no active D2D transmitters (activity or 1-q is zero)");
    D2dLawParts parts{};
    parts.t = cell_radius(p);
    parts.mu_b = kPi * p.lambda_b * shadow_moment(p.sigma_b, p.alpha_b);
    parts.mu_d = kPi * lambda_tu * shadow_moment(p.sigma_d, p.alpha_d);
    parts.r1_max = std::sqrt(parts.t * parts.t - std::log(kTailMass) / parts.mu_b);
    return parts;
}

double fallback_weight(double R, const D2dLawParts& s)
{
    if (s.t <= 0.0 || R <= 0.0)
        return 0.0;
    const double lo = std::max(s.t, R - s.t);
    const double hi = std::min(R + s.t, s.r1_max);
    if (!(hi > lo))
        return 0.0;
    // Transmitter's equivalent distance to its strongest BS, conditioned on D2D mode (r1 > t).
    auto integrand = [&](double r1) {
        const double g = 2.0 * s.mu_b * r1 * std::exp(-s.mu_b * (r1 * r1 - s.t * s.t));
        return g * cellular_overlap_prob(R, r1, s.t);
    };
    return integrate(integrand, lo, hi, 1e-13, 1e-10).value;
}

}  // namespace

double d2d_fallback_weight(double R, const LinearParams& p)
{
    return fallback_weight(R, d2d_parts(p));
}

DistanceLaw d2d_distance_law(const LinearParams& p)
{
    const D2dLawParts s = d2d_parts(p);
    const double mu = s.mu_d;
    auto f_nn = [mu](double r) { return 2.0 * mu * r * std::exp(-mu * r * r); };
    auto f_2 = [mu](double r) {
        const double x = mu * r * r;
        return 2.0 * mu * x * r * std::exp(-x);
    };
    auto F_nn = [mu](double r) { return -std::expm1(-mu * r * r); };
    // f_2 - f_nn changes sign at 1/sqrt(mu).
    const double crossover = 1.0 / std::sqrt(mu);
    const double r_max = std::sqrt(gamma2_tail_point(1e-13) / mu);

    auto correction_density = [=](double x) { return fallback_weight(x, s) * (f_2(x) - f_nn(x)); };
    auto correction = [=](double R) {
        if (R <= 0.0)
            return 0.0;
        const double upper = std::min(R, r_max);
        if (upper <= crossover) {
            const double bp[2] = {0.0, upper};
            return integrate(correction_density, std::span<const double>(bp, 2), 1e-12, 1e-10).value;
        }
        const double bp[3] = {0.0, crossover, upper};
        return integrate(correction_density, std::span<const double>(bp, 3), 1e-12, 1e-10).value;
    };

    const double mass = 1.0 + correction(r_max);
    auto pdf = [=](double R) {
        const double w = fallback_weight(R, s);
        return ((1.0 - w) * f_nn(R) + w * f_2(R)) / mass;
    };
    auto cdf = [=](double R) {
        const double v = (F_nn(R) + correction(R)) / mass;
        if (v < -1e-6 || v > 1.0 + 1e-6) {
            std::ostringstream os;
            os << "d2d_distance_law: CDF(" << R << ") = " << v << " outside [0,1]";
            throw std::runtime_error(os.str());
        }
        return std::clamp(v, 0.0, 1.0);
    };
    DistanceLaw law("d2d_link_distance", pdf, cdf, 0.0, std::numeric_limits<double>::infinity(),
                    std::sqrt(gamma2_tail_point(kTailMass) / mu));
    law.set_raw_mass(mass);
    return law;
}

DistanceLaw d2d_distance_law(const NetworkConfig& cfg)
{
    return d2d_distance_law(linearize(cfg));
}

}  // namespace d2d

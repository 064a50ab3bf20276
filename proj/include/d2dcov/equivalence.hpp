#pragma once

#include "d2dcov/config.hpp"
#include "d2dcov/quadrature.hpp"

#include <functional>
#include <limits>
#include <string>

namespace d2d {

// E[H^(2/alpha)] for lognormal H with natural-log deviation sigma: exp(2 sigma^2 / alpha^2).
double shadow_moment(double sigma_nat, double alpha);

// Expected number of transformed points within equivalent radius eps:
// pi * lambda * eps^2 * exp(2 sigma^2 / alpha^2).
double intensity_measure(double eps, double lambda, double sigma_nat, double alpha);

// Equivalent radius t = (A_B P_B / beta)^(1/alpha_B) below which a UE is in cellular mode.
double cell_radius(const LinearParams& p);
double cell_radius(const NetworkConfig& cfg);

struct ModeSplit {
    double q;         // probability of cellular mode
    double lambda_c;  // cellular UE density, per m^2
    double lambda_d;  // D2D UE density, per m^2
};

ModeSplit mode_probability(const NetworkConfig& cfg);
ModeSplit mode_probability(const LinearParams& p);

// Density of active D2D transmitters, activity * (1 - q) * lambda_u, per m^2.
double d2d_transmitter_density(const LinearParams& p, double q);

// A probability law over equivalent distances (m). pdf/cdf are clamped to the support.
class DistanceLaw {
public:
    using Fn = std::function<double(double)>;

    DistanceLaw(std::string name, Fn pdf, Fn cdf, double lo, double hi, double tail_cutoff);

    double pdf(double r) const;
    double cdf(double r) const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    // Radius beyond which the remaining probability mass is below 1e-9 (== hi for bounded laws).
    double tail_cutoff() const { return tail_cutoff_; }
    const std::string& name() const { return name_; }

    // Mass of the unnormalized construction; 1 unless the law had to be renormalized.
    double raw_mass() const { return raw_mass_; }
    void set_raw_mass(double m) { raw_mass_ = m; }

private:
    std::string name_;
    Fn pdf_;
    Fn cdf_;
    double lo_;
    double hi_;
    double tail_cutoff_;
    double raw_mass_ = 1.0;
};

// Nearest-neighbour law in a transformed PPP with effective intensity mu = pi*lambda*moment (per m^2 * pi).
DistanceLaw nearest_neighbor_law(double lambda, double moment);
// Second-nearest-neighbour law in the same process.
DistanceLaw second_neighbor_law(double lambda, double moment);

// Equivalent serving distance of a cellular UE: the transformed nearest-BS law truncated to [0, t].
DistanceLaw serving_distance_law(const NetworkConfig& cfg);
DistanceLaw serving_distance_law(const LinearParams& p);

// E[P_c] over the serving-distance law.
double cu_mean_tx_power(const NetworkConfig& cfg, const QuadratureSpec& spec = {});

// Fraction of the circle of radius r_d around a point at distance r1 from a BS that falls
// inside the BS's cellular disk of radius t.
double cellular_overlap_prob(double r_d, double r1, double t);

// D2D link distance law: nearest transmitter-side candidate, falling back to the second
// neighbour when the nearest candidate lies in a cellular disk. Renormalized to unit mass.
DistanceLaw d2d_distance_law(const NetworkConfig& cfg);
DistanceLaw d2d_distance_law(const LinearParams& p);

// Weight of the second-neighbour branch at distance R: E over the transmitter's BS distance
// of cellular_overlap_prob(R, r1, t). Exposed for tests.
double d2d_fallback_weight(double R, const LinearParams& p);

}  // namespace d2d

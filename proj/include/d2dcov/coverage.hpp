#pragma once

#include "d2dcov/charfn.hpp"
#include "d2dcov/config.hpp"
#include "d2dcov/equivalence.hpp"
#include "d2dcov/quadrature.hpp"

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace d2d {

// Precomputed analytic context for one configuration: laws, densities and moments
// shared by every characteristic function and coverage evaluation. Characteristic
// functions returned by a model refer to it and must not outlive it.
class AnalyticModel {
public:
    explicit AnalyticModel(const NetworkConfig& cfg, const QuadratureSpec& spec = {});

    const NetworkConfig& config() const { return cfg_; }
    const LinearParams& params() const { return p_; }
    const QuadratureSpec& spec() const { return spec_; }
    double cell_radius() const { return t_; }
    const ModeSplit& split() const { return split_; }
    double d2d_tx_density() const { return lambda_tx_; }
    const DistanceLaw& serving_law() const;
    const DistanceLaw& d2d_law() const;

    // Received signal power (mW) of the typical link at equivalent distance r0.
    double cellular_signal(double r0) const;
    double d2d_signal(double r0) const;

    CharacteristicFn cellular_charfn(double r0) const;
    CharacteristicFn d2d_charfn(double r0) const;

    // Cellular-interferer exponent by the fixed rule and by adaptive quadrature (for tests).
    std::complex<double> cellular_interference(std::complex<double> s, double r0, bool adaptive = false) const;

    // Pr[SINR > T] at each linear threshold, averaged over the serving-distance law.
    std::vector<double> coverage(Mode mode, std::span<const double> thresholds) const;
    double coverage(Mode mode, double threshold) const;

private:
    std::complex<double> cellular_exponent(std::complex<double> s, double r0) const;
    // Exponent of E[exp(-v I)] for the total interference I (mW) at a BS, v in 1/mW.
    std::complex<double> interference_exponent(std::complex<double> v, double lower) const;
    double cu_exclusion_radius(double r0) const;
    // CDF of the interference at a typical BS when it does not depend on r0.
    double interference_cdf(double x) const;

    struct InterferenceTable;
    std::complex<double> d2d_exponent(std::complex<double> s, double r0) const;

    NetworkConfig cfg_;
    LinearParams p_;
    QuadratureSpec spec_;
    double t_ = 0.0;
    ModeSplit split_{};
    double lambda_tx_ = 0.0;
    double moment_b_ = 1.0;       // e^{2 sigma_B^2 / alpha_B^2}
    double moment_d_ = 1.0;       // e^{2 sigma_D^2 / alpha_D^2}
    double moment_dx_ = 1.0;      // D2D interferer moment with the configured exponent
    double alpha_dx_ = 0.0;       // D2D interferer exponent at a D2D receiver
    double power_moment_b_ = 0.0; // E[P_c^(2/alpha_B)]
    double power_moment_d_ = 0.0; // E[P_c^(2/alpha_D)]
    // Fixed quadrature over the interferers' own serving distance: weight includes the pdf.
    struct PowerNode {
        double weight;
        double power;
    };
    std::vector<PowerNode> power_nodes_;
    std::optional<DistanceLaw> serving_;
    std::shared_ptr<InterferenceTable> table_;
    std::optional<DistanceLaw> d2d_;
};

CharacteristicFn cellular_charfn(double r0, const NetworkConfig& cfg);
CharacteristicFn d2d_charfn(double r0, const NetworkConfig& cfg);

double coverage_cellular(double threshold, const NetworkConfig& cfg, const QuadratureSpec& spec = {});
double coverage_d2d(double threshold, const NetworkConfig& cfg, const QuadratureSpec& spec = {});

}  // namespace d2d

#pragma once

#include "d2dcov/config.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace d2d {

class AnalyticModel;

enum class Method { analytic, montecarlo };
std::string to_string(Method m);

// Pr[SINR > T] sampled on an increasing threshold grid (dB).
struct CoverageCurve {
    Mode mode = Mode::cellular;
    Method method = Method::analytic;
    std::vector<double> thresholds_db;
    std::vector<double> probabilities;
    std::vector<double> ci_halfwidth;  // zeros for analytic curves

    // Throws std::invalid_argument on shape, range or monotonicity violations.
    void validate() const;
};

struct AseEstimate {
    double value = 0.0;       // bps/Hz/km^2
    double tail_bound = 0.0;  // extrapolated contribution beyond the grid, also its uncertainty
};

struct AseResult {
    double ase_cellular = 0.0;  // bps/Hz/km^2
    double ase_d2d = 0.0;
    double ase_sum = 0.0;
    double gamma0_db = 0.0;
    double lambda_cellular = 0.0;  // links per km^2
    double lambda_d2d = 0.0;
    double tail_bound_cellular = 0.0;
    double tail_bound_d2d = 0.0;
};

// lambda * [log2(1+g0) P(g0) + (1/ln 2) int_{g0}^inf P(x)/(1+x) dx], trapezoid in dB.
AseEstimate ase_from_coverage(const CoverageCurve& curve, double lambda_mode_km2, double gamma0);

AseResult combine_ase(const AseEstimate& cellular, const AseEstimate& d2d, double gamma0_db, double lambda_cellular,
                      double lambda_d2d);

// Active links per km^2: lambda_b for cellular, activity*(1-q)*lambda_u for D2D.
double link_density(Mode mode, const NetworkConfig& cfg);

// Wilson score interval half-width for k successes in n trials.
double wilson_halfwidth(std::size_t successes, std::size_t n, double z = 1.96);

// 81 thresholds from -20 to 60 dB.
std::vector<double> ase_threshold_grid_db();

// Thresholds from lo to hi (dB) inclusive in steps of step.
std::vector<double> threshold_range_db(double lo, double hi, double step);

CoverageCurve analytic_curve(const AnalyticModel& model, Mode mode, const std::vector<double>& thresholds_db);

// ASE of both tiers from analytic coverage on the ASE grid.
AseResult analytic_ase(const AnalyticModel& model, double gamma0_db);

}  // namespace d2d

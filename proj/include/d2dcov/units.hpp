#pragma once

namespace d2d {

// Decibel conversions. All reject non-finite input with std::invalid_argument.
double db_to_linear(double db);
double linear_to_db(double ratio);
double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

// Std dev of ln H for lognormal shadowing H = exp(kappa * xi_dB), |kappa| = ln10/10.
double sigma_natural(double sigma_db);

// Per km^2 <-> per m^2.
constexpr double per_km2_to_per_m2(double d) { return d * 1e-6; }
constexpr double per_m2_to_per_km2(double d) { return d * 1e6; }

}  // namespace d2d

#pragma once

#include "d2dcov/config.hpp"

namespace d2d {

enum class LinkKind { cellular, d2d };

// A single link evaluated in dB. pathloss_db already carries the shadowing term,
// so rx_power_dbm = tx_power_dbm - pathloss_db.
struct LinkBudget {
    double pathloss_db;
    double shadowing_db;
    double rx_power_dbm;
};

// A^dB + alpha * 10 log10(r) + xi_dB, with (A^dB, alpha) picked by link kind.
double pathloss_db(LinkKind kind, double r, double xi_db, const NetworkConfig& cfg);

LinkBudget link_budget(double tx_dbm, LinkKind kind, double r, double xi_db, const NetworkConfig& cfg);

// A * P_tx * H * r^-alpha in mW.
double rx_power_mw(double tx_dbm, LinkKind kind, double r, double shadow_linear, const NetworkConfig& cfg);

// Linear shadowing factor for a dB deviate: H = 10^(-xi_dB/10).
double shadow_linear(double xi_db);

// Fractional channel inversion in equivalent-distance form, P0 / A_B^eps * r^(alpha_B eps),
// clamped to p_max when one is configured.
double cu_tx_power_mw(double equiv_r, const NetworkConfig& cfg);
double cu_tx_power_mw(double equiv_r, const LinearParams& p);

}  // namespace d2d

#include "d2dcov/propagation.hpp"

#include "d2dcov/units.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace d2d {

namespace {

void require_positive_distance(double r)
{
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("link distance must be finite and > 0");
}

}  // namespace

double pathloss_db(LinkKind kind, double r, double xi_db, const NetworkConfig& cfg)
{
    require_positive_distance(r);
    const bool cell = kind == LinkKind::cellular;
    const double a_db = cell ? cfg.a_b_db : cfg.a_d_db;
    const double alpha = cell ? cfg.alpha_b : cfg.alpha_d;
    return a_db + alpha * 10.0 * std::log10(r) + xi_db;
}

LinkBudget link_budget(double tx_dbm, LinkKind kind, double r, double xi_db, const NetworkConfig& cfg)
{
    const double pl = pathloss_db(kind, r, xi_db, cfg);
    return {pl, xi_db, tx_dbm - pl};
}

double shadow_linear(double xi_db)
{
    return db_to_linear(-xi_db);
}

double rx_power_mw(double tx_dbm, LinkKind kind, double r, double shadow, const NetworkConfig& cfg)
{
    require_positive_distance(r);
    if (!(shadow > 0.0))
        throw std::invalid_argument("rx_power_mw: shadowing factor must be > 0");
    const bool cell = kind == LinkKind::cellular;
    const double gain = db_to_linear(-(cell ? cfg.a_b_db : cfg.a_d_db));
    const double alpha = cell ? cfg.alpha_b : cfg.alpha_d;
    return gain * dbm_to_mw(tx_dbm) * shadow * std::pow(r, -alpha);
}

double cu_tx_power_mw(double equiv_r, const LinearParams& p)
{
    if (!(equiv_r >= 0.0) || !std::isfinite(equiv_r))
        throw std::invalid_argument("cu_tx_power_mw: equivalent distance must be finite and >= 0");
    const double power = p.p0 / std::pow(p.gain_b, p.epsilon) * std::pow(equiv_r, p.alpha_b * p.epsilon);
    return p.p_max ? std::min(power, *p.p_max) : power;
}

double cu_tx_power_mw(double equiv_r, const NetworkConfig& cfg)
{
    return cu_tx_power_mw(equiv_r, linearize(cfg));
}

}  // namespace d2d

#include "d2dcov/units.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace d2d {

namespace {

void require_finite(double x, const char* what)
{
    if (!std::isfinite(x))
        throw std::invalid_argument(std::string(what) + ": non-finite input");
}

}  // namespace

double db_to_linear(double db)
{
    require_finite(db, "db_to_linear");
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double ratio)
{
    require_finite(ratio, "linear_to_db");
    if (ratio <= 0.0)
        throw std::invalid_argument("linear_to_db: ratio must be positive");
    return 10.0 * std::log10(ratio);
}

double dbm_to_mw(double dbm)
{
    require_finite(dbm, "dbm_to_mw");
    return std::pow(10.0, dbm / 10.0);
}

double mw_to_dbm(double mw)
{
    require_finite(mw, "mw_to_dbm");
    if (mw <= 0.0)
        throw std::invalid_argument("mw_to_dbm: power must be positive");
    return 10.0 * std::log10(mw);
}

double sigma_natural(double sigma_db)
{
    require_finite(sigma_db, "sigma_natural");
    if (sigma_db < 0.0)
        throw std::invalid_argument("sigma_natural: negative standard deviation");
    return std::numbers::ln10 / 10.0 * sigma_db;
}

}  // namespace d2d

#include "d2dcov/metrics.hpp"

#include "d2dcov/coverage.hpp"
#include "d2dcov/equivalence.hpp"
#include "d2dcov/units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace d2d {

namespace {

constexpr double kLn10Over10 = std::numbers::ln10 / 10.0;

}  // namespace

std::string to_string(Method m)
{
    return m == Method::analytic ? "analytic" : "montecarlo";
}

void CoverageCurve::validate() const
{
    const std::size_t n = thresholds_db.size();
    if (probabilities.size() != n || ci_halfwidth.size() != n)
        throw std::invalid_argument("CoverageCurve: column lengths differ");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(thresholds_db[i]))
            throw std::invalid_argument("CoverageCurve: non-finite threshold");
        if (i > 0 && !(thresholds_db[i] > thresholds_db[i - 1]))
            throw std::invalid_argument("CoverageCurve: thresholds must be strictly increasing");
        if (!(probabilities[i] >= 0.0 && probabilities[i] <= 1.0))
            throw std::invalid_argument("CoverageCurve: probability outside [0,1]");
        if (!(ci_halfwidth[i] >= 0.0))
            throw std::invalid_argument("CoverageCurve: negative CI half-width");
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double slack =
            method == Method::analytic ? 1e-6 : 2.0 * std::max(ci_halfwidth[i], ci_halfwidth[i - 1]);
        if (probabilities[i] > probabilities[i - 1] + slack)
            throw std::invalid_argument("CoverageCurve: coverage increases with threshold beyond slack");
    }
}

AseEstimate ase_from_coverage(const CoverageCurve& curve, double lambda_mode_km2, double gamma0)
{
    curve.validate();
    if (!(lambda_mode_km2 >= 0.0))
        throw std::invalid_argument("ase_from_coverage: density must be >= 0");
    if (!(gamma0 > 0.0))
        throw std::invalid_argument("ase_from_coverage: gamma0 must be > 0 (linear)");
    const auto& d = curve.thresholds_db;
    const auto& P = curve.probabilities;
    const std::size_t n = d.size();
    const double g0_db = linear_to_db(gamma0);
    if (n < 2 || g0_db < d.front() || g0_db > d.back())
        throw std::invalid_argument("ase_from_coverage: gamma0 outside the curve's threshold range");

    // Grid restricted to [gamma0, last], with P(gamma0) interpolated linearly in dB.
    std::vector<double> xs{g0_db};
    std::vector<double> ps;
    std::size_t k = 0;
    while (k + 1 < n && d[k + 1] <= g0_db)
        ++k;
    if (d[k] == g0_db || k + 1 == n) {
        ps.push_back(P[k]);
    } else {
        const double f = (g0_db - d[k]) / (d[k + 1] - d[k]);
        ps.push_back(P[k] + f * (P[k + 1] - P[k]));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
        if (d[i] <= g0_db)
            continue;
        xs.push_back(d[i]);
        ps.push_back(P[i]);
    }

    auto weight = [](double db) {
        const double x = db_to_linear(db);
        return x / (1.0 + x) * kLn10Over10;
    };
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        integral += 0.5 * (xs[i + 1] - xs[i]) * (ps[i] * weight(xs[i]) + ps[i + 1] * weight(xs[i + 1]));

    double tail = 0.0;
    const double p_last = ps.back();
    if (p_last > 0.0) {
        double slope = 0.0;
        if (xs.size() >= 2 && ps[ps.size() - 2] > 0.0)
            slope = std::log(ps[ps.size() - 2] / p_last) / (xs.back() - xs[xs.size() - 2]);
        tail = slope > 0.0 ? p_last * kLn10Over10 / slope : std::numeric_limits<double>::infinity();
    }

    AseEstimate out;
    const double finite_tail = std::isfinite(tail) ? tail : 0.0;
    out.value = lambda_mode_km2 *
                (std::log2(1.0 + gamma0) * ps.front() + (integral + finite_tail) / std::numbers::ln2);
    out.tail_bound = lambda_mode_km2 * tail / std::numbers::ln2;
    return out;
}

AseResult combine_ase(const AseEstimate& cellular, const AseEstimate& d2d, double gamma0_db, double lambda_cellular,
                      double lambda_d2d)
{
    AseResult r;
    r.ase_cellular = cellular.value;
    r.ase_d2d = d2d.value;
    r.ase_sum = r.ase_cellular + r.ase_d2d;
    r.gamma0_db = gamma0_db;
    r.lambda_cellular = lambda_cellular;
    r.lambda_d2d = lambda_d2d;
    r.tail_bound_cellular = cellular.tail_bound;
    r.tail_bound_d2d = d2d.tail_bound;
    return r;
}

double link_density(Mode mode, const NetworkConfig& cfg)
{
    cfg.validate();
    if (mode == Mode::cellular)
        return cfg.lambda_b;
    const ModeSplit split = mode_probability(cfg);
    return cfg.d2d_tx_activity * (1.0 - split.q) * cfg.lambda_u;
}

double wilson_halfwidth(std::size_t successes, std::size_t n, double z)
{
    if (n == 0)
        return std::numeric_limits<double>::quiet_NaN();
    if (successes > n)
        throw std::invalid_argument("wilson_halfwidth: successes exceed trials");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    return z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
}

std::vector<double> threshold_range_db(double lo, double hi, double step)
{
    if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("threshold_range_db: need finite bounds and step > 0");
    std::vector<double> out;
    const double span = hi - lo;
    if (span < 0.0)
        return out;
    const auto count = static_cast<std::size_t>(std::floor(span / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i)
        out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

std::vector<double> ase_threshold_grid_db()
{
    return threshold_range_db(-20.0, 60.0, 1.0);
}

CoverageCurve analytic_curve(const AnalyticModel& model, Mode mode, const std::vector<double>& thresholds_db)
{
    CoverageCurve c;
    c.mode = mode;
    c.method = Method::analytic;
    c.thresholds_db = thresholds_db;
    std::vector<double> lin;
    lin.reserve(thresholds_db.size());
    for (double db : thresholds_db)
        lin.push_back(db_to_linear(db));
    c.probabilities = model.coverage(mode, lin);
    c.ci_halfwidth.assign(thresholds_db.size(), 0.0);
    c.validate();
    return c;
}

AseResult analytic_ase(const AnalyticModel& model, double gamma0_db)
{
    std::vector<double> grid;
    for (double db : ase_threshold_grid_db())
        if (db >= gamma0_db)
            grid.push_back(db);
    if (grid.empty() || grid.front() > gamma0_db)
        grid.insert(grid.begin(), gamma0_db);
    const double g0 = db_to_linear(gamma0_db);
    const NetworkConfig& cfg = model.config();
    const double lc = link_density(Mode::cellular, cfg);
    const double ld = link_density(Mode::d2d, cfg);
    AseEstimate ec;
    AseEstimate ed;
    if (model.split().q > 0.0)
        ec = ase_from_coverage(analytic_curve(model, Mode::cellular, grid), lc, g0);
    if (model.d2d_tx_density() > 0.0)
        ed = ase_from_coverage(analytic_curve(model, Mode::d2d, grid), ld, g0);
    return combine_ase(ec, ed, gamma0_db, lc, ld);
}

}  // namespace d2d

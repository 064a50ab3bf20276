#include "d2dcov/coverage.hpp"

#include "d2dcov/propagation.hpp"
#include "d2dcov/shot_noise.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <valarray>

namespace d2d {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// exp(delta * log(u)) on the principal branch.
cd cpow(cd u, double delta)
{
    if (u == 0.0)
        return {0.0, 0.0};
    return std::exp(delta * std::log(u));
}

}  // namespace

AnalyticModel::AnalyticModel(const NetworkConfig& cfg, const QuadratureSpec& spec) : cfg_(cfg), spec_(spec)
{
    cfg_.validate();
    spec_.validate();
    p_ = linearize(cfg_);
    t_ = d2d::cell_radius(p_);
    split_ = mode_probability(p_);
    lambda_tx_ = d2d_transmitter_density(p_, split_.q);
    moment_b_ = shadow_moment(p_.sigma_b, p_.alpha_b);
    moment_d_ = shadow_moment(p_.sigma_d, p_.alpha_d);
    alpha_dx_ = cfg_.d2d_interference_exponent == D2dInterferenceExponent::alpha_d ? p_.alpha_d : p_.alpha_b;
    moment_dx_ = shadow_moment(p_.sigma_d, alpha_dx_);

    if (split_.q > 0.0) {
        serving_.emplace(serving_distance_law(p_));
        const DistanceLaw& law = *serving_;
        const double db = 2.0 / p_.alpha_b;
        const double dd = 2.0 / p_.alpha_d;
        auto mb = [&](double r) { return std::pow(cu_tx_power_mw(r, p_), db) * law.pdf(r); };
        auto md = [&](double r) { return std::pow(cu_tx_power_mw(r, p_), dd) * law.pdf(r); };
        power_moment_b_ = integrate(mb, 0.0, t_, 0.0, 1e-10, spec_.max_subdivisions).value;
        power_moment_d_ = integrate(md, 0.0, t_, 0.0, 1e-10, spec_.max_subdivisions).value;

        std::vector<double> edges{0.0};
        for (double f : {1.0 / 64, 1.0 / 16, 1.0 / 4, 1.0 / 2, 5.0 / 8, 3.0 / 4, 7.0 / 8})
            edges.push_back(f * t_);
        edges.push_back(t_);
        if (p_.p_max) {
            const double r_cap = std::pow(*p_.p_max * std::pow(p_.gain_b, p_.epsilon) / p_.p0, 1.0 / (p_.alpha_b * p_.epsilon));
            if (r_cap > 0.0 && r_cap < t_)
                edges.push_back(r_cap);
        }
        std::sort(edges.begin(), edges.end());
        using rule = boost::math::quadrature::gauss<double, 20>;
        const auto& x = rule::abscissa();
        const auto& w = rule::weights();
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            const double c = 0.5 * (edges[i] + edges[i + 1]);
            const double h = 0.5 * (edges[i + 1] - edges[i]);
            for (std::size_t k = 0; k < x.size(); ++k) {
                for (double sign : {-1.0, 1.0}) {
                    if (x[k] == 0.0 && sign > 0.0)
                        continue;
                    const double r = c + sign * h * x[k];
                    power_nodes_.push_back({h * w[k] * law.pdf(r), cu_tx_power_mw(r, p_)});
                }
            }
        }
    }
    if (lambda_tx_ > 0.0)
        d2d_.emplace(d2d_distance_law(p_));
    table_ = std::make_shared<InterferenceTable>();
}

const DistanceLaw& AnalyticModel::serving_law() const
{
    if (!serving_)
        throw std::domain_error("AnalyticModel: cellular mode has zero probability");
    return *serving_;
}

const DistanceLaw& AnalyticModel::d2d_law() const
{
    if (!d2d_)
        throw std::domain_error("AnalyticModel: no active D2D transmitters");
    return *d2d_;
}

double AnalyticModel::cellular_signal(double r0) const
{
    return cu_tx_power_mw(r0, p_) * p_.gain_b * std::pow(r0, -p_.alpha_b);
}

double AnalyticModel::d2d_signal(double r0) const
{
    return p_.p_d * p_.gain_d * std::pow(r0, -p_.alpha_d);
}

double AnalyticModel::cu_exclusion_radius(double r0) const
{
    switch (cfg_.cu_exclusion) {
    case CuExclusion::cell_radius: return t_;
    case CuExclusion::serving: return r0;
    case CuExclusion::none: return 0.0;
    }
    return t_;
}

cd AnalyticModel::interference_exponent(cd v, double lower) const
{
    const double ab = p_.alpha_b;
    cd psi = 0.0;
    if (lower == 0.0) {
        const double db = 2.0 / ab;
        psi -= 2.0 * kPi * p_.lambda_b * moment_b_ * 0.5 * std::tgamma(1.0 - db) * cpow(v * p_.gain_b, db) *
               power_moment_b_;
    } else {
        cd sum = 0.0;
        for (const PowerNode& node : power_nodes_)
            sum += node.weight * shot_noise_laplace(v * (node.power * p_.gain_b), lower, ab);
        psi -= 2.0 * kPi * p_.lambda_b * moment_b_ * sum;
    }
    if (lambda_tx_ > 0.0)
        psi -= 2.0 * kPi * lambda_tx_ * moment_b_ * shot_noise_laplace(v * (p_.p_d * p_.gain_b), t_, ab);
    return psi;
}

cd AnalyticModel::cellular_exponent(cd s, double r0) const
{
    return interference_exponent(s / cellular_signal(r0), cu_exclusion_radius(r0));
}

cd AnalyticModel::cellular_interference(cd s, double r0, bool adaptive) const
{
    const double S = cellular_signal(r0);
    const double lower = cu_exclusion_radius(r0);
    const double scale = 2.0 * kPi * p_.lambda_b * moment_b_;
    const cd u = s * (p_.gain_b / S);
    if (adaptive) {
        const DistanceLaw& law = serving_law();
        auto integrand = [&](double r) {
            return law.pdf(r) * shot_noise_laplace(u * cu_tx_power_mw(r, p_), lower, p_.alpha_b);
        };
        return scale * integrate(integrand, 0.0, t_, 1e-14, 1e-12, spec_.max_subdivisions).value;
    }
    cd sum = 0.0;
    for (const PowerNode& node : power_nodes_)
        sum += node.weight * shot_noise_laplace(u * node.power, lower, p_.alpha_b);
    return scale * sum;
}

struct AnalyticModel::InterferenceTable {
    std::once_flag once;
    double log_lo = 0.0;
    double log_hi = 0.0;
    double step = 0.0;
    bool bounded_above = true;
    std::vector<double> cdf;
    std::vector<double> slope;  // dF / d ln x
};

double AnalyticModel::interference_cdf(double x) const
{
    if (!(x > 0.0))
        return 0.0;
    const double lower = cu_exclusion_radius(0.0);
    auto laplace = [this, lower](cd v) { return std::exp(interference_exponent(v, lower)); };
    InterferenceTable& tab = *table_;
    std::call_once(tab.once, [&]() {
        constexpr double kTail = 1e-12;
        constexpr int kPerDecade = 50;
        const double x0 = std::max(cu_tx_power_mw(t_, p_), p_.p_d) * p_.gain_b * std::pow(t_, -p_.alpha_b);
        double lo = x0;
        for (int i = 0; i < 60 && euler_cdf_density(laplace, lo).first > kTail; ++i)
            lo /= 10.0;
        double hi = x0;
        int up = 0;
        for (; up < 40 && euler_cdf_density(laplace, hi).first < 1.0 - kTail; ++up)
            hi *= 10.0;
        tab.bounded_above = up < 40;
        tab.log_lo = std::log(lo);
        tab.log_hi = std::log(hi);
        const auto n = static_cast<std::size_t>(std::ceil((tab.log_hi - tab.log_lo) / std::log(10.0) * kPerDecade)) + 1;
        tab.step = (tab.log_hi - tab.log_lo) / static_cast<double>(n - 1);
        tab.cdf.resize(n);
        tab.slope.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto [F, g] = euler_cdf_density(laplace, std::exp(tab.log_lo + tab.step * static_cast<double>(i)));
            tab.cdf[i] = F;
            tab.slope[i] = g;
        }
    });
    const double lx = std::log(x);
    if (lx <= tab.log_lo)
        return 0.0;
    if (lx >= tab.log_hi) {
        if (tab.bounded_above)
            return 1.0;
        return std::clamp(euler_cdf_density(laplace, x).first, 0.0, 1.0);
    }
    const double pos = (lx - tab.log_lo) / tab.step;
    const auto i = std::min(static_cast<std::size_t>(pos), tab.cdf.size() - 2);
    const double u = pos - static_cast<double>(i);
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double F = (2 * u3 - 3 * u2 + 1) * tab.cdf[i] + (u3 - 2 * u2 + u) * tab.step * tab.slope[i] +
                     (-2 * u3 + 3 * u2) * tab.cdf[i + 1] + (u3 - u2) * tab.step * tab.slope[i + 1];
    return std::clamp(F, 0.0, 1.0);
}

cd AnalyticModel::d2d_exponent(cd s, double r0) const
{
    const double S = d2d_signal(r0);
    cd psi = 0.0;
    if (serving_) {
        const double dd = 2.0 / p_.alpha_d;
        psi -= 2.0 * kPi * p_.lambda_b * moment_d_ * 0.5 * std::tgamma(1.0 - dd) * cpow(s * p_.gain_d / S, dd) *
               power_moment_d_;
    }
    if (lambda_tx_ > 0.0)
        psi -= 2.0 * kPi * lambda_tx_ * moment_dx_ * shot_noise_laplace(s * (p_.p_d * p_.gain_d / S), r0, alpha_dx_);
    return psi;
}

CharacteristicFn AnalyticModel::cellular_charfn(double r0) const
{
    if (!(r0 > 0.0 && r0 <= t_))
        throw std::invalid_argument("cellular_charfn: r0 must lie in (0, t]");
    serving_law();
    const double shift = p_.noise_bs / cellular_signal(r0);
    auto cf = CharacteristicFn::from_laplace(shift, [this, r0](cd s) { return std::exp(cellular_exponent(s, r0)); });
    cf.mode = Mode::cellular;
    cf.r0 = r0;
    return cf;
}

CharacteristicFn AnalyticModel::d2d_charfn(double r0) const
{
    if (!(r0 > 0.0) || !std::isfinite(r0))
        throw std::invalid_argument("d2d_charfn: r0 must be > 0");
    const double shift = p_.noise_ue / d2d_signal(r0);
    auto cf = CharacteristicFn::from_laplace(shift, [this, r0](cd s) { return std::exp(d2d_exponent(s, r0)); });
    cf.mode = Mode::d2d;
    cf.r0 = r0;
    return cf;
}

std::vector<double> AnalyticModel::coverage(Mode mode, std::span<const double> thresholds) const
{
    for (double T : thresholds)
        if (!(T > 0.0))
            throw std::invalid_argument("coverage: thresholds must be > 0");
    const std::size_t n = thresholds.size();
    if (n == 0)
        return {};
    const DistanceLaw& law = mode == Mode::cellular ? serving_law() : d2d_law();

    const bool tabulated = mode == Mode::cellular && cfg_.cu_exclusion != CuExclusion::serving;
    auto integrand = [&](double r0) {
        std::valarray<double> v(0.0, n);
        const double w = law.pdf(r0);
        if (w <= 0.0 || r0 <= 0.0)
            return v;
        if (tabulated) {
            // The interference law does not depend on r0: Pr[I < S/T - noise].
            const double S = cellular_signal(r0);
            for (std::size_t j = 0; j < n; ++j)
                v[j] = interference_cdf(S / thresholds[j] - p_.noise_bs) * w;
            return v;
        }
        const CharacteristicFn cf = mode == Mode::cellular ? cellular_charfn(r0) : d2d_charfn(r0);
        const auto probs = invert_ccdf_many(cf, thresholds, spec_);
        for (std::size_t j = 0; j < n; ++j)
            v[j] = probs[j] * w;
        return v;
    };

    std::vector<double> bp{0.0};
    if (mode == Mode::cellular) {
        bp.push_back(t_);
    } else {
        const double hi = law.tail_cutoff();
        const double mu = kPi * lambda_tx_ * moment_d_;
        for (double x : {t_, 1.0 / std::sqrt(mu), 2.0 * t_})
            if (x > 0.0 && x < hi)
                bp.push_back(x);
        std::sort(bp.begin(), bp.end());
        bp.push_back(hi);
    }
    const auto res = integrate(integrand, std::span<const double>(bp), spec_.abs_tol, spec_.rel_tol,
                               spec_.max_subdivisions);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double v = res.value[j];
        if (v < -1e-3 || v > 1.0 + 1e-3)
            throw std::runtime_error("coverage: probability outside [0,1] beyond tolerance");
        out[j] = std::clamp(v, 0.0, 1.0);
    }
    return out;
}

double AnalyticModel::coverage(Mode mode, double threshold) const
{
    const double t[1] = {threshold};
    return coverage(mode, std::span<const double>(t, 1)).front();
}

CharacteristicFn cellular_charfn(double r0, const NetworkConfig& cfg)
{
    // The returned function keeps its model alive.
    auto model = std::make_shared<AnalyticModel>(cfg);
    const CharacteristicFn inner = model->cellular_charfn(r0);
    auto cf = CharacteristicFn::from_laplace(inner.shift(), [model, inner](cd s) { return inner.residual_laplace(s); });
    cf.mode = inner.mode;
    cf.r0 = inner.r0;
    return cf;
}

CharacteristicFn d2d_charfn(double r0, const NetworkConfig& cfg)
{
    auto model = std::make_shared<AnalyticModel>(cfg);
    const CharacteristicFn inner = model->d2d_charfn(r0);
    auto cf = CharacteristicFn::from_laplace(inner.shift(), [model, inner](cd s) { return inner.residual_laplace(s); });
    cf.mode = inner.mode;
    cf.r0 = inner.r0;
    return cf;
}

double coverage_cellular(double threshold, const NetworkConfig& cfg, const QuadratureSpec& spec)
{
    return AnalyticModel(cfg, spec).coverage(Mode::cellular, threshold);
}

double coverage_d2d(double threshold, const NetworkConfig& cfg, const QuadratureSpec& spec)
{
    return AnalyticModel(cfg, spec).coverage(Mode::d2d, threshold);
}

}  // namespace d2d

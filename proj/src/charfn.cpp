#include "d2dcov/charfn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <valarray>
#include <vector>

namespace d2d {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kClampSlack = 1e-3;
constexpr std::size_t kMaxPanels = 200000;

// Euler-summed Bromwich inversion (Abate-Whitt). Nodes a + i pi k with a = M ln10 / 3
// bound the aliasing error by about 10^(-2M/3). Terms are summed directly up to n and
// the last M + 1 partial sums are binomially averaged; n doubles until two successive
// estimates agree, since slowly decaying transforms defeat a fixed short series.
constexpr int kEulerM = 16;
constexpr std::size_t kEulerStart = 16;
constexpr std::size_t kEulerMaxTerms = 4096;
constexpr double kEulerTol = 1e-10;

struct EulerWeights {
    std::array<double, kEulerM + 1> binom{};
    double a = 0.0;
    double amp = 0.0;

    EulerWeights()
    {
        const double scale = std::ldexp(1.0, -kEulerM);
        double c = 1.0;
        for (int j = 0; j <= kEulerM; ++j) {
            binom[j] = c * scale;
            c = c * (kEulerM - j) / (j + 1);
        }
        a = kEulerM * std::log(10.0) / 3.0;
        amp = std::exp(a);
    }
};

const EulerWeights& euler_weights()
{
    static const EulerWeights w;
    return w;
}

// Returns {Pr[Z <= y], y * density(y)} from E[exp(-s Z)].
template <class L>
std::pair<double, double> euler_invert(L&& laplace, double y)
{
    const EulerWeights& w = euler_weights();
    std::vector<double> cdf_sums;
    std::vector<double> dens_sums;
    double cs = 0.0;
    double ds = 0.0;
    auto extend = [&](std::size_t upto) {
        for (std::size_t k = cdf_sums.size(); k <= upto; ++k) {
            const cd beta(w.a, kPi * static_cast<double>(k));
            const cd v = laplace(beta / y);
            const double sign = (k % 2) ? -1.0 : 1.0;
            const double weight = k == 0 ? 0.5 : 1.0;
            cs += sign * weight * (v / beta).real();
            ds += sign * weight * v.real();
            cdf_sums.push_back(cs);
            dens_sums.push_back(ds);
        }
    };
    auto estimate = [&](std::size_t n) {
        extend(n + kEulerM);
        double c = 0.0;
        double d = 0.0;
        for (int j = 0; j <= kEulerM; ++j) {
            c += w.binom[j] * cdf_sums[n + j];
            d += w.binom[j] * dens_sums[n + j];
        }
        return std::pair<double, double>(w.amp * c, w.amp * d);
    };
    std::size_t n = kEulerStart;
    auto prev = estimate(n);
    while (true) {
        n *= 2;
        const auto next = estimate(n);
        if (std::abs(next.first - prev.first) <= kEulerTol || n >= kEulerMaxTerms)
            return next;
        prev = next;
    }
}

double euler_cdf(const CharacteristicFn& cf, double y)
{
    return euler_invert([&cf](cd s) { return cf.residual_laplace(s); }, y).first;
}

}  // namespace

std::pair<double, double> euler_cdf_density(const std::function<std::complex<double>(std::complex<double>)>& laplace,
                                            double y)
{
    if (!(y > 0.0) || !std::isfinite(y))
        throw std::invalid_argument("euler_cdf_density: y must be finite and > 0");
    return euler_invert(laplace, y);
}

namespace {

double truncation_estimate(const CharacteristicFn& cf, double w, double ymin)
{
    // A nonnegative residual only needs the real part of its CF.
    const cd phi = cf.residual(w);
    const double mag = cf.nonnegative() ? std::abs(phi.real()) : std::abs(phi);
    return w * ymin >= 1.0 ? mag * 2.0 / (kPi * w * ymin) : mag;
}

std::vector<double> gil_pelaez(const CharacteristicFn& cf, const std::vector<double>& ys, const QuadratureSpec& spec)
{
    double ymax = 0.0;
    double ymin = std::numeric_limits<double>::infinity();
    for (double y : ys) {
        ymax = std::max(ymax, std::abs(y));
        ymin = std::min(ymin, std::abs(y));
    }
    const double target = spec.abs_tol / 10.0;
    double w_max = 0.0;
    double est = 0.0;
    for (int k = -3;; ++k) {
        const double w = std::min(std::pow(10.0, k), spec.omega_max);
        est = std::max({truncation_estimate(cf, w, ymin), truncation_estimate(cf, 2.0 * w, ymin),
                        truncation_estimate(cf, 5.0 * w, ymin)});
        if (est < target) {
            w_max = w;
            break;
        }
        if (w >= spec.omega_max)
            throw QuadratureError("invert_ccdf: truncation insufficient at omega_max", est, target);
    }

    std::vector<double> bp{0.0};
    for (double edge = 1e-3; edge < w_max; edge *= 10.0)
        bp.push_back(edge);
    bp.push_back(w_max);
    std::vector<double> mesh{0.0};
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double a = bp[i];
        const double b = bp[i + 1];
        const auto n = static_cast<std::size_t>(std::ceil((b - a) * ymax / (4.0 * kPi)));
        const std::size_t panels = std::max<std::size_t>(n, 1);
        if (mesh.size() + panels > kMaxPanels)
            throw QuadratureError("invert_ccdf: kernel oscillation exceeds panel budget", static_cast<double>(panels),
                                  static_cast<double>(kMaxPanels));
        for (std::size_t j = 1; j <= panels; ++j)
            mesh.push_back(a + (b - a) * static_cast<double>(j) / static_cast<double>(panels));
    }

    const std::size_t m = ys.size();
    auto integrand = [&](double w) {
        std::valarray<double> v(m);
        const cd phi = cf.residual(w);
        if (cf.nonnegative()) {
            // F(y) = (2/pi) int_0^inf Re phi(w) sin(w y) / w dw for Z >= 0.
            for (std::size_t j = 0; j < m; ++j)
                v[j] = 2.0 * phi.real() * std::sin(w * ys[j]) / w;
        } else {
            for (std::size_t j = 0; j < m; ++j)
                v[j] = (std::polar(1.0, w * ys[j]) * phi).imag() / w;
        }
        return v;
    };
    const int budget = std::max<int>(spec.max_subdivisions, static_cast<int>(4 * mesh.size()));
    auto res = integrate(integrand, std::span<const double>(mesh), spec.abs_tol * kPi, spec.rel_tol, budget);
    std::vector<double> out(m);
    for (std::size_t j = 0; j < m; ++j)
        out[j] = (cf.nonnegative() ? 0.0 : 0.5) + res.value[j] / kPi;
    return out;
}

}  // namespace

CharacteristicFn CharacteristicFn::from_eval(Eval eval, bool nonnegative)
{
    if (!eval)
        throw std::invalid_argument("CharacteristicFn: empty evaluator");
    CharacteristicFn cf;
    cf.eval_ = std::move(eval);
    cf.nonnegative_ = nonnegative;
    return cf;
}

CharacteristicFn CharacteristicFn::from_laplace(double shift, Laplace laplace)
{
    if (!laplace)
        throw std::invalid_argument("CharacteristicFn: empty Laplace transform");
    if (!std::isfinite(shift))
        throw std::invalid_argument("CharacteristicFn: shift must be finite");
    CharacteristicFn cf;
    cf.shift_ = shift;
    cf.laplace_ = std::move(laplace);
    cf.nonnegative_ = true;
    return cf;
}

CharacteristicFn CharacteristicFn::point_mass(double y)
{
    if (!std::isfinite(y))
        throw std::invalid_argument("CharacteristicFn: point mass location must be finite");
    CharacteristicFn cf;
    cf.shift_ = y;
    cf.degenerate_ = true;
    cf.nonnegative_ = true;
    return cf;
}

std::complex<double> CharacteristicFn::residual(double w) const
{
    if (degenerate_ || w == 0.0)
        return {1.0, 0.0};
    if (eval_)
        return eval_(w);
    if (w < 0.0)
        return std::conj(laplace_(cd(0.0, -w)));
    return laplace_(cd(0.0, w));
}

std::complex<double> CharacteristicFn::eval(double w) const
{
    return std::polar(1.0, -w * shift_) * residual(w);
}

std::complex<double> CharacteristicFn::residual_laplace(std::complex<double> s) const
{
    if (degenerate_)
        return {1.0, 0.0};
    if (!laplace_)
        throw std::logic_error("CharacteristicFn: no Laplace transform available");
    return laplace_(s);
}

std::vector<double> residual_cdf(const CharacteristicFn& cf, std::span<const double> ys, const QuadratureSpec& spec,
                                 Inversion method)
{
    spec.validate();
    std::vector<double> out(ys.size(), 0.0);
    std::vector<std::size_t> open;
    for (std::size_t j = 0; j < ys.size(); ++j) {
        const double y = ys[j];
        if (std::isnan(y))
            throw std::invalid_argument("residual_cdf: NaN evaluation point");
        if (cf.degenerate())
            out[j] = y > 0.0 ? 1.0 : (y < 0.0 ? 0.0 : 0.5);
        else if (cf.nonnegative() && y <= 0.0)
            out[j] = 0.0;
        else if (std::isinf(y))
            out[j] = y > 0.0 ? 1.0 : 0.0;
        else
            open.push_back(j);
    }
    if (open.empty())
        return out;

    if (method == Inversion::automatic)
        method = cf.has_laplace() ? Inversion::euler : Inversion::gil_pelaez;
    if (method == Inversion::euler) {
        if (!cf.has_laplace())
            throw std::invalid_argument("residual_cdf: euler inversion needs a Laplace transform");
        for (std::size_t j : open)
            out[j] = euler_cdf(cf, ys[j]);
    } else {
        // Truncation depends on the smallest |y| and the mesh on the largest, so each
        // decade of |y| gets its own integral.
        std::map<int, std::vector<std::size_t>> groups;
        for (std::size_t j : open) {
            const double a = std::abs(ys[j]);
            groups[a > 0.0 ? static_cast<int>(std::floor(std::log10(a))) : std::numeric_limits<int>::min()].push_back(j);
        }
        for (const auto& [decade, idx] : groups) {
            std::vector<double> sub;
            sub.reserve(idx.size());
            for (std::size_t j : idx)
                sub.push_back(ys[j]);
            const auto vals = gil_pelaez(cf, sub, spec);
            for (std::size_t i = 0; i < idx.size(); ++i)
                out[idx[i]] = vals[i];
        }
    }

    for (std::size_t j : open) {
        if (out[j] < -kClampSlack || out[j] > 1.0 + kClampSlack) {
            std::ostringstream os;
            os << "residual_cdf: value " << out[j] << " at y = " << ys[j] << " outside [0,1] beyond tolerance";
            throw std::runtime_error(os.str());
        }
        out[j] = std::clamp(out[j], 0.0, 1.0);
    }
    return out;
}

std::vector<double> invert_ccdf_many(const CharacteristicFn& cf, std::span<const double> thresholds,
                                     const QuadratureSpec& spec, Inversion method)
{
    std::vector<double> ys;
    ys.reserve(thresholds.size());
    for (double T : thresholds) {
        if (!(T > 0.0))
            throw std::invalid_argument("invert_ccdf: threshold must be > 0");
        ys.push_back(1.0 / T - cf.shift());
    }
    return residual_cdf(cf, ys, spec, method);
}

double invert_ccdf(const CharacteristicFn& cf, double threshold, const QuadratureSpec& spec, Inversion method)
{
    const double t[1] = {threshold};
    return invert_ccdf_many(cf, std::span<const double>(t, 1), spec, method).front();
}

}  // namespace d2d

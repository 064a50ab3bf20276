#include "d2dcov/montecarlo.hpp"

#include "d2dcov/propagation.hpp"
#include "d2dcov/units.hpp"
#include "hashing.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace d2d {

namespace {

using detail::hash_words;
using detail::normal_from_hash;
using detail::SplitMix;

constexpr double kPi = std::numbers::pi;
constexpr double kLn10Over10 = std::numbers::ln10 / 10.0;
constexpr double kRingWidth = 250.0;

enum Stream : std::uint64_t {
    kBsPoints = 1,
    kUePoints = 2,
    kShadowUeBs = 3,
    kShadowUeUe = 4,
    kSchedule = 5,
    kRole = 6,
    kTypicalUe = 7,
    kRealization = 8,
};

void sample_rings(double lambda_m2, double window, std::uint64_t seed, std::uint64_t stream, std::vector<Point>& pts,
                  std::vector<std::uint64_t>& ids)
{
    if (!(lambda_m2 > 0.0) || !(window > 0.0))
        return;
    const auto rings = static_cast<std::uint64_t>(std::ceil(window / kRingWidth));
    for (std::uint64_t k = 0; k < rings; ++k) {
        const double r1 = kRingWidth * static_cast<double>(k);
        const double r2 = r1 + kRingWidth;
        const double a1 = r1 * r1;
        const double a2 = r2 * r2;
        SplitMix rng(hash_words({seed, stream, k}));
        std::poisson_distribution<long long> count(lambda_m2 * kPi * (a2 - a1));
        const long long n = count(rng);
        for (long long j = 0; j < n; ++j) {
            const double r = std::sqrt(a1 + rng.uniform() * (a2 - a1));
            const double th = 2.0 * kPi * rng.uniform();
            if (r > window)
                continue;
            pts.push_back({r * std::cos(th), r * std::sin(th)});
            ids.push_back((k << 32) | static_cast<std::uint64_t>(j));
        }
    }
}

double dist2(const Point& a, const Point& b)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::max(dx * dx + dy * dy, 1e-12);
}

// log of the equivalent distance H^(-1/alpha) r for a dB shadowing deviate.
double log_equiv(double d2, double xi_db, double alpha)
{
    return 0.5 * std::log(d2) + kLn10Over10 * xi_db / alpha;
}

}  // namespace

Geometry default_geometry(const NetworkConfig& cfg, double guard)
{
    if (!(guard > 0.0))
        throw std::invalid_argument("default_geometry: guard must be > 0");
    const double isd = 1.0 / std::sqrt(per_km2_to_per_m2(cfg.lambda_b));
    return {guard + 5.0 * isd, guard};
}

void check_geometry(const NetworkConfig& cfg, const Geometry& g)
{
    if (!(g.guard > 0.0))
        throw std::invalid_argument("geometry: guard radius must be > 0");
    const double isd = 1.0 / std::sqrt(per_km2_to_per_m2(cfg.lambda_b));
    if (!(g.window >= g.guard + isd))
        throw std::invalid_argument("geometry: window must be at least guard + one inter-site distance (" +
                                    std::to_string(g.guard + isd) + " m)");
}

std::vector<std::string> simulation_warnings(const NetworkConfig& cfg)
{
    std::vector<std::string> out;
    if (cfg.lambda_u < 10.0 * cfg.lambda_b)
        out.push_back("lambda_u < 10 lambda_b: fully loaded BS assumption is weak");
    return out;
}

double Deployment::bs_shadow_db(std::size_t u, std::size_t b) const
{
    if (sigma_b_db == 0.0)
        return 0.0;
    return sigma_b_db * normal_from_hash(detail::link_hash(hash_words({seed, kShadowUeBs, ue_id[u]}), bs_id[b]));
}

double Deployment::ue_shadow_db(std::size_t a, std::size_t b) const
{
    if (sigma_d_db == 0.0)
        return 0.0;
    const std::uint64_t lo = std::min(ue_id[a], ue_id[b]);
    const std::uint64_t hi = std::max(ue_id[a], ue_id[b]);
    return sigma_d_db * normal_from_hash(detail::link_hash(hash_words({seed, kShadowUeUe, lo}), hi));
}

bool Deployment::in_guard(const Point& p) const
{
    return p.x * p.x + p.y * p.y <= geometry.guard * geometry.guard;
}

Deployment sample_deployment(const NetworkConfig& cfg, std::uint64_t seed, const Geometry& geometry)
{
    cfg.validate();
    check_geometry(cfg, geometry);
    Deployment dep;
    dep.seed = seed;
    dep.geometry = geometry;
    dep.sigma_b_db = cfg.sigma_b_db;
    dep.sigma_d_db = cfg.sigma_d_db;
    sample_rings(per_km2_to_per_m2(cfg.lambda_b), geometry.window, seed, kBsPoints, dep.bs, dep.bs_id);
    sample_rings(per_km2_to_per_m2(cfg.lambda_u), geometry.window, seed, kUePoints, dep.ue, dep.ue_id);
    return dep;
}

Deployment assign_modes(Deployment dep, const NetworkConfig& cfg)
{
    const LinearParams p = linearize(cfg);
    const std::size_t nu = dep.ue.size();
    const std::size_t nb = dep.bs.size();
    dep.mode.assign(nu, Mode::d2d);
    dep.serving_bs.assign(nu, -1);
    dep.max_rss_mw.assign(nu, 0.0);
    dep.serving_equiv.assign(nu, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < nu; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int arg = -1;
        const std::uint64_t prefix = hash_words({dep.seed, kShadowUeBs, dep.ue_id[i]});
        for (std::size_t b = 0; b < nb; ++b) {
            const double xi = dep.sigma_b_db == 0.0
                                  ? 0.0
                                  : dep.sigma_b_db * normal_from_hash(detail::link_hash(prefix, dep.bs_id[b]));
            const double le = log_equiv(dist2(dep.ue[i], dep.bs[b]), xi, p.alpha_b);
            if (le < best) {
                best = le;
                arg = static_cast<int>(b);
            }
        }
        if (arg < 0)
            continue;
        dep.serving_bs[i] = arg;
        dep.serving_equiv[i] = std::exp(best);
        dep.max_rss_mw[i] = p.p_b * p.gain_b * std::exp(-p.alpha_b * best);
        dep.mode[i] = dep.max_rss_mw[i] > p.beta ? Mode::cellular : Mode::d2d;
    }
    dep.modes_assigned = true;
    return dep;
}

std::size_t mode_rule_violations(const Deployment& dep, const NetworkConfig& cfg)
{
    if (!dep.modes_assigned)
        throw std::logic_error("mode_rule_violations: modes not assigned");
    const LinearParams p = linearize(cfg);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < dep.ue.size(); ++i) {
        double rss = 0.0;
        for (std::size_t b = 0; b < dep.bs.size(); ++b) {
            const double H = shadow_linear(dep.bs_shadow_db(i, b));
            rss = std::max(rss, p.p_b * p.gain_b * H * std::pow(dist2(dep.ue[i], dep.bs[b]), -0.5 * p.alpha_b));
        }
        const Mode expect = rss > p.beta ? Mode::cellular : Mode::d2d;
        if (expect != dep.mode[i])
            ++bad;
    }
    return bad;
}

Deployment schedule_and_pair(Deployment dep, const NetworkConfig& cfg, std::uint64_t seed)
{
    if (!dep.modes_assigned)
        throw std::logic_error("schedule_and_pair: modes not assigned");
    const LinearParams p = linearize(cfg);
    const std::size_t nu = dep.ue.size();
    const std::size_t nb = dep.bs.size();

    dep.scheduled_cu.assign(nb, -1);
    std::vector<std::uint64_t> best_key(nb, std::numeric_limits<std::uint64_t>::max());
    dep.role.assign(nu, D2dRole::none);
    dep.tx_power_mw.assign(nu, 0.0);
    for (std::size_t i = 0; i < nu; ++i) {
        if (dep.mode[i] == Mode::cellular) {
            const auto b = static_cast<std::size_t>(dep.serving_bs[i]);
            const std::uint64_t key = hash_words({seed, kSchedule, dep.ue_id[i]});
            if (key < best_key[b]) {
                best_key[b] = key;
                dep.scheduled_cu[b] = static_cast<int>(i);
            }
        } else {
            const double u = detail::unit(hash_words({seed, kRole, dep.ue_id[i]}));
            dep.role[i] = u < p.activity ? D2dRole::tx : D2dRole::rx;
        }
    }
    for (std::size_t b = 0; b < nb; ++b) {
        const int cu = dep.scheduled_cu[b];
        if (cu >= 0)
            dep.tx_power_mw[cu] = cu_tx_power_mw(dep.serving_equiv[cu], p);
    }
    std::vector<std::size_t> txs;
    for (std::size_t i = 0; i < nu; ++i) {
        if (dep.role[i] == D2dRole::tx) {
            dep.tx_power_mw[i] = p.p_d;
            txs.push_back(i);
        }
    }

    dep.partner.assign(nu, -1);
    dep.pair_equiv.assign(nu, std::numeric_limits<double>::infinity());
    dep.dropped_rx = 0;
    for (std::size_t i = 0; i < nu; ++i) {
        if (dep.role[i] != D2dRole::rx || !dep.in_guard(dep.ue[i]))
            continue;
        double best = std::numeric_limits<double>::infinity();
        int arg = -1;
        for (std::size_t k : txs) {
            const double le = log_equiv(dist2(dep.ue[i], dep.ue[k]), dep.ue_shadow_db(i, k), p.alpha_d);
            if (le < best) {
                best = le;
                arg = static_cast<int>(k);
            }
        }
        if (arg < 0) {
            ++dep.dropped_rx;
            continue;
        }
        dep.partner[i] = arg;
        dep.pair_equiv[i] = std::exp(best);
    }
    dep.scheduled = true;
    return dep;
}

std::vector<SinrSample> measure_sinr(const Deployment& dep, const NetworkConfig& cfg)
{
    if (!dep.scheduled)
        throw std::logic_error("measure_sinr: deployment not scheduled");
    const LinearParams p = linearize(cfg);
    std::vector<SinrSample> out;
    auto norm2 = [](const Point& a) { return a.x * a.x + a.y * a.y; };

    // Typical BS: nearest to the centre with a scheduled CU.
    int b0 = -1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < dep.bs.size(); ++b) {
        if (dep.scheduled_cu[b] < 0 || !dep.in_guard(dep.bs[b]))
            continue;
        if (norm2(dep.bs[b]) < best) {
            best = norm2(dep.bs[b]);
            b0 = static_cast<int>(b);
        }
    }
    if (b0 >= 0) {
        const auto b = static_cast<std::size_t>(b0);
        const auto cu = static_cast<std::size_t>(dep.scheduled_cu[b]);
        SinrSample s;
        s.mode = Mode::cellular;
        s.serving_distance = dep.serving_equiv[cu];
        s.signal_mw = dep.tx_power_mw[cu] * p.gain_b * std::exp(-p.alpha_b * std::log(dep.serving_equiv[cu]));
        for (std::size_t j = 0; j < dep.ue.size(); ++j) {
            if (j == cu || dep.tx_power_mw[j] <= 0.0)
                continue;
            const double le = log_equiv(dist2(dep.ue[j], dep.bs[b]), dep.bs_shadow_db(j, b), p.alpha_b);
            const double rx = dep.tx_power_mw[j] * p.gain_b * std::exp(-p.alpha_b * le);
            if (dep.mode[j] == Mode::cellular)
                s.interference_cellular_mw += rx;
            else
                s.interference_d2d_mw += rx;
        }
        s.noise_mw = p.noise_bs;
        s.sinr = s.signal_mw / (s.interference_cellular_mw + s.interference_d2d_mw + s.noise_mw);
        out.push_back(s);
    }

    // Typical D2D receiver: nearest paired RX to the centre.
    int r0 = -1;
    best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dep.ue.size(); ++i) {
        if (dep.partner[i] < 0)
            continue;
        if (norm2(dep.ue[i]) < best) {
            best = norm2(dep.ue[i]);
            r0 = static_cast<int>(i);
        }
    }
    if (r0 >= 0) {
        const auto rx = static_cast<std::size_t>(r0);
        const auto tx = static_cast<std::size_t>(dep.partner[rx]);
        SinrSample s;
        s.mode = Mode::d2d;
        s.serving_distance = dep.pair_equiv[rx];
        s.signal_mw = p.p_d * p.gain_d * std::exp(-p.alpha_d * std::log(dep.pair_equiv[rx]));
        for (std::size_t j = 0; j < dep.ue.size(); ++j) {
            if (j == tx || j == rx || dep.tx_power_mw[j] <= 0.0)
                continue;
            const double le = log_equiv(dist2(dep.ue[j], dep.ue[rx]), dep.ue_shadow_db(j, rx), p.alpha_d);
            const double v = dep.tx_power_mw[j] * p.gain_d * std::exp(-p.alpha_d * le);
            if (dep.mode[j] == Mode::cellular)
                s.interference_cellular_mw += v;
            else
                s.interference_d2d_mw += v;
        }
        s.noise_mw = p.noise_ue;
        s.sinr = s.signal_mw / (s.interference_cellular_mw + s.interference_d2d_mw + s.noise_mw);
        out.push_back(s);
    }
    return out;
}

std::uint64_t realization_seed(std::uint64_t master_seed, std::size_t i)
{
    return hash_words({master_seed, kRealization, static_cast<std::uint64_t>(i)});
}

namespace {

struct RealizationOut {
    std::optional<SinrSample> cellular;
    std::optional<SinrSample> d2d;
    std::size_t guard_ues = 0;
    std::size_t guard_cellular = 0;
    std::size_t guard_tx = 0;
    std::size_t dropped_rx = 0;
    double power_sum = 0.0;
    std::vector<double> pairs;
};

CoverageCurve empirical_curve(Mode mode, const std::vector<double>& sinrs, const std::vector<double>& thresholds_db)
{
    CoverageCurve c;
    c.mode = mode;
    c.method = Method::montecarlo;
    c.thresholds_db = thresholds_db;
    const std::size_t n = sinrs.size();
    for (double db : thresholds_db) {
        const double T = db_to_linear(db);
        const auto k = static_cast<std::size_t>(std::count_if(sinrs.begin(), sinrs.end(), [T](double s) { return s > T; }));
        if (n == 0) {
            c.probabilities.push_back(std::numeric_limits<double>::quiet_NaN());
            c.ci_halfwidth.push_back(std::numeric_limits<double>::quiet_NaN());
        } else {
            c.probabilities.push_back(static_cast<double>(k) / static_cast<double>(n));
            c.ci_halfwidth.push_back(wilson_halfwidth(k, n));
        }
    }
    return c;
}

}  // namespace

CampaignResult run_campaign(const NetworkConfig& cfg, std::uint64_t master_seed, std::size_t n_realizations,
                            const CampaignOptions& options)
{
    cfg.validate();
    if (n_realizations < 1)
        throw std::invalid_argument("run_campaign: need at least one realization");
    const Geometry geometry = options.geometry ? *options.geometry : default_geometry(cfg);
    check_geometry(cfg, geometry);
    const LinearParams p = linearize(cfg);

    std::vector<RealizationOut> outs(n_realizations);
    detail::parallel_for(n_realizations, options.workers, [&](std::size_t i) {
        const std::uint64_t seed = realization_seed(master_seed, i);
        Deployment dep = sample_deployment(cfg, seed, geometry);
        dep = assign_modes(std::move(dep), cfg);
        dep = schedule_and_pair(std::move(dep), cfg, seed);
        RealizationOut& o = outs[i];
        for (const SinrSample& s : measure_sinr(dep, cfg)) {
            if (s.mode == Mode::cellular)
                o.cellular = s;
            else
                o.d2d = s;
        }
        for (std::size_t u = 0; u < dep.ue.size(); ++u) {
            if (!dep.in_guard(dep.ue[u]))
                continue;
            ++o.guard_ues;
            if (dep.mode[u] == Mode::cellular) {
                ++o.guard_cellular;
                o.power_sum += cu_tx_power_mw(dep.serving_equiv[u], p);
            } else if (dep.role[u] == D2dRole::tx) {
                ++o.guard_tx;
            }
            if (dep.partner[u] >= 0)
                o.pairs.push_back(dep.pair_equiv[u]);
        }
        o.dropped_rx = dep.dropped_rx;
    });

    CampaignResult r;
    r.geometry = geometry;
    r.realizations = n_realizations;
    r.warnings = simulation_warnings(cfg);
    std::vector<double> cell_sinr;
    std::vector<double> d2d_sinr;
    std::vector<double> power_sums;
    std::size_t guard_tx = 0;
    for (const RealizationOut& o : outs) {
        if (o.cellular) {
            cell_sinr.push_back(o.cellular->sinr);
            if (options.keep_samples)
                r.samples.push_back(*o.cellular);
        } else {
            ++r.skipped_cellular;
        }
        if (o.d2d) {
            d2d_sinr.push_back(o.d2d->sinr);
            if (options.keep_samples)
                r.samples.push_back(*o.d2d);
        } else {
            ++r.skipped_d2d;
        }
        r.guard_ues += o.guard_ues;
        r.guard_cellular_ues += o.guard_cellular;
        guard_tx += o.guard_tx;
        r.dropped_rx += o.dropped_rx;
        power_sums.push_back(o.power_sum);
        if (options.keep_samples)
            r.pair_distances.insert(r.pair_distances.end(), o.pairs.begin(), o.pairs.end());
    }
    r.cellular_samples = cell_sinr.size();
    r.d2d_samples = d2d_sinr.size();

    const std::vector<double> thresholds =
        options.thresholds_db.empty() ? threshold_range_db(-10.0, 20.0, 2.0) : options.thresholds_db;
    r.cellular = empirical_curve(Mode::cellular, cell_sinr, thresholds);
    r.d2d = empirical_curve(Mode::d2d, d2d_sinr, thresholds);

    const double q_hat =
        r.guard_ues ? static_cast<double>(r.guard_cellular_ues) / static_cast<double>(r.guard_ues) : 0.0;
    r.mode_split = {q_hat, q_hat * p.lambda_u, (1.0 - q_hat) * p.lambda_u};
    r.mean_cu_power_mw =
        r.guard_cellular_ues ? detail::pairwise_sum(power_sums) / static_cast<double>(r.guard_cellular_ues) : 0.0;
    const double guard_area_km2 = kPi * geometry.guard * geometry.guard * 1e-6;
    r.d2d_link_density_km2 = static_cast<double>(guard_tx) / (guard_area_km2 * static_cast<double>(n_realizations));

    std::vector<double> grid;
    for (double db : ase_threshold_grid_db())
        if (db >= options.gamma0_db)
            grid.push_back(db);
    if (grid.empty() || grid.front() > options.gamma0_db)
        grid.insert(grid.begin(), options.gamma0_db);
    const double g0 = db_to_linear(options.gamma0_db);
    AseEstimate ec;
    AseEstimate ed;
    if (!cell_sinr.empty())
        ec = ase_from_coverage(empirical_curve(Mode::cellular, cell_sinr, grid), cfg.lambda_b, g0);
    if (!d2d_sinr.empty())
        ed = ase_from_coverage(empirical_curve(Mode::d2d, d2d_sinr, grid), r.d2d_link_density_km2, g0);
    r.ase = combine_ase(ec, ed, options.gamma0_db, cfg.lambda_b, r.d2d_link_density_km2);
    return r;
}

double typical_ue_window(const NetworkConfig& cfg)
{
    const LinearParams p = linearize(cfg);
    const double t = cell_radius(p);
    const double isd = 1.0 / std::sqrt(p.lambda_b);
    return std::max(t * std::exp(6.0 * p.sigma_b / p.alpha_b), t + isd);
}

std::vector<TypicalUe> sample_typical_ues(const NetworkConfig& cfg, std::uint64_t seed, std::size_t n, int workers)
{
    cfg.validate();
    const LinearParams p = linearize(cfg);
    const double W = typical_ue_window(cfg);
    const double mean = p.lambda_b * kPi * W * W;
    std::vector<TypicalUe> out(n);
    detail::parallel_for(n, workers, [&](std::size_t i) {
        SplitMix rng(hash_words({seed, kTypicalUe, static_cast<std::uint64_t>(i)}));
        std::poisson_distribution<long long> count(mean);
        const long long nb = count(rng);
        double best = std::numeric_limits<double>::infinity();
        for (long long b = 0; b < nb; ++b) {
            const double r = W * std::sqrt(rng.uniform());
            const double xi = cfg.sigma_b_db * rng.normal();
            best = std::min(best, log_equiv(std::max(r * r, 1e-12), xi, p.alpha_b));
        }
        TypicalUe& u = out[i];
        if (nb == 0)
            return;
        u.serving_equiv = std::exp(best);
        u.max_rss_mw = p.p_b * p.gain_b * std::exp(-p.alpha_b * best);
        u.cellular = u.max_rss_mw > p.beta;
        if (u.cellular)
            u.cu_power_mw = cu_tx_power_mw(u.serving_equiv, p);
    });
    return out;
}

}  // namespace d2d

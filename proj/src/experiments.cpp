#include "d2dcov/experiments.hpp"

#include "d2dcov/acceptance.hpp"
#include "d2dcov/coverage.hpp"
#include "d2dcov/equivalence.hpp"
#include "d2dcov/format.hpp"
#include "d2dcov/metrics.hpp"
#include "d2dcov/montecarlo.hpp"
#include "d2dcov/propagation.hpp"
#include "d2dcov/units.hpp"
#include "d2dcov/version.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace d2d {

namespace {

const std::vector<std::string> kIds{"mode-prob", "txpower-sweep", "coverage", "ase-sweep", "beta-sweep", "validate"};

std::string fmt(double v) { return format_double(v); }

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + "\"";
}

std::string join_row(const std::vector<std::string>& fields)
{
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            line += ',';
        line += csv_field(fields[i]);
    }
    return line + "\n";
}

bool is_numeric_key(const std::string& key)
{
    if (key == "cu_exclusion" || key == "d2d_interference_exponent")
        return false;
    const auto entries = config_entries(NetworkConfig{});
    return std::any_of(entries.begin(), entries.end(), [&](const auto& e) { return e.first == key; });
}

bool wants_analytic(MethodSelection m) { return m != MethodSelection::montecarlo; }
bool wants_mc(MethodSelection m) { return m != MethodSelection::analytic; }

std::size_t default_n(const std::string& id)
{
    if (id == "validate")
        return 10000;
    if (id == "mode-prob" || id == "txpower-sweep")
        return 100000;
    return 1000;
}

std::string mode_name(Mode m) { return to_string(m); }

struct Rows {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    bool ok = true;
};

NetworkConfig at_point(const ExperimentSpec& spec, const SweepRange& sweep, double v)
{
    NetworkConfig cfg = spec.config;
    apply_override(cfg, sweep.variable, fmt(v));
    cfg.validate();
    return cfg;
}

std::string opt(bool have, double v) { return have ? fmt(v) : std::string(); }

Rows mode_prob_rows(const ExperimentSpec& spec, const SweepRange& sweep, std::size_t n)
{
    Rows r;
    r.header = {sweep.variable, "q_analytic", "q_mc", "ci", "abs_diff"};
    const bool an = wants_analytic(spec.method);
    const bool mc = wants_mc(spec.method);
    for (double v : sweep.values()) {
        const NetworkConfig cfg = at_point(spec, sweep, v);
        const double q = an ? mode_probability(cfg).q : 0.0;
        double qhat = 0.0;
        double ci = 0.0;
        if (mc) {
            const auto ues = sample_typical_ues(cfg, spec.seed, n, spec.workers);
            const auto k = static_cast<std::size_t>(
                std::count_if(ues.begin(), ues.end(), [](const TypicalUe& u) { return u.cellular; }));
            qhat = static_cast<double>(k) / static_cast<double>(n);
            ci = wilson_halfwidth(k, n);
        }
        r.rows.push_back({fmt(v), opt(an, q), opt(mc, qhat), opt(mc, ci), opt(an && mc, std::abs(q - qhat))});
    }
    return r;
}

Rows txpower_rows(const ExperimentSpec& spec, const SweepRange& sweep, std::size_t n)
{
    Rows r;
    r.header = {sweep.variable, "power_analytic_mw", "power_mc_mw", "ci", "rel_diff"};
    const bool an = wants_analytic(spec.method);
    const bool mc = wants_mc(spec.method);
    for (double v : sweep.values()) {
        const NetworkConfig cfg = at_point(spec, sweep, v);
        const double pa = an ? cu_mean_tx_power(cfg) : 0.0;
        double pm = 0.0;
        double ci = 0.0;
        bool have_mc = false;
        if (mc) {
            const auto ues = sample_typical_ues(cfg, spec.seed, n, spec.workers);
            double sum = 0.0;
            double sum2 = 0.0;
            std::size_t k = 0;
            for (const TypicalUe& u : ues) {
                if (!u.cellular)
                    continue;
                sum += u.cu_power_mw;
                sum2 += u.cu_power_mw * u.cu_power_mw;
                ++k;
            }
            if (k > 1) {
                have_mc = true;
                const double kk = static_cast<double>(k);
                pm = sum / kk;
                const double var = std::max(0.0, (sum2 - kk * pm * pm) / (kk - 1.0));
                ci = 1.96 * std::sqrt(var / kk);
            }
        }
        r.rows.push_back({fmt(v), opt(an, pa), opt(have_mc, pm), opt(have_mc, ci),
                          opt(an && have_mc, std::abs(pa - pm) / pm)});
    }
    return r;
}

Rows coverage_rows(const ExperimentSpec& spec, const SweepRange& sweep, std::size_t n)
{
    Rows r;
    r.header = {"T_dB", "p_analytic", "p_mc", "ci", "abs_diff"};
    const std::vector<double> dbs = sweep.values();
    const bool an = wants_analytic(spec.method);
    const bool mc = wants_mc(spec.method);
    std::vector<double> pa(dbs.size(), 0.0);
    if (an)
        pa = analytic_curve(AnalyticModel(spec.config), spec.mode, dbs).probabilities;
    CoverageCurve pm;
    if (mc) {
        CampaignOptions o;
        o.thresholds_db = dbs;
        o.workers = spec.workers;
        o.keep_samples = false;
        const CampaignResult c = run_campaign(spec.config, spec.seed, n, o);
        pm = spec.mode == Mode::cellular ? c.cellular : c.d2d;
    }
    for (std::size_t i = 0; i < dbs.size(); ++i) {
        const bool have = mc && std::isfinite(pm.probabilities[i]);
        r.rows.push_back({fmt(dbs[i]), opt(an, pa[i]), opt(have, have ? pm.probabilities[i] : 0.0),
                          opt(have, have ? pm.ci_halfwidth[i] : 0.0),
                          opt(an && have, have ? std::abs(pa[i] - pm.probabilities[i]) : 0.0)});
    }
    return r;
}

Rows ase_rows(const ExperimentSpec& spec, const SweepRange& sweep, std::size_t n)
{
    Rows r;
    r.header = {sweep.variable,      "ase_cellular_analytic", "ase_d2d_analytic", "ase_sum_analytic",
                "ase_cellular_mc",   "ase_d2d_mc",            "ase_sum_mc",       "tail_bound_analytic",
                "tail_bound_mc",     "lambda_d2d_analytic",   "lambda_d2d_mc"};
    const bool an = wants_analytic(spec.method);
    const bool mc = wants_mc(spec.method);
    for (double v : sweep.values()) {
        const NetworkConfig cfg = at_point(spec, sweep, v);
        AseResult a;
        if (an)
            a = analytic_ase(AnalyticModel(cfg), spec.gamma0_db);
        AseResult m;
        if (mc) {
            CampaignOptions o;
            o.gamma0_db = spec.gamma0_db;
            o.workers = spec.workers;
            o.keep_samples = false;
            m = run_campaign(cfg, spec.seed, n, o).ase;
        }
        r.rows.push_back({fmt(v), opt(an, a.ase_cellular), opt(an, a.ase_d2d), opt(an, a.ase_sum),
                          opt(mc, m.ase_cellular), opt(mc, m.ase_d2d), opt(mc, m.ase_sum),
                          opt(an, a.tail_bound_cellular + a.tail_bound_d2d),
                          opt(mc, m.tail_bound_cellular + m.tail_bound_d2d), opt(an, a.lambda_d2d),
                          opt(mc, m.lambda_d2d)});
    }
    return r;
}

Rows beta_rows(const ExperimentSpec& spec, const SweepRange& sweep, std::size_t n)
{
    Rows r;
    r.header = {sweep.variable, "q_analytic", "p_analytic", "p_mc", "ci", "abs_diff"};
    const bool an = wants_analytic(spec.method);
    const bool mc = wants_mc(spec.method);
    for (double v : sweep.values()) {
        const NetworkConfig cfg = at_point(spec, sweep, v);
        double q = 0.0;
        double pa = 0.0;
        if (an) {
            const AnalyticModel model(cfg);
            q = model.split().q;
            pa = model.coverage(Mode::cellular, db_to_linear(spec.threshold_db));
        }
        double pm = 0.0;
        double ci = 0.0;
        bool have = false;
        if (mc) {
            CampaignOptions o;
            o.thresholds_db = {spec.threshold_db};
            o.workers = spec.workers;
            o.keep_samples = false;
            const CampaignResult c = run_campaign(cfg, spec.seed, n, o);
            have = c.cellular_samples > 0;
            pm = have ? c.cellular.probabilities[0] : 0.0;
            ci = have ? c.cellular.ci_halfwidth[0] : 0.0;
        }
        r.rows.push_back({fmt(v), opt(an, q), opt(an, pa), opt(have, pm), opt(have, ci),
                          opt(an && have, std::abs(pa - pm))});
    }
    return r;
}

Rows validate_rows(const ExperimentSpec& spec, std::size_t n, std::ostream& log)
{
    Rows r;
    r.header = {"criterion", "status", "measured", "tolerance", "detail"};
    AcceptanceOptions o;
    o.seed = spec.seed;
    o.realizations = n;
    o.workers = spec.workers;
    AcceptanceSuite suite(o);
    const std::vector<std::string>& ids = spec.criteria.empty() ? acceptance_ids() : spec.criteria;
    for (const std::string& id : ids) {
        const CriterionResult c = suite.run(id);
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.1f", c.seconds);
        log << format_criterion(c) << " (" << secs << " s)\n";
        r.ok = r.ok && c.pass;
        r.rows.push_back({c.id, c.pass ? "PASS" : "FAIL", c.measured, c.tolerance, c.detail});
    }
    return r;
}

}  // namespace

std::string to_string(MethodSelection m)
{
    switch (m) {
    case MethodSelection::analytic: return "analytic";
    case MethodSelection::montecarlo: return "montecarlo";
    case MethodSelection::both: return "both";
    }
    return "?";
}

MethodSelection parse_method_selection(const std::string& text)
{
    if (text == "analytic")
        return MethodSelection::analytic;
    if (text == "montecarlo")
        return MethodSelection::montecarlo;
    if (text == "both")
        return MethodSelection::both;
    throw UsageError("method must be analytic|montecarlo|both, got '" + text + "'");
}

std::vector<double> SweepRange::values() const
{
    std::vector<double> v;
    if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo)
        return v;
    for (long k = 0;; ++k) {
        const double x = lo + static_cast<double>(k) * step;
        if (x > hi + 1e-9 * step)
            break;
        v.push_back(x);
    }
    return v;
}

SweepRange parse_sweep_range(const std::string& variable, const std::string& text)
{
    SweepRange s;
    s.variable = variable;
    std::istringstream in(text);
    std::string part;
    std::vector<double> nums;
    while (std::getline(in, part, ':')) {
        try {
            std::size_t used = 0;
            nums.push_back(std::stod(part, &used));
            if (used != part.size())
                throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw UsageError("sweep range must be lo:hi:step, got '" + text + "'");
        }
    }
    if (nums.size() != 3)
        throw UsageError("sweep range must be lo:hi:step, got '" + text + "'");
    s.lo = nums[0];
    s.hi = nums[1];
    s.step = nums[2];
    return s;
}

const std::vector<std::string>& experiment_ids() { return kIds; }

SweepRange default_sweep(const std::string& id)
{
    if (id == "mode-prob" || id == "beta-sweep")
        return {"beta_dbm", -85.0, -45.0, 5.0};
    if (id == "txpower-sweep")
        return {"p0_dbm", -90.0, -60.0, 5.0};
    if (id == "coverage")
        return {"T_dB", -10.0, 20.0, 2.0};
    if (id == "ase-sweep")
        return {"lambda_u", 50.0, 300.0, 50.0};
    throw UsageError("experiment '" + id + "' has no sweep");
}

void ExperimentSpec::validate() const
{
    if (std::find(kIds.begin(), kIds.end(), id) == kIds.end())
        throw UsageError("unknown experiment '" + id + "'");
    if (workers < 1)
        throw UsageError("--workers must be >= 1");
    if (id == "validate") {
        if (sweep)
            throw UsageError("validate takes no sweep");
        for (const std::string& c : criteria) {
            const auto& ids = acceptance_ids();
            if (std::find(ids.begin(), ids.end(), c) == ids.end())
                throw UsageError("unknown criterion '" + c + "'");
        }
        return;
    }
    if (!criteria.empty())
        throw UsageError("criteria apply to validate only");
    const SweepRange s = sweep ? *sweep : default_sweep(id);
    if (id == "coverage") {
        if (s.variable != "T_dB")
            throw UsageError("coverage sweeps T_dB only");
    } else if (!is_numeric_key(s.variable)) {
        throw UsageError("sweep variable '" + s.variable + "' is not a numeric config key");
    }
    if (s.values().empty())
        throw UsageError("empty sweep range for '" + s.variable + "'");
    config.validate();
}

ExperimentOutput render_experiment(const ExperimentSpec& spec, std::ostream& log)
{
    spec.validate();
    const std::size_t n = spec.n ? spec.n : default_n(spec.id);
    const QuadratureSpec quad;
    const Geometry geom = default_geometry(spec.config);

    std::ostringstream meta;
    meta << "# d2dcov " << kVersion << "\n";
    meta << "# experiment = " << spec.id << "\n";
    meta << "# seed = " << spec.seed << "\n";
    meta << "# n = " << n << "\n";
    meta << "# method = " << to_string(spec.method) << "\n";
    if (spec.id == "coverage")
        meta << "# mode = " << mode_name(spec.mode) << "\n";
    if (spec.id == "beta-sweep")
        meta << "# threshold_db = " << fmt(spec.threshold_db) << "\n";
    if (spec.id == "ase-sweep")
        meta << "# gamma0_db = " << fmt(spec.gamma0_db) << "\n";
    if (spec.id != "validate") {
        const SweepRange s = spec.sweep ? *spec.sweep : default_sweep(spec.id);
        meta << "# sweep = " << s.variable << ":" << fmt(s.lo) << ":" << fmt(s.hi) << ":" << fmt(s.step) << "\n";
    } else {
        std::string list;
        for (const auto& c : spec.criteria.empty() ? acceptance_ids() : spec.criteria)
            list += (list.empty() ? "" : " ") + c;
        meta << "# criteria = " << list << "\n";
    }
    for (const auto& [k, v] : spec.overrides)
        meta << "# override " << k << " = " << v << "\n";
    for (const auto& [k, v] : config_entries(spec.config))
        meta << "# config " << k << " = " << v << "\n";
    meta << "# quadrature rel_tol = " << fmt(quad.rel_tol) << ", abs_tol = " << fmt(quad.abs_tol)
         << ", omega_max = " << fmt(quad.omega_max) << ", max_subdivisions = " << quad.max_subdivisions << "\n";
    meta << "# inversion = euler-summed laplace inversion for model CFs (terms doubled to 1e-10 agreement), gil-pelaez otherwise\n";
    meta << "# mc window_m = " << fmt(geom.window) << ", guard_m = " << fmt(geom.guard)
         << " (window = guard + 5/sqrt(lambda_b))\n";
    meta << "# mc typical nodes = nearest eligible node to the centre of the guard disk\n";
    meta << "# mc mode-prob and txpower draws = independent UEs at the origin, BS field radius "
         << fmt(typical_ue_window(spec.config)) << " m\n";
    meta << "# d2d link density = d2d_tx_activity*(1-q)*lambda_u (analytic), active guard-disk TXs (mc)\n";

    Rows rows;
    if (spec.id == "validate") {
        rows = validate_rows(spec, n, log);
    } else {
        const SweepRange s = spec.sweep ? *spec.sweep : default_sweep(spec.id);
        log << "running " << spec.id << " over " << s.values().size() << " points\n";
        if (spec.id == "mode-prob")
            rows = mode_prob_rows(spec, s, n);
        else if (spec.id == "txpower-sweep")
            rows = txpower_rows(spec, s, n);
        else if (spec.id == "coverage")
            rows = coverage_rows(spec, s, n);
        else if (spec.id == "ase-sweep")
            rows = ase_rows(spec, s, n);
        else
            rows = beta_rows(spec, s, n);
    }

    ExperimentOutput out;
    out.ok = rows.ok;
    out.csv = meta.str() + join_row(rows.header);
    for (const auto& row : rows.rows)
        out.csv += join_row(row);
    return out;
}

int run_experiment(const ExperimentSpec& spec, std::ostream& out, std::ostream& log)
{
    const ExperimentOutput result = render_experiment(spec, log);
    if (spec.output_path.empty()) {
        out << result.csv;
    } else {
        namespace fs = std::filesystem;
        const fs::path target(spec.output_path);
        fs::path tmp = target;
        tmp += ".partial";
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            if (!f)
                throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
            f << result.csv;
            f.close();
            if (!f) {
                std::error_code ec;
                fs::remove(tmp, ec);
                throw std::runtime_error("failed writing '" + tmp.string() + "'");
            }
        }
        fs::rename(tmp, target);
    }
    return result.ok ? 0 : 1;
}

}  // namespace d2d

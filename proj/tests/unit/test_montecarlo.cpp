#include "d2dcov/equivalence.hpp"
#include "d2dcov/montecarlo.hpp"
#include "d2dcov/propagation.hpp"
#include "d2dcov/units.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace d2d;

namespace {

constexpr double kPi = 3.14159265358979323846;

Deployment hand_built(const NetworkConfig& cfg, std::vector<Point> bs, std::vector<Point> ue)
{
    Deployment d;
    d.seed = 11;
    d.geometry = {2000.0, 500.0};
    d.sigma_b_db = cfg.sigma_b_db;
    d.sigma_d_db = cfg.sigma_d_db;
    d.bs = std::move(bs);
    d.ue = std::move(ue);
    for (std::size_t i = 0; i < d.bs.size(); ++i)
        d.bs_id.push_back(i);
    for (std::size_t i = 0; i < d.ue.size(); ++i)
        d.ue_id.push_back(1000 + i);
    return d;
}

}  // namespace

TEST_SUITE("montecarlo")
{
    TEST_CASE("deployments are reproducible and Poisson")
    {
        const NetworkConfig cfg;
        const Geometry g = default_geometry(cfg);
        const Deployment a = sample_deployment(cfg, 99, g);
        const Deployment b = sample_deployment(cfg, 99, g);
        CHECK(a.ue.size() == b.ue.size());
        CHECK(std::equal(a.ue.begin(), a.ue.end(), b.ue.begin(),
                         [](const Point& x, const Point& y) { return x.x == y.x && x.y == y.y; }));
        CHECK(a.bs_shadow_db(3, 2) == b.bs_shadow_db(3, 2));
        CHECK(a.ue_shadow_db(4, 9) == a.ue_shadow_db(9, 4));
        double total = 0.0;
        const int n = 10000;
        for (int s = 0; s < n; ++s)
            total += static_cast<double>(sample_deployment(cfg, static_cast<std::uint64_t>(s), g).bs.size());
        const double expect = 5e-6 * kPi * g.window * g.window;
        CHECK(total / n == doctest::Approx(expect).epsilon(0.01));
        for (const Point& p : a.ue)
            CHECK(p.x * p.x + p.y * p.y <= g.window * g.window);
    }

    TEST_CASE("geometry checks and warnings")
    {
        const NetworkConfig cfg;
        CHECK_THROWS_AS(check_geometry(cfg, {600.0, 500.0}), std::invalid_argument);
        CHECK_THROWS_AS(default_geometry(cfg, 0.0), std::invalid_argument);
        CHECK(simulation_warnings(cfg).empty());
        NetworkConfig sparse;
        sparse.lambda_u = 20.0;
        CHECK(simulation_warnings(sparse).size() == 1);
    }

    TEST_CASE("mode labels follow the RSS rule")
    {
        NetworkConfig cfg;
        const Geometry g = default_geometry(cfg);
        for (std::uint64_t s : {1u, 2u, 3u}) {
            const Deployment d = assign_modes(sample_deployment(cfg, s, g), cfg);
            CHECK(mode_rule_violations(d, cfg) == 0);
        }
        cfg.beta_dbm = 200.0;
        Deployment all_d2d = assign_modes(sample_deployment(cfg, 5, g), cfg);
        CHECK(std::all_of(all_d2d.mode.begin(), all_d2d.mode.end(), [](Mode m) { return m == Mode::d2d; }));
        NetworkConfig greedy;
        greedy.beta_dbm = -400.0;
        Deployment all_cell = assign_modes(sample_deployment(greedy, 5, g), greedy);
        CHECK(std::all_of(all_cell.mode.begin(), all_cell.mode.end(), [](Mode m) { return m == Mode::cellular; }));
    }

    TEST_CASE("single link: SINR is signal over noise")
    {
        NetworkConfig cfg;
        cfg.sigma_b_db = 0.0;
        cfg.sigma_d_db = 0.0;
        Deployment d = hand_built(cfg, {{0.0, 0.0}}, {{50.0, 0.0}});
        d = schedule_and_pair(assign_modes(std::move(d), cfg), cfg, 3);
        CHECK(d.scheduled_cu[0] == 0);
        const auto s = measure_sinr(d, cfg);
        REQUIRE(s.size() == 1);
        const double signal = cu_tx_power_mw(50.0, cfg) * linearize(cfg).gain_b * std::pow(50.0, -cfg.alpha_b);
        CHECK(s[0].signal_mw == doctest::Approx(signal).epsilon(1e-12));
        CHECK(s[0].sinr == s[0].signal_mw / linearize(cfg).noise_bs);
    }

    TEST_CASE("activity one leaves no receivers")
    {
        NetworkConfig cfg;
        cfg.d2d_tx_activity = 1.0;
        CampaignOptions o;
        o.keep_samples = false;
        const CampaignResult r = run_campaign(cfg, 4, 3, o);
        CHECK(r.d2d_samples == 0);
        CHECK(r.skipped_d2d == 3);
        CHECK(std::isnan(r.d2d.probabilities.front()));
    }

    TEST_CASE("role split is a fair coin")
    {
        const NetworkConfig cfg;
        const Geometry g{3000.0, 500.0};
        std::size_t tx = 0;
        std::size_t total = 0;
        for (std::uint64_t s = 0; total < 100000; ++s) {
            Deployment d = schedule_and_pair(assign_modes(sample_deployment(cfg, s, g), cfg), cfg, s);
            for (D2dRole r : d.role) {
                if (r == D2dRole::none)
                    continue;
                ++total;
                tx += r == D2dRole::tx;
            }
        }
        const double n = static_cast<double>(total);
        CHECK(std::abs(static_cast<double>(tx) - 0.5 * n) <= 3.0 * std::sqrt(0.25 * n));
    }

    TEST_CASE("SINR breakdown identity and worker invariance")
    {
        const NetworkConfig cfg;
        CampaignOptions o;
        o.workers = 1;
        const CampaignResult a = run_campaign(cfg, 77, 12, o);
        o.workers = 3;
        const CampaignResult b = run_campaign(cfg, 77, 12, o);
        REQUIRE(a.samples.size() == b.samples.size());
        for (std::size_t i = 0; i < a.samples.size(); ++i) {
            const SinrSample& s = a.samples[i];
            CHECK(s.sinr == b.samples[i].sinr);
            const double rebuilt = s.signal_mw / (s.interference_cellular_mw + s.interference_d2d_mw + s.noise_mw);
            CHECK(std::abs(rebuilt - s.sinr) <= 1e-12 * s.sinr);
        }
        CHECK(a.cellular.probabilities == b.cellular.probabilities);
        CHECK(a.ase.ase_sum == b.ase.ase_sum);
        CHECK(a.mean_cu_power_mw == b.mean_cu_power_mw);
        const CampaignResult one = run_campaign(cfg, 77, 1, o);
        const CampaignResult again = run_campaign(cfg, 77, 1, o);
        CHECK(one.cellular.probabilities == again.cellular.probabilities);
        CHECK_THROWS_AS(run_campaign(cfg, 77, 0, o), std::invalid_argument);
    }

    TEST_CASE("typical-UE draws reproduce the mode probability")
    {
        const NetworkConfig cfg;
        const std::size_t n = 100000;
        const auto ues = sample_typical_ues(cfg, 5, n, 2);
        const auto k = std::count_if(ues.begin(), ues.end(), [](const TypicalUe& u) { return u.cellular; });
        const double q = mode_probability(cfg).q;
        CHECK(std::abs(static_cast<double>(k) - q * n) <= 3.0 * std::sqrt(q * (1 - q) * n));
        const auto again = sample_typical_ues(cfg, 5, 1000, 1);
        for (std::size_t i = 0; i < again.size(); ++i)
            CHECK(again[i].serving_equiv == ues[i].serving_equiv);
    }

    TEST_CASE("confidence half-width shrinks with realizations")
    {
        const NetworkConfig cfg;
        CampaignOptions o;
        o.thresholds_db = {0.0};
        o.keep_samples = false;
        const CampaignResult small = run_campaign(cfg, 8, 100, o);
        const CampaignResult large = run_campaign(cfg, 8, 400, o);
        const double ratio = small.d2d.ci_halfwidth[0] / large.d2d.ci_halfwidth[0];
        CHECK(ratio == doctest::Approx(2.0).epsilon(0.25));
    }
}

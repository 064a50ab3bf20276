#include "d2dcov/config.hpp"
#include "d2dcov/format.hpp"
#include "d2dcov/propagation.hpp"
#include "d2dcov/units.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace d2d;

TEST_SUITE("model_core")
{
    TEST_CASE("decibel conversions")
    {
        CHECK(dbm_to_mw(46.0) == doctest::Approx(39810.71705534972507).epsilon(1e-14));
        CHECK(dbm_to_mw(0.0) == 1.0);
        CHECK(mw_to_dbm(dbm_to_mw(-114.0)) == doctest::Approx(-114.0).epsilon(1e-14));
        CHECK(db_to_linear(linear_to_db(3.7)) == doctest::Approx(3.7).epsilon(1e-14));
        CHECK(sigma_natural(8.0) == doctest::Approx(1.84206807439523654721).epsilon(1e-14));
        CHECK_THROWS_AS(db_to_linear(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
        CHECK_THROWS_AS(mw_to_dbm(-1.0), std::invalid_argument);
        CHECK(per_km2_to_per_m2(5.0) == doctest::Approx(5e-6));
    }

    TEST_CASE("default configuration validates and linearizes")
    {
        const NetworkConfig cfg;
        CHECK_NOTHROW(cfg.validate());
        const LinearParams p = linearize(cfg);
        CHECK(p.lambda_b == doctest::Approx(5e-6));
        CHECK(p.p_b == doctest::Approx(39810.717055349725));
        CHECK(p.gain_b == doctest::Approx(std::pow(10.0, -3.29)));
        CHECK(p.noise_ue == doctest::Approx(std::pow(10.0, -9.5)));
        CHECK_FALSE(p.p_max.has_value());
    }

    TEST_CASE("invalid configurations are rejected")
    {
        NetworkConfig cfg;
        cfg.alpha_b = 2.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg = {};
        cfg.epsilon = 0.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg = {};
        cfg.lambda_u = -1.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg = {};
        cfg.d2d_tx_activity = 1.5;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg = {};
        cfg.sigma_b_db = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }

    TEST_CASE("config text round-trips and rejects bad input")
    {
        NetworkConfig cfg;
        cfg.p0_dbm = -81.25;
        cfg.p_max_dbm = 23.0;
        cfg.cu_exclusion = CuExclusion::serving;
        std::ostringstream text;
        text << "# comment\n\n";
        for (const auto& [k, v] : config_entries(cfg))
            text << k << " = " << v << "  # trailing\n";
        std::istringstream in(text.str());
        const NetworkConfig back = parse_config(in);
        CHECK(config_entries(back) == config_entries(cfg));

        std::istringstream unknown("lambda_x = 3\n");
        CHECK_THROWS_AS(parse_config(unknown), std::invalid_argument);
        std::istringstream bad("lambda_b = 3x\n");
        CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);
        std::istringstream no_eq("lambda_b 3\n");
        CHECK_THROWS_AS(parse_config(no_eq), std::invalid_argument);
        std::istringstream invalid("alpha_d = 1.5\n");
        CHECK_THROWS_AS(parse_config(invalid), std::invalid_argument);
        CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), std::invalid_argument);
    }

    TEST_CASE("round-trip number formatting")
    {
        for (double v : {0.1, 1.0 / 3.0, 39810.717055349725, 1e-300, -2.5e17}) {
            const std::string s = format_double(v);
            CHECK(std::stod(s) == v);
        }
        CHECK(format_double(0.5) == "0.5");
    }

    TEST_CASE("fractional channel inversion")
    {
        const NetworkConfig cfg;
        // P0 / A_B^eps * r^(alpha eps) at r = 200 m.
        CHECK(cu_tx_power_mw(200.0, cfg) == doctest::Approx(342.838816317951621810).epsilon(1e-12));
        NetworkConfig capped = cfg;
        capped.p_max_dbm = 20.0;
        CHECK(cu_tx_power_mw(200.0, capped) == doctest::Approx(100.0));
        CHECK(cu_tx_power_mw(10.0, capped) == doctest::Approx(cu_tx_power_mw(10.0, cfg)));
        NetworkConfig full = cfg;
        full.epsilon = 1.0;
        // Full inversion delivers exactly P0 at the serving BS.
        const double r = 80.0;
        const double rx = cu_tx_power_mw(r, full) * linearize(full).gain_b * std::pow(r, -full.alpha_b);
        CHECK(rx == doctest::Approx(dbm_to_mw(full.p0_dbm)).epsilon(1e-12));
    }

    TEST_CASE("link budget in dB")
    {
        const NetworkConfig cfg;
        CHECK(pathloss_db(LinkKind::cellular, 100.0, 0.0, cfg) == doctest::Approx(32.9 + 3.75 * 20.0));
        CHECK(pathloss_db(LinkKind::d2d, 10.0, 4.0, cfg) == doctest::Approx(55.78 + 3.75 * 10.0 + 4.0));
        const LinkBudget lb = link_budget(10.0, LinkKind::d2d, 10.0, 4.0, cfg);
        CHECK(lb.rx_power_dbm == doctest::Approx(10.0 - lb.pathloss_db));
        CHECK(mw_to_dbm(rx_power_mw(10.0, LinkKind::d2d, 10.0, shadow_linear(4.0), cfg)) ==
              doctest::Approx(lb.rx_power_dbm).epsilon(1e-12));
        CHECK(shadow_linear(10.0) == doctest::Approx(0.1));
        CHECK_THROWS_AS(pathloss_db(LinkKind::cellular, 0.0, 0.0, cfg), std::invalid_argument);
    }
}

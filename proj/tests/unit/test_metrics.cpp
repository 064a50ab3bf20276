#include "d2dcov/coverage.hpp"
#include "d2dcov/metrics.hpp"
#include "d2dcov/units.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace d2d;

namespace {

CoverageCurve step_curve(double x_db, double lo = -20.0, double hi = 60.0)
{
    CoverageCurve c;
    c.mode = Mode::cellular;
    c.method = Method::analytic;
    for (double db = lo; db <= hi + 1e-9; db += 0.01) {
        c.thresholds_db.push_back(db);
        c.probabilities.push_back(db <= x_db ? 1.0 : 0.0);
        c.ci_halfwidth.push_back(0.0);
    }
    return c;
}

}  // namespace

TEST_SUITE("metrics")
{
    TEST_CASE("ASE of a zero curve is zero")
    {
        CoverageCurve c = step_curve(-100.0);
        const AseEstimate e = ase_from_coverage(c, 5.0, 1.0);
        CHECK(e.value == 0.0);
        CHECK(e.tail_bound == 0.0);
    }

    TEST_CASE("ASE of a deterministic SINR is lambda log2(1+X)")
    {
        const double x_db = 10.0;
        const AseEstimate e = ase_from_coverage(step_curve(x_db), 5.0, db_to_linear(0.0));
        CHECK(e.value == doctest::Approx(5.0 * std::log2(1.0 + db_to_linear(x_db))).epsilon(1e-3));
    }

    TEST_CASE("ASE is monotone in the curve and additive")
    {
        CoverageCurve lo = step_curve(5.0);
        CoverageCurve hi = step_curve(8.0);
        CHECK(ase_from_coverage(hi, 5.0, 1.0).value >= ase_from_coverage(lo, 5.0, 1.0).value);
        const AseResult r = combine_ase({1.25, 0.0}, {2.5, 0.1}, 0.0, 5.0, 100.0);
        CHECK(r.ase_sum == r.ase_cellular + r.ase_d2d);
        CHECK(r.tail_bound_d2d == 0.1);
    }

    TEST_CASE("slow tails are extrapolated and reported")
    {
        CoverageCurve c;
        for (double db = 0.0; db <= 20.0; db += 1.0) {
            c.thresholds_db.push_back(db);
            c.probabilities.push_back(std::pow(10.0, -db / 20.0));
            c.ci_halfwidth.push_back(0.0);
        }
        const AseEstimate e = ase_from_coverage(c, 1.0, 1.0);
        CHECK(e.tail_bound > 0.0);
        CHECK(e.value > e.tail_bound);
    }

    TEST_CASE("curve validation")
    {
        CoverageCurve c = step_curve(5.0);
        CHECK_NOTHROW(c.validate());
        c.probabilities[2600] = 0.5;  // rises from 0 to 0.5 after the step
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
        CHECK_THROWS_AS(ase_from_coverage(c, 1.0, 1.0), std::invalid_argument);
        CoverageCurve mc = step_curve(5.0);
        mc.method = Method::montecarlo;
        mc.probabilities[2600] = 0.01;
        mc.ci_halfwidth.assign(mc.ci_halfwidth.size(), 0.01);
        CHECK_NOTHROW(mc.validate());
        CoverageCurve bad = step_curve(5.0);
        bad.probabilities[0] = 1.5;
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
        CoverageCurve unordered = step_curve(5.0);
        std::swap(unordered.thresholds_db[0], unordered.thresholds_db[1]);
        CHECK_THROWS_AS(unordered.validate(), std::invalid_argument);
    }

    TEST_CASE("link densities")
    {
        NetworkConfig cfg;
        CHECK(link_density(Mode::cellular, cfg) == 5.0);
        CHECK(link_density(Mode::d2d, cfg) == doctest::Approx(103.359128834552572975).epsilon(1e-12));
        cfg.beta_dbm = -300.0;
        CHECK(link_density(Mode::d2d, cfg) == doctest::Approx(0.0).epsilon(1e-12));
    }

    TEST_CASE("Wilson half-width shrinks like 1/sqrt(n)")
    {
        const double a = wilson_halfwidth(500, 1000);
        const double b = wilson_halfwidth(2000, 4000);
        CHECK(a / b == doctest::Approx(2.0).epsilon(0.01));
        CHECK(wilson_halfwidth(0, 100) > 0.0);
    }

    TEST_CASE("threshold grids")
    {
        CHECK(threshold_range_db(5.0, 1.0, 1.0).empty());
        CHECK(threshold_range_db(-10.0, 20.0, 2.0).size() == 16);
        const auto g = ase_threshold_grid_db();
        CHECK(g.size() == 81);
        CHECK(g.front() == -20.0);
        CHECK(g.back() == 60.0);
    }

    TEST_CASE("analytic curve and ASE at the defaults")
    {
        const AnalyticModel m{NetworkConfig{}};
        const CoverageCurve c = analytic_curve(m, Mode::d2d, threshold_range_db(-10.0, 20.0, 2.0));
        CHECK_NOTHROW(c.validate());
        const AseResult a = analytic_ase(m, 0.0);
        CHECK(a.ase_sum == a.ase_cellular + a.ase_d2d);
        CHECK(a.ase_cellular > 0.0);
        CHECK(a.ase_d2d > 0.0);
        CHECK(a.lambda_cellular == 5.0);
    }
}

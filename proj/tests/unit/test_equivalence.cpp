#include "d2dcov/equivalence.hpp"
#include "d2dcov/quadrature.hpp"
#include "d2dcov/units.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace d2d;

namespace {

constexpr double kPi = 3.14159265358979323846;

double mass(const DistanceLaw& law)
{
    const double hi = std::isfinite(law.hi()) ? law.hi() : 4.0 * law.tail_cutoff();
    std::vector<double> bp{law.lo()};
    for (double k : {0.01, 0.1, 0.25, 0.5, 1.0})
        bp.push_back(law.lo() + k * (hi - law.lo()));
    auto f = [&](double r) { return law.pdf(r); };
    return integrate(f, std::span<const double>(bp), 1e-13, 1e-12, 20000).value;
}

}  // namespace

TEST_SUITE("equivalence")
{
    TEST_CASE("shadowing moment and intensity measure")
    {
        const double s = sigma_natural(8.0);
        CHECK(shadow_moment(s, 3.75) == doctest::Approx(1.62026634789598147050).epsilon(1e-13));
        CHECK(intensity_measure(200.0, 5e-6, 0.0, 3.75) == doctest::Approx(kPi * 5e-6 * 200.0 * 200.0));
        CHECK(intensity_measure(0.0, 5e-6, s, 3.75) == 0.0);
        CHECK(intensity_measure(200.0, 5e-6, s, 3.75) ==
              doctest::Approx(kPi * 5e-6 * 4e4 * 1.62026634789598147050).epsilon(1e-13));
    }

    TEST_CASE("cell radius and mode probability at the defaults")
    {
        const NetworkConfig cfg;
        CHECK(cell_radius(cfg) == doctest::Approx(120.966932163551763309).epsilon(1e-13));
        const ModeSplit m = mode_probability(cfg);
        CHECK(m.q == doctest::Approx(0.310939141102982846835).epsilon(1e-12));
        CHECK(m.lambda_c + m.lambda_d == doctest::Approx(300e-6));
        const LinearParams p = linearize(cfg);
        CHECK(d2d_transmitter_density(p, m.q) * 1e6 == doctest::Approx(103.359128834552572975).epsilon(1e-12));
    }

    TEST_CASE("mode probability limits")
    {
        NetworkConfig cfg;
        cfg.lambda_b = 1e-12;
        CHECK(mode_probability(cfg).q < 1e-10);
        cfg = {};
        cfg.beta_dbm = -300.0;
        CHECK(mode_probability(cfg).q == doctest::Approx(1.0));
    }

    TEST_CASE("serving law normalizes and reduces to Rayleigh without shadowing")
    {
        const NetworkConfig cfg;
        const DistanceLaw law = serving_distance_law(cfg);
        CHECK(law.hi() == doctest::Approx(cell_radius(cfg)));
        CHECK(std::abs(mass(law) - 1.0) < 1e-6);
        CHECK(law.cdf(law.hi()) == doctest::Approx(1.0));
        CHECK(law.cdf(0.0) == 0.0);

        NetworkConfig flat;
        flat.sigma_b_db = 0.0;
        flat.beta_dbm = -250.0;
        const DistanceLaw r = serving_distance_law(flat);
        const double lam = 5e-6;
        for (double x : {10.0, 100.0, 250.0, 600.0})
            CHECK(r.pdf(x) == doctest::Approx(2 * kPi * lam * x * std::exp(-kPi * lam * x * x)).epsilon(1e-9));
    }

    TEST_CASE("neighbour laws normalize")
    {
        const double m = shadow_moment(sigma_natural(8.0), 3.75);
        for (const DistanceLaw& law : {nearest_neighbor_law(5e-6, m), second_neighbor_law(5e-6, m)}) {
            CHECK(std::abs(mass(law) - 1.0) < 1e-6);
            CHECK(law.cdf(law.tail_cutoff()) > 1.0 - 1e-8);
        }
    }

    TEST_CASE("mean CU transmit power")
    {
        const NetworkConfig cfg;
        CHECK(cu_mean_tx_power(cfg) == doctest::Approx(27.9438383804199325449).epsilon(1e-7));
        NetworkConfig doubled = cfg;
        doubled.p0_dbm = cfg.p0_dbm + 10.0 * std::log10(2.0);
        CHECK(cu_mean_tx_power(doubled) == doctest::Approx(2.0 * cu_mean_tx_power(cfg)).epsilon(1e-9));
        NetworkConfig flat = cfg;
        flat.epsilon = 1e-12;
        CHECK(cu_mean_tx_power(flat) == doctest::Approx(dbm_to_mw(cfg.p0_dbm)).epsilon(1e-9));
    }

    TEST_CASE("cellular overlap probability")
    {
        CHECK(cellular_overlap_prob(3.0, 4.0, 5.0) == doctest::Approx(0.5));
        CHECK(cellular_overlap_prob(1e-9, 5.0, 5.0) == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(cellular_overlap_prob(1.0, 100.0, 5.0) == 0.0);
        CHECK(cellular_overlap_prob(1.0, 2.0, 5.0) == 1.0);
    }

    TEST_CASE("D2D link law: axioms, density and mass")
    {
        const NetworkConfig cfg;
        const DistanceLaw law = d2d_distance_law(cfg);
        CHECK(law.raw_mass() == doctest::Approx(1.02813).epsilon(1e-5));
        CHECK(std::abs(mass(law) - 1.0) < 1e-6);
        CHECK(law.cdf(0.0) == 0.0);
        CHECK(law.cdf(law.tail_cutoff()) > 1.0 - 1e-8);
        double prev = 0.0;
        for (int i = 1; i <= 200; ++i) {
            const double r = law.tail_cutoff() * i / 200.0;
            const double F = law.cdf(r);
            CHECK(F >= prev - 1e-6);
            prev = F;
        }
        // Density against a central difference of the CDF.
        for (double r : {5.0, 20.0, 40.0, 80.0, 150.0}) {
            const double h = 1e-3 * r;
            const double fd = (law.cdf(r + h) - law.cdf(r - h)) / (2 * h);
            CHECK(law.pdf(r) == doctest::Approx(fd).epsilon(1e-5));
        }
    }

    TEST_CASE("D2D link law collapses to the nearest-neighbour law without a cellular disk")
    {
        NetworkConfig cfg;
        cfg.beta_dbm = 100.0;
        const DistanceLaw law = d2d_distance_law(cfg);
        const LinearParams p = linearize(cfg);
        const double q = mode_probability(p).q;
        const DistanceLaw nn =
            nearest_neighbor_law(d2d_transmitter_density(p, q), shadow_moment(p.sigma_d, p.alpha_d));
        for (double r : {1.0, 10.0, 30.0, 60.0, 120.0}) {
            CHECK(law.pdf(r) == doctest::Approx(nn.pdf(r)).epsilon(1e-9));
            CHECK(law.cdf(r) == doctest::Approx(nn.cdf(r)).epsilon(1e-9));
        }
    }

    TEST_CASE("D2D fallback weight vanishes far from the cellular disk")
    {
        const LinearParams p = linearize(NetworkConfig{});
        CHECK(d2d_fallback_weight(0.0, p) == 0.0);
        CHECK(d2d_fallback_weight(1e5, p) == 0.0);
        const double w = d2d_fallback_weight(50.0, p);
        CHECK(w > 0.0);
        CHECK(w < 1.0);
    }
}

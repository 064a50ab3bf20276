#pragma once

#include "d2dcov/config.hpp"
#include "d2dcov/equivalence.hpp"
#include "d2dcov/metrics.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace d2d {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class D2dRole : std::uint8_t { none, tx, rx };

// Simulation region: points live in a disk of radius window, typical nodes are
// taken from the concentric guard disk.
struct Geometry {
    double window = 0.0;
    double guard = 0.0;
};

// guard + 5 mean inter-site distances (1/sqrt(lambda_b)).
Geometry default_geometry(const NetworkConfig& cfg, double guard = 500.0);
// Throws std::invalid_argument when window < guard + one inter-site distance.
void check_geometry(const NetworkConfig& cfg, const Geometry& g);
// Non-fatal configuration warnings (e.g. lambda_u < 10 lambda_b).
std::vector<std::string> simulation_warnings(const NetworkConfig& cfg);

struct Deployment {
    std::uint64_t seed = 0;
    Geometry geometry;
    double sigma_b_db = 0.0;
    double sigma_d_db = 0.0;

    std::vector<Point> bs;
    std::vector<std::uint64_t> bs_id;
    std::vector<Point> ue;
    std::vector<std::uint64_t> ue_id;

    // Filled by assign_modes.
    std::vector<Mode> mode;
    std::vector<int> serving_bs;          // strongest BS, -1 when there is none
    std::vector<double> max_rss_mw;
    std::vector<double> serving_equiv;    // H^(-1/alpha_B) r to the strongest BS
    bool modes_assigned = false;

    // Filled by schedule_and_pair.
    std::vector<int> scheduled_cu;        // per BS: UE index or -1
    std::vector<double> tx_power_mw;      // per UE: scheduled CU power, P_d for D2D TX, else 0
    std::vector<D2dRole> role;
    std::vector<int> partner;             // per UE: strongest TX for RXs in the guard disk, else -1
    std::vector<double> pair_equiv;       // H^(-1/alpha_D) r to that TX
    std::size_t dropped_rx = 0;           // guard-disk RXs with no TX in the window
    bool scheduled = false;

    // Shadowing in dB of a UE-BS and a UE-UE link (symmetric), from seeded hashing.
    double bs_shadow_db(std::size_t ue, std::size_t bs) const;
    double ue_shadow_db(std::size_t a, std::size_t b) const;
    bool in_guard(const Point& p) const;
};

Deployment sample_deployment(const NetworkConfig& cfg, std::uint64_t seed, const Geometry& geometry);
Deployment assign_modes(Deployment dep, const NetworkConfig& cfg);
Deployment schedule_and_pair(Deployment dep, const NetworkConfig& cfg, std::uint64_t seed);

// Re-checks every label against the RSS rule; returns the number of violations.
std::size_t mode_rule_violations(const Deployment& dep, const NetworkConfig& cfg);

struct SinrSample {
    Mode mode = Mode::cellular;
    double sinr = 0.0;
    double serving_distance = 0.0;  // equivalent distance of the typical link
    double signal_mw = 0.0;
    double interference_cellular_mw = 0.0;
    double interference_d2d_mw = 0.0;
    double noise_mw = 0.0;
};

// Up to one cellular sample (typical BS) and one D2D sample (typical RX).
std::vector<SinrSample> measure_sinr(const Deployment& dep, const NetworkConfig& cfg);

struct CampaignOptions {
    std::vector<double> thresholds_db;   // empty: -10..20 dB in 2 dB steps
    double gamma0_db = 0.0;
    std::optional<Geometry> geometry;    // default_geometry when absent
    int workers = 1;
    bool keep_samples = true;
};

struct CampaignResult {
    CoverageCurve cellular;
    CoverageCurve d2d;
    ModeSplit mode_split{};             // from UEs inside the guard disk
    double mean_cu_power_mw = 0.0;      // over cellular UEs inside the guard disk
    AseResult ase;
    double d2d_link_density_km2 = 0.0;  // active D2D TXs per km^2 inside the guard disk
    Geometry geometry;
    std::size_t realizations = 0;
    std::size_t cellular_samples = 0;
    std::size_t d2d_samples = 0;
    std::size_t skipped_cellular = 0;
    std::size_t skipped_d2d = 0;
    std::size_t dropped_rx = 0;
    std::size_t guard_ues = 0;
    std::size_t guard_cellular_ues = 0;
    std::vector<SinrSample> samples;        // in realization order
    std::vector<double> pair_distances;     // equivalent D2D pair distances, guard-disk RXs
    std::vector<std::string> warnings;
};

// Seed of realization i.
std::uint64_t realization_seed(std::uint64_t master_seed, std::size_t i);

CampaignResult run_campaign(const NetworkConfig& cfg, std::uint64_t master_seed, std::size_t n_realizations,
                            const CampaignOptions& options = {});

// Single UE at the origin of an independent BS field per draw (Palm view of the UE process).
struct TypicalUe {
    bool cellular = false;
    double serving_equiv = 0.0;  // equivalent distance to the strongest BS
    double max_rss_mw = 0.0;
    double cu_power_mw = 0.0;    // fractional channel inversion power if cellular, else 0
};

// BS field radius for typical-UE draws: t * e^(6 sigma_B / alpha_B), at least t + 1 inter-site distance.
double typical_ue_window(const NetworkConfig& cfg);

std::vector<TypicalUe> sample_typical_ues(const NetworkConfig& cfg, std::uint64_t seed, std::size_t n,
                                          int workers = 1);

}  // namespace d2d

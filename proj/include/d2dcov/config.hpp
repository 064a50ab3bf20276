#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace d2d {

enum class Mode { cellular, d2d };

// Lower limit of the cellular-interferer integral at the typical BS.
enum class CuExclusion {
    cell_radius,  // t, the cellular-mode disk radius (default)
    serving,      // equivalent serving distance of the typical link
    none,         // interferers allowed arbitrarily close
};

// Path-loss exponent applied to D2D interferers at a D2D receiver.
enum class D2dInterferenceExponent {
    alpha_d,  // UE-to-UE exponent (default)
    alpha_b,  // cellular exponent
};

// Physical and process parameters. Densities in per km^2, powers in dBm,
// path-loss constants as positive dB losses at 1 m.
struct NetworkConfig {
    double lambda_b = 5.0;
    double lambda_u = 300.0;
    double p_b_dbm = 46.0;
    double p_d_dbm = 10.0;
    double p0_dbm = -70.0;
    double epsilon = 0.8;
    double alpha_b = 3.75;
    double alpha_d = 3.75;
    double a_b_db = 32.9;
    double a_d_db = 55.78;
    double sigma_b_db = 8.0;
    double sigma_d_db = 7.0;
    double beta_dbm = -65.0;
    double noise_bs_dbm = -114.0;
    double noise_ue_dbm = -95.0;
    double d2d_tx_activity = 0.5;
    std::optional<double> p_max_dbm;

    CuExclusion cu_exclusion = CuExclusion::cell_radius;
    D2dInterferenceExponent d2d_interference_exponent = D2dInterferenceExponent::alpha_d;

    // Throws std::invalid_argument naming the first violated invariant.
    void validate() const;
};

// Everything in linear SI-ish units used by the engines: per m^2, mW, natural-log sigmas.
struct LinearParams {
    double lambda_b;     // per m^2
    double lambda_u;     // per m^2
    double p_b;          // mW
    double p_d;          // mW
    double p0;           // mW
    double epsilon;
    double alpha_b;
    double alpha_d;
    double gain_b;       // A_B = 10^(-a_b_db/10)
    double gain_d;       // A_D
    double sigma_b;      // natural-log std dev
    double sigma_d;
    double beta;         // mW
    double noise_bs;     // mW
    double noise_ue;     // mW
    double activity;
    std::optional<double> p_max;  // mW
};

LinearParams linearize(const NetworkConfig& cfg);

// Flat "key = value" text, '#' comments. Unknown keys and malformed values throw.
NetworkConfig parse_config(std::istream& in, NetworkConfig base = {});
NetworkConfig load_config(const std::string& path, NetworkConfig base = {});
void apply_override(NetworkConfig& cfg, const std::string& key, const std::string& value);

// Ordered (key, value) pairs using round-trip formatting; inverse of parse_config.
std::vector<std::pair<std::string, std::string>> config_entries(const NetworkConfig& cfg);

std::string to_string(Mode m);
std::string to_string(CuExclusion e);
std::string to_string(D2dInterferenceExponent e);

}  // namespace d2d

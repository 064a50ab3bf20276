#include "d2dcov/config.hpp"

#include "d2dcov/format.hpp"
#include "d2dcov/units.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>

namespace d2d {

namespace {

struct DoubleField {
    const char* key;
    double NetworkConfig::*member;
};

constexpr DoubleField kDoubleFields[] = {
    {"lambda_b", &NetworkConfig::lambda_b},
    {"lambda_u", &NetworkConfig::lambda_u},
    {"p_b_dbm", &NetworkConfig::p_b_dbm},
    {"p_d_dbm", &NetworkConfig::p_d_dbm},
    {"p0_dbm", &NetworkConfig::p0_dbm},
    {"epsilon", &NetworkConfig::epsilon},
    {"alpha_b", &NetworkConfig::alpha_b},
    {"alpha_d", &NetworkConfig::alpha_d},
    {"a_b_db", &NetworkConfig::a_b_db},
    {"a_d_db", &NetworkConfig::a_d_db},
    {"sigma_b_db", &NetworkConfig::sigma_b_db},
    {"sigma_d_db", &NetworkConfig::sigma_d_db},
    {"beta_dbm", &NetworkConfig::beta_dbm},
    {"noise_bs_dbm", &NetworkConfig::noise_bs_dbm},
    {"noise_ue_dbm", &NetworkConfig::noise_ue_dbm},
    {"d2d_tx_activity", &NetworkConfig::d2d_tx_activity},
};

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& key, const std::string& text)
{
    double v = 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw std::invalid_argument("config: bad numeric value for '" + key + "': '" + text + "'");
    return v;
}

void require(bool ok, const std::string& msg)
{
    if (!ok)
        throw std::invalid_argument("config: " + msg);
}

}  // namespace

void NetworkConfig::validate() const
{
    for (const auto& f : kDoubleFields)
        require(std::isfinite(this->*f.member), std::string(f.key) + " must be finite");
    require(lambda_b > 0.0, "lambda_b must be > 0");
    require(lambda_u > 0.0, "lambda_u must be > 0");
    require(alpha_b > 2.0, "alpha_b must be > 2");
    require(alpha_d > 2.0, "alpha_d must be > 2");
    require(epsilon > 0.0 && epsilon <= 1.0, "epsilon must lie in (0, 1]");
    require(sigma_b_db >= 0.0, "sigma_b_db must be >= 0");
    require(sigma_d_db >= 0.0, "sigma_d_db must be >= 0");
    require(d2d_tx_activity >= 0.0 && d2d_tx_activity <= 1.0, "d2d_tx_activity must lie in [0, 1]");
    if (p_max_dbm)
        require(std::isfinite(*p_max_dbm), "p_max_dbm must be finite");
}

LinearParams linearize(const NetworkConfig& cfg)
{
    cfg.validate();
    LinearParams p{};
    p.lambda_b = per_km2_to_per_m2(cfg.lambda_b);
    p.lambda_u = per_km2_to_per_m2(cfg.lambda_u);
    p.p_b = dbm_to_mw(cfg.p_b_dbm);
    p.p_d = dbm_to_mw(cfg.p_d_dbm);
    p.p0 = dbm_to_mw(cfg.p0_dbm);
    p.epsilon = cfg.epsilon;
    p.alpha_b = cfg.alpha_b;
    p.alpha_d = cfg.alpha_d;
    p.gain_b = db_to_linear(-cfg.a_b_db);
    p.gain_d = db_to_linear(-cfg.a_d_db);
    p.sigma_b = sigma_natural(cfg.sigma_b_db);
    p.sigma_d = sigma_natural(cfg.sigma_d_db);
    p.beta = dbm_to_mw(cfg.beta_dbm);
    p.noise_bs = dbm_to_mw(cfg.noise_bs_dbm);
    p.noise_ue = dbm_to_mw(cfg.noise_ue_dbm);
    p.activity = cfg.d2d_tx_activity;
    if (cfg.p_max_dbm)
        p.p_max = dbm_to_mw(*cfg.p_max_dbm);
    return p;
}

void apply_override(NetworkConfig& cfg, const std::string& key, const std::string& value)
{
    for (const auto& f : kDoubleFields) {
        if (key == f.key) {
            cfg.*f.member = parse_number(key, value);
            return;
        }
    }
    if (key == "p_max_dbm") {
        if (value == "none" || value.empty())
            cfg.p_max_dbm.reset();
        else
            cfg.p_max_dbm = parse_number(key, value);
        return;
    }
    if (key == "cu_exclusion") {
        if (value == "cell_radius")
            cfg.cu_exclusion = CuExclusion::cell_radius;
        else if (value == "serving")
            cfg.cu_exclusion = CuExclusion::serving;
        else if (value == "none")
            cfg.cu_exclusion = CuExclusion::none;
        else
            throw std::invalid_argument("config: cu_exclusion must be cell_radius|serving|none");
        return;
    }
    if (key == "d2d_interference_exponent") {
        if (value == "alpha_d")
            cfg.d2d_interference_exponent = D2dInterferenceExponent::alpha_d;
        else if (value == "alpha_b")
            cfg.d2d_interference_exponent = D2dInterferenceExponent::alpha_b;
        else
            throw std::invalid_argument("config: d2d_interference_exponent must be alpha_d|alpha_b");
        return;
    }
    throw std::invalid_argument("config: unknown key '" + key + "'");
}

NetworkConfig parse_config(std::istream& in, NetworkConfig base)
{
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) + ": expected key = value");
        apply_override(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    base.validate();
    return base;
}

NetworkConfig load_config(const std::string& path, NetworkConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open '" + path + "'");
    return parse_config(in, std::move(base));
}

std::vector<std::pair<std::string, std::string>> config_entries(const NetworkConfig& cfg)
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& f : kDoubleFields)
        out.emplace_back(f.key, format_double(cfg.*f.member));
    out.emplace_back("p_max_dbm", cfg.p_max_dbm ? format_double(*cfg.p_max_dbm) : "none");
    out.emplace_back("cu_exclusion", to_string(cfg.cu_exclusion));
    out.emplace_back("d2d_interference_exponent", to_string(cfg.d2d_interference_exponent));
    return out;
}

std::string to_string(Mode m)
{
    return m == Mode::cellular ? "cellular" : "d2d";
}

std::string to_string(CuExclusion e)
{
    switch (e) {
    case CuExclusion::cell_radius: return "cell_radius";
    case CuExclusion::serving: return "serving";
    case CuExclusion::none: return "none";
    }
    return "?";
}

std::string to_string(D2dInterferenceExponent e)
{
    return e == D2dInterferenceExponent::alpha_d ? "alpha_d" : "alpha_b";
}

}  // namespace d2d

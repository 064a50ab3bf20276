#pragma once

#include "d2dcov/config.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace d2d {

enum class MethodSelection { analytic, montecarlo, both };

std::string to_string(MethodSelection m);
MethodSelection parse_method_selection(const std::string& text);

// Thrown for malformed experiment requests; the CLI maps it to a usage error.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SweepRange {
    std::string variable;  // numeric config key, or T_dB for the coverage experiment
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;
    // Inclusive grid lo, lo+step, ... <= hi (with a 1e-9 step slack).
    std::vector<double> values() const;
};

// Parses "lo:hi:step" for the given variable.
SweepRange parse_sweep_range(const std::string& variable, const std::string& text);

struct ExperimentSpec {
    std::string id;  // mode-prob | txpower-sweep | coverage | ase-sweep | beta-sweep | validate
    NetworkConfig config;
    std::vector<std::pair<std::string, std::string>> overrides;  // already applied to config, recorded
    std::optional<SweepRange> sweep;  // experiment default when absent
    MethodSelection method = MethodSelection::both;
    Mode mode = Mode::cellular;       // coverage experiment only
    double threshold_db = 0.0;        // beta-sweep evaluation threshold
    double gamma0_db = 0.0;           // ase-sweep working threshold
    std::uint64_t seed = 1;
    // MC realizations, or typical-UE draws for mode-prob and txpower-sweep; 0 picks the
    // experiment default (1e5 draws, 1e4 realizations for validate, 1e3 otherwise).
    std::size_t n = 0;
    int workers = 1;
    std::string output_path;          // empty: caller handles the text
    std::vector<std::string> criteria;  // validate: subset of AC ids, empty for all

    // Throws UsageError on unknown ids, empty sweeps or bad counts.
    void validate() const;
};

const std::vector<std::string>& experiment_ids();

// Sweep used when an ExperimentSpec does not give one.
SweepRange default_sweep(const std::string& experiment_id);

struct ExperimentOutput {
    std::string csv;  // metadata header, column header and one row per sweep point
    bool ok = true;   // false when a validate run has a failing criterion
};

// Runs the experiment and renders its CSV. Deterministic for a fixed spec.
ExperimentOutput render_experiment(const ExperimentSpec& spec, std::ostream& log);

// render_experiment plus an atomic write to spec.output_path (stdout text when empty).
// Returns 0 on success, 1 when validation found failures.
int run_experiment(const ExperimentSpec& spec, std::ostream& out, std::ostream& log);

}  // namespace d2d

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace d2d {

struct CriterionResult {
    std::string id;
    bool pass = false;
    std::string measured;   // headline measurement
    std::string tolerance;  // what was required
    std::string detail;     // supporting values, deterministic for a fixed seed
    double seconds = 0.0;   // wall time, not part of the report
};

struct AcceptanceOptions {
    std::uint64_t seed = 20240611;
    std::size_t realizations = 10000;  // cross-engine coverage campaign
    std::size_t typical_ues = 100000;  // mode and power estimates
    int workers = 1;
};

const std::vector<std::string>& acceptance_ids();

// Runs the named criteria in order, sharing expensive intermediate results.
// Throws std::invalid_argument for unknown ids.
class AcceptanceSuite {
public:
    explicit AcceptanceSuite(AcceptanceOptions options);
    ~AcceptanceSuite();
    CriterionResult run(const std::string& id);

private:
    struct Cache;
    AcceptanceOptions options_;
    std::unique_ptr<Cache> cache_;
};

// One line per criterion: "AC-n PASS|FAIL measured=... tolerance=... detail".
std::string format_criterion(const CriterionResult& r);

}  // namespace d2d

// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Usage: d2dcov_acceptance [--seed U64] [--n INT] [--workers INT] [AC-id ...]

#include "d2dcov/acceptance.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

int main(int argc, char** argv)
{
    d2d::AcceptanceOptions options;
    std::vector<std::string> ids;
    try {
        for (int i = 1; i < argc; ++i) {
            const std::string a = argv[i];
            auto value = [&]() -> std::string {
                if (i + 1 >= argc)
                    throw std::invalid_argument(a + " needs a value");
                return argv[++i];
            };
            if (a == "--seed")
                options.seed = std::stoull(value());
            else if (a == "--n")
                options.realizations = std::stoull(value());
            else if (a == "--workers")
                options.workers = std::stoi(value());
            else
                ids.push_back(a);
        }
        if (ids.empty())
            ids = d2d::acceptance_ids();
        d2d::AcceptanceSuite suite(options);
        bool all = true;
        for (const std::string& id : ids) {
            const d2d::CriterionResult r = suite.run(id);
            std::cout << d2d::format_criterion(r) << std::endl;
            char secs[32];
            std::snprintf(secs, sizeof secs, "%.1f", r.seconds);
            std::cerr << r.id << " runtime " << secs << " s" << std::endl;
            all = all && r.pass;
        }
        return all ? EXIT_SUCCESS : EXIT_FAILURE;
    } catch (const std::exception& e) {
        std::cerr << "acceptance: " << e.what() << "\n";
        return 2;
    }
}

#include "d2dcov/experiments.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace d2d;

namespace {

std::vector<std::string> data_lines(const std::string& csv)
{
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#')
            out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> f;
    std::istringstream in(line);
    std::string x;
    while (std::getline(in, x, ','))
        f.push_back(x);
    if (!line.empty() && line.back() == ',')
        f.emplace_back();
    return f;
}

}  // namespace

TEST_SUITE("cli_experiments")
{
    TEST_CASE("sweep ranges")
    {
        const SweepRange s = parse_sweep_range("beta_dbm", "-85:-45:5");
        CHECK(s.values().size() == 9);
        CHECK(parse_sweep_range("x", "5:1:1").values().empty());
        CHECK_THROWS_AS(parse_sweep_range("x", "1:2"), UsageError);
        CHECK_THROWS_AS(parse_sweep_range("x", "a:2:1"), UsageError);
    }

    TEST_CASE("spec validation")
    {
        ExperimentSpec spec;
        spec.id = "coverage";
        CHECK_NOTHROW(spec.validate());
        spec.id = "nonsense";
        CHECK_THROWS_AS(spec.validate(), UsageError);
        spec.id = "beta-sweep";
        spec.sweep = SweepRange{"beta_dbm", -45.0, -85.0, 5.0};
        CHECK_THROWS_AS(spec.validate(), UsageError);
        spec.sweep = SweepRange{"cu_exclusion", 0.0, 1.0, 1.0};
        CHECK_THROWS_AS(spec.validate(), UsageError);
        spec.sweep.reset();
        spec.workers = 0;
        CHECK_THROWS_AS(spec.validate(), UsageError);
        ExperimentSpec v;
        v.id = "validate";
        v.criteria = {"AC-42"};
        CHECK_THROWS_AS(v.validate(), UsageError);
        CHECK_THROWS_AS(parse_method_selection("magic"), UsageError);
    }

    TEST_CASE("empty sweep writes no file")
    {
        const auto path = std::filesystem::temp_directory_path() / "d2dcov_empty_sweep.csv";
        std::filesystem::remove(path);
        ExperimentSpec spec;
        spec.id = "txpower-sweep";
        spec.sweep = SweepRange{"p0_dbm", -60.0, -90.0, 5.0};
        spec.output_path = path.string();
        std::ostringstream out;
        std::ostringstream log;
        CHECK_THROWS_AS(run_experiment(spec, out, log), UsageError);
        CHECK_FALSE(std::filesystem::exists(path));
    }

    TEST_CASE("coverage CSV schema, precision and determinism")
    {
        ExperimentSpec spec;
        spec.id = "coverage";
        spec.mode = Mode::d2d;
        spec.sweep = SweepRange{"T_dB", -10.0, 10.0, 5.0};
        spec.n = 40;
        spec.seed = 5;
        std::ostringstream log;
        const ExperimentOutput a = render_experiment(spec, log);
        spec.workers = 2;
        const ExperimentOutput b = render_experiment(spec, log);
        CHECK(a.csv == b.csv);
        CHECK(a.csv.find('\r') == std::string::npos);
        CHECK(a.csv.find("# config lambda_u = 300") != std::string::npos);
        CHECK(a.csv.find("# seed = 5") != std::string::npos);
        const auto lines = data_lines(a.csv);
        REQUIRE(lines.size() == 6);
        CHECK(lines[0] == "T_dB,p_analytic,p_mc,ci,abs_diff");
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto f = split(lines[i]);
            REQUIRE(f.size() == 5);
            const double pa = std::stod(f[1]);
            const double pm = std::stod(f[2]);
            CHECK(std::stod(f[4]) == std::abs(pa - pm));
        }
    }

    TEST_CASE("method selection leaves unused columns empty")
    {
        ExperimentSpec spec;
        spec.id = "mode-prob";
        spec.method = MethodSelection::analytic;
        spec.sweep = SweepRange{"beta_dbm", -70.0, -60.0, 5.0};
        std::ostringstream log;
        const auto lines = data_lines(render_experiment(spec, log).csv);
        REQUIRE(lines.size() == 4);
        const auto f = split(lines[1]);
        REQUIRE(f.size() == 5);
        CHECK_FALSE(f[1].empty());
        CHECK(f[2].empty());
        CHECK(f[4].empty());
    }

    TEST_CASE("file output is written whole")
    {
        const auto path = std::filesystem::temp_directory_path() / "d2dcov_txpower.csv";
        ExperimentSpec spec;
        spec.id = "txpower-sweep";
        spec.n = 2000;
        spec.output_path = path.string();
        std::ostringstream out;
        std::ostringstream log;
        CHECK(run_experiment(spec, out, log) == 0);
        std::ifstream in(path);
        std::stringstream text;
        text << in.rdbuf();
        CHECK(data_lines(text.str()).size() == 8);
        CHECK_FALSE(std::filesystem::exists(path.string() + ".partial"));
        std::filesystem::remove(path);
    }

    TEST_CASE("validate report is deterministic")
    {
        ExperimentSpec spec;
        spec.id = "validate";
        spec.criteria = {"AC-1", "AC-8"};
        spec.n = 10;
        std::ostringstream log;
        const ExperimentOutput a = render_experiment(spec, log);
        const ExperimentOutput b = render_experiment(spec, log);
        CHECK(a.csv == b.csv);
        CHECK(a.ok);
        const auto lines = data_lines(a.csv);
        REQUIRE(lines.size() == 3);
        CHECK(lines[0] == "criterion,status,measured,tolerance,detail");
        CHECK(lines[1].rfind("AC-1,PASS,", 0) == 0);
    }
}

// Python bindings for the analytic engine, the simulator and the experiment runner.

#include "d2dcov/acceptance.hpp"
#include "d2dcov/config.hpp"
#include "d2dcov/coverage.hpp"
#include "d2dcov/equivalence.hpp"
#include "d2dcov/experiments.hpp"
#include "d2dcov/metrics.hpp"
#include "d2dcov/montecarlo.hpp"
#include "d2dcov/version.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;

namespace {

d2d::Mode parse_mode(const std::string& m)
{
    if (m == "cellular")
        return d2d::Mode::cellular;
    if (m == "d2d")
        return d2d::Mode::d2d;
    throw std::invalid_argument("mode must be 'cellular' or 'd2d', got '" + m + "'");
}

py::dict ase_dict(const d2d::AseResult& a)
{
    py::dict d;
    d["ase_cellular"] = a.ase_cellular;
    d["ase_d2d"] = a.ase_d2d;
    d["ase_sum"] = a.ase_sum;
    d["gamma0_db"] = a.gamma0_db;
    d["lambda_cellular"] = a.lambda_cellular;
    d["lambda_d2d"] = a.lambda_d2d;
    d["tail_bound_cellular"] = a.tail_bound_cellular;
    d["tail_bound_d2d"] = a.tail_bound_d2d;
    return d;
}

py::dict curve_dict(const d2d::CoverageCurve& c)
{
    py::dict d;
    d["thresholds_db"] = c.thresholds_db;
    d["probabilities"] = c.probabilities;
    d["ci_halfwidth"] = c.ci_halfwidth;
    return d;
}

}  // namespace

PYBIND11_MODULE(_d2dcov, m)
{
    m.doc() = "Coverage and ASE of D2D-underlaid uplink cellular networks";
    m.attr("__version__") = d2d::kVersion;

    py::class_<d2d::NetworkConfig>(m, "NetworkConfig")
        .def(py::init<>())
        .def("set", [](d2d::NetworkConfig& c, const std::string& key, const std::string& value) {
            d2d::apply_override(c, key, value);
        }, py::arg("key"), py::arg("value"))
        .def("entries", [](const d2d::NetworkConfig& c) { return d2d::config_entries(c); })
        .def("validate", &d2d::NetworkConfig::validate)
        .def_readwrite("lambda_b", &d2d::NetworkConfig::lambda_b)
        .def_readwrite("lambda_u", &d2d::NetworkConfig::lambda_u)
        .def_readwrite("p_b_dbm", &d2d::NetworkConfig::p_b_dbm)
        .def_readwrite("p_d_dbm", &d2d::NetworkConfig::p_d_dbm)
        .def_readwrite("p0_dbm", &d2d::NetworkConfig::p0_dbm)
        .def_readwrite("epsilon", &d2d::NetworkConfig::epsilon)
        .def_readwrite("alpha_b", &d2d::NetworkConfig::alpha_b)
        .def_readwrite("alpha_d", &d2d::NetworkConfig::alpha_d)
        .def_readwrite("a_b_db", &d2d::NetworkConfig::a_b_db)
        .def_readwrite("a_d_db", &d2d::NetworkConfig::a_d_db)
        .def_readwrite("sigma_b_db", &d2d::NetworkConfig::sigma_b_db)
        .def_readwrite("sigma_d_db", &d2d::NetworkConfig::sigma_d_db)
        .def_readwrite("beta_dbm", &d2d::NetworkConfig::beta_dbm)
        .def_readwrite("noise_bs_dbm", &d2d::NetworkConfig::noise_bs_dbm)
        .def_readwrite("noise_ue_dbm", &d2d::NetworkConfig::noise_ue_dbm)
        .def_readwrite("d2d_tx_activity", &d2d::NetworkConfig::d2d_tx_activity)
        .def_readwrite("p_max_dbm", &d2d::NetworkConfig::p_max_dbm);

    m.def("load_config", [](const std::string& path) { return d2d::load_config(path); }, py::arg("path"));
    m.def("cell_radius", py::overload_cast<const d2d::NetworkConfig&>(&d2d::cell_radius), py::arg("config"),
          "Cellular-mode disk radius t in metres.");
    m.def("mode_probability", [](const d2d::NetworkConfig& c) {
        const d2d::ModeSplit s = d2d::mode_probability(c);
        py::dict d;
        d["q"] = s.q;
        d["lambda_c_km2"] = s.lambda_c * 1e6;
        d["lambda_d_km2"] = s.lambda_d * 1e6;
        return d;
    }, py::arg("config"));
    m.def("cu_mean_tx_power", [](const d2d::NetworkConfig& c) { return d2d::cu_mean_tx_power(c); },
          py::arg("config"), "Mean cellular-UE transmit power in mW.");

    py::class_<d2d::AnalyticModel>(m, "AnalyticModel")
        .def(py::init([](const d2d::NetworkConfig& c) { return new d2d::AnalyticModel(c); }), py::arg("config"))
        .def_property_readonly("cell_radius", &d2d::AnalyticModel::cell_radius)
        .def_property_readonly("d2d_tx_density_km2",
                               [](const d2d::AnalyticModel& a) { return a.d2d_tx_density() * 1e6; })
        .def("coverage", [](const d2d::AnalyticModel& a, const std::string& mode,
                            const std::vector<double>& thresholds_db) {
            return d2d::analytic_curve(a, parse_mode(mode), thresholds_db).probabilities;
        }, py::arg("mode"), py::arg("thresholds_db"), py::call_guard<py::gil_scoped_release>())
        .def("ase", [](const d2d::AnalyticModel& a, double gamma0_db) {
            d2d::AseResult r;
            {
                py::gil_scoped_release release;
                r = d2d::analytic_ase(a, gamma0_db);
            }
            return ase_dict(r);
        }, py::arg("gamma0_db") = 0.0);

    m.def("run_campaign", [](const d2d::NetworkConfig& c, std::uint64_t seed, std::size_t n,
                             std::vector<double> thresholds_db, double gamma0_db, int workers) {
        d2d::CampaignOptions o;
        o.thresholds_db = std::move(thresholds_db);
        o.gamma0_db = gamma0_db;
        o.workers = workers;
        o.keep_samples = false;
        d2d::CampaignResult r;
        {
            py::gil_scoped_release release;
            r = d2d::run_campaign(c, seed, n, o);
        }
        py::dict d;
        d["cellular"] = curve_dict(r.cellular);
        d["d2d"] = curve_dict(r.d2d);
        d["q"] = r.mode_split.q;
        d["mean_cu_power_mw"] = r.mean_cu_power_mw;
        d["ase"] = ase_dict(r.ase);
        d["d2d_link_density_km2"] = r.d2d_link_density_km2;
        d["realizations"] = r.realizations;
        d["warnings"] = r.warnings;
        return d;
    }, py::arg("config"), py::arg("seed"), py::arg("n"), py::arg("thresholds_db") = std::vector<double>{},
       py::arg("gamma0_db") = 0.0, py::arg("workers") = 1);

    m.def("experiment_ids", &d2d::experiment_ids);
    m.def("render_experiment", [](const std::string& id, const d2d::NetworkConfig& c, std::uint64_t seed,
                                  std::size_t n, const std::string& method) {
        d2d::ExperimentSpec spec;
        spec.id = id;
        spec.config = c;
        spec.seed = seed;
        spec.n = n;
        spec.method = d2d::parse_method_selection(method);
        spec.validate();
        std::ostringstream log;
        py::gil_scoped_release release;
        return d2d::render_experiment(spec, log).csv;
    }, py::arg("id"), py::arg("config"), py::arg("seed") = 1, py::arg("n") = 0, py::arg("method") = "both",
       "CSV text of one experiment, with its default sweep.");

    m.def("run_acceptance", [](const std::vector<std::string>& ids, std::uint64_t seed, std::size_t realizations) {
        d2d::AcceptanceOptions o;
        o.seed = seed;
        o.realizations = realizations;
        d2d::AcceptanceSuite suite(o);
        std::vector<std::string> lines;
        py::gil_scoped_release release;
        for (const std::string& id : ids)
            lines.push_back(d2d::format_criterion(suite.run(id)));
        return lines;
    }, py::arg("ids"), py::arg("seed") = 20240611, py::arg("realizations") = 10000);
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "corral/config.hpp"
#include "corral/core.hpp"
#include "corral/corral_tsallis.hpp"
#include "corral/harness.hpp"
#include "corral/output.hpp"

namespace py = pybind11;
using corral::Vec;

namespace {

py::dict normalization(const corral::NormalizationResult& r, const char* multiplier) {
    py::dict d;
    d["weights"] = r.weights;
    d[multiplier] = r.nu;
    return d;
}

py::dict trace_dict(const corral::RunTrace& r) {
    py::list rows;
    for (const auto& row : r.rows) {
        py::dict d;
        d["t"] = row.t;
        d["chosen"] = row.chosen;
        d["arm"] = row.arm;
        d["inst_regret"] = row.inst_regret;
        d["cum_regret"] = row.cum_regret;
        d["weights"] = row.weights;
        d["pulls"] = row.pulls;
        rows.append(d);
    }
    py::dict d;
    d["run_id"] = r.run_id;
    d["seed"] = r.seed;
    d["rows"] = rows;
    d["pulls"] = r.pulls;
    d["group_pulls"] = r.group_pulls;
    d["final_regret"] = r.final_regret;
    d["rounds"] = r.rounds;
    return d;
}

py::dict result_dict(const corral::ExperimentResult& result) {
    py::list runs;
    for (const auto& r : result.runs) {
        runs.append(trace_dict(r));
    }
    py::list summary;
    for (const auto& row : result.summary) {
        py::dict d;
        d["t"] = row.t;
        d["mean_regret"] = row.mean_regret;
        d["std_regret"] = row.std_regret;
        d["mean_pulls"] = row.mean_pulls;
        summary.append(d);
    }
    py::dict d;
    d["runs"] = runs;
    d["summary"] = summary;
    return d;
}

corral::ExperimentConfig with_overrides(const std::string& config_json, std::optional<std::size_t> runs,
                                        std::optional<std::size_t> horizon) {
    corral::ExperimentConfig cfg = corral::parse_config(config_json);
    if (runs) {
        cfg.runs = *runs;
    }
    if (horizon) {
        cfg.horizon = *horizon;
    }
    corral::validate_config(cfg);
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Corralling bandit simulations";

    py::register_exception<corral::ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("solve_shift", [](const Vec& g, const Vec& eta) {
        return normalization(corral::solve_shift(g, eta), "nu");
    }, py::arg("g"), py::arg("eta"));
    m.def("ftrl_step", [](const Vec& loss, const Vec& eta) {
        return normalization(corral::ftrl_step(loss, eta), "nu");
    }, py::arg("cumulative_loss"), py::arg("eta"));
    m.def("omd_step", [](const Vec& w, const Vec& ell, const Vec& eta, const std::vector<std::size_t>& rescale,
                         double beta) {
        const corral::OmdResult r = corral::omd_step(w, ell, eta, rescale, beta);
        py::dict d;
        d["weights"] = r.weights;
        d["mu"] = r.mu;
        d["transformed_loss"] = r.transformed_loss;
        return d;
    }, py::arg("w"), py::arg("ell"), py::arg("eta"), py::arg("rescale"), py::arg("beta"));
    m.def("tsallis_potential", [](const Vec& w, const Vec& eta) { return corral::tsallis_potential(w, eta); },
          py::arg("w"), py::arg("eta"));
    m.def("bregman_divergence", [](const Vec& x, const Vec& y, const Vec& eta) {
        return corral::bregman_divergence(x, y, eta);
    }, py::arg("x"), py::arg("y"), py::arg("eta"));
    m.def("solve_log_barrier", [](const Vec& w, const Vec& loss, const Vec& eta) {
        return normalization(corral::solve_log_barrier(w, loss, eta), "lam");
    }, py::arg("w"), py::arg("loss"), py::arg("eta"));
    m.def("lower_median", [](const Vec& v) { return corral::lower_median(v); }, py::arg("values"));
    m.def("mix_distribution", [](const Vec& w, std::size_t horizon) {
        return corral::mix_distribution(w, horizon);
    }, py::arg("w"), py::arg("horizon"));
    m.def("theory_beta", &corral::theory_beta, py::arg("horizon"));
    m.def("rho_ladder", &corral::rho_ladder, py::arg("learners"), py::arg("horizon"));

    m.def("resolve_config", [](const std::string& config_json) {
        return corral::config_to_json(corral::parse_config(config_json));
    }, py::arg("config_json"), "Validates a JSON configuration and returns it with defaults filled in.");
    m.def("reference_lines", [](const std::string& config_json, const std::vector<std::size_t>& grid) {
        const auto rows = corral::reference_lines(corral::parse_config(config_json), grid);
        py::list out;
        for (const auto& row : rows) {
            py::dict d;
            d["t"] = row.t;
            d["red"] = row.red;
            d["green"] = std::isnan(row.green) ? py::object(py::none()) : py::object(py::float_(row.green));
            d["red_ucbc"] = row.red_ucbc;
            out.append(d);
        }
        return out;
    }, py::arg("config_json"), py::arg("t_grid"));
    m.def("run_experiment", [](const std::string& config_json, std::optional<std::size_t> runs,
                               std::optional<std::size_t> horizon, std::size_t threads) {
        const corral::ExperimentConfig cfg = with_overrides(config_json, runs, horizon);
        corral::ExperimentResult result;
        {
            py::gil_scoped_release release;
            result = corral::run_experiment(cfg, threads);
        }
        return result_dict(result);
    }, py::arg("config_json"), py::arg("runs") = py::none(), py::arg("horizon") = py::none(),
       py::arg("threads") = 0);
    m.def("run_to_directory", [](const std::string& config_json, const std::filesystem::path& out,
                                 std::optional<std::size_t> runs, std::optional<std::size_t> horizon,
                                 std::size_t threads) {
        const corral::ExperimentConfig cfg = with_overrides(config_json, runs, horizon);
        py::gil_scoped_release release;
        corral::write_outputs(out, cfg, corral::run_experiment(cfg, threads));
    }, py::arg("config_json"), py::arg("out"), py::arg("runs") = py::none(), py::arg("horizon") = py::none(),
       py::arg("threads") = 0);
}

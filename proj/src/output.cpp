#include "corral/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "corral/corral_tsallis.hpp"
#include "json.hpp"

namespace corral {

using nlohmann::ordered_json;

std::string format_number(double value) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (res.ec != std::errc()) {
        throw std::runtime_error("format_number: conversion failed");
    }
    return std::string(buf.data(), res.ptr);
}

void write_trace_csv(std::ostream& out, std::span<const RunTrace> runs, std::size_t learners) {
    out << "run_id,t,chosen,inst_regret,cum_regret";
    for (std::size_t i = 1; i <= learners; ++i) {
        out << ",w_" << i;
    }
    out << '\n';
    for (const RunTrace& run : runs) {
        for (const TraceRow& row : run.rows) {
            out << run.run_id << ',' << row.t << ',' << row.chosen + 1 << ','
                << format_number(row.inst_regret) << ',' << format_number(row.cum_regret);
            for (double w : row.weights) {
                out << ',' << format_number(w);
            }
            out << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows, std::size_t learners) {
    out << "t,mean_regret,std_regret";
    for (std::size_t i = 1; i <= learners; ++i) {
        out << ",mean_pulls_" << i;
    }
    out << '\n';
    for (const SummaryRow& row : rows) {
        out << row.t << ',' << format_number(row.mean_regret) << ',' << format_number(row.std_regret);
        for (double p : row.mean_pulls) {
            out << ',' << format_number(p);
        }
        out << '\n';
    }
}

void write_reference_csv(std::ostream& out, std::span<const ReferenceRow> rows) {
    out << "t,red,green,red_ucbc\n";
    for (const ReferenceRow& row : rows) {
        out << row.t << ',' << format_number(row.red) << ',';
        if (std::isfinite(row.green)) {
            out << format_number(row.green);
        }
        out << ',' << format_number(row.red_ucbc) << '\n';
    }
}

std::string meta_json(const ExperimentConfig& cfg, const ExperimentResult& result) {
    ordered_json j;
    j["config"] = ordered_json::parse(config_to_json(cfg, -1));

    const ResolvedConstants rc = resolve_constants(cfg);
    ordered_json derived;
    derived["learner_count"] = cfg.learners.size();
    switch (cfg.corraller) {
        case CorrallerKind::Tsallis:
            derived["beta"] = rc.beta;
            derived["eta_init"] = rc.eta_init;
            derived["rho_ladder"] = rho_ladder(cfg.learners.size(), cfg.horizon);
            derived["mixing"] = 1.0 / (static_cast<double>(cfg.horizon) *
                                       static_cast<double>(cfg.learners.size()));
            break;
        case CorrallerKind::UcbC:
        case CorrallerKind::SingleCopyUcbC:
            derived["copies"] = rc.copies;
            derived["regret_bound"] = "sqrt(alpha * k * t * ln(max(t, 2)))";
            break;
        case CorrallerKind::LogBarrier:
            derived["eta_init"] = rc.lb_eta;
            derived["rate_factor"] = rc.lb_rate_factor;
            derived["gamma"] = rc.lb_gamma;
            derived["initial_rho"] = 2.0 * static_cast<double>(cfg.learners.size());
            break;
    }
    derived["ucb_width"] = "sqrt(4 rho ln t / n) + 4 rho ln t / (3 n), rho = 1 until restart";
    derived["seed_derivation"] = "splitmix64 counter split: run stream 0, latent stream 1";
    j["derived"] = derived;

    ordered_json runs = ordered_json::array();
    for (const RunTrace& r : result.runs) {
        ordered_json rj;
        rj["run_id"] = r.run_id;
        rj["seed"] = r.seed;
        rj["final_regret"] = r.final_regret;
        rj["pulls"] = r.pulls;
        rj["group_pulls"] = r.group_pulls;
        runs.push_back(rj);
    }
    j["runs"] = runs;

    const std::array<std::size_t, 1> final_t{cfg.horizon};
    const ReferenceRow ref = reference_lines(cfg, final_t).front();
    ordered_json rj;
    rj["t"] = ref.t;
    rj["red"] = ref.red;
    rj["green"] = std::isfinite(ref.green) ? ordered_json(ref.green) : ordered_json(nullptr);
    rj["red_ucbc"] = ref.red_ucbc;
    j["reference"] = rj;
    return j.dump(2) + "\n";
}

void write_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                   const ExperimentResult& result) {
    std::filesystem::create_directories(dir);
    const std::size_t k = cfg.learners.size();
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) {
            throw std::runtime_error("cannot write " + (dir / name).string());
        }
        return f;
    };
    {
        auto f = open("trace.csv");
        write_trace_csv(f, result.runs, k);
    }
    {
        auto f = open("summary.csv");
        write_summary_csv(f, result.summary, k);
    }
    {
        std::vector<std::size_t> grid;
        for (const SummaryRow& row : result.summary) {
            grid.push_back(row.t);
        }
        auto f = open("reference.csv");
        write_reference_csv(f, reference_lines(cfg, grid));
    }
    {
        auto f = open("meta.json");
        f << meta_json(cfg, result);
    }
}

}  // namespace corral

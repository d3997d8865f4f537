#pragma once

// CSV and JSON emission. Numbers use the shortest decimal form that
// round-trips to the same double.

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include "corral/config.hpp"
#include "corral/harness.hpp"
#include "corral/trace.hpp"

namespace corral {

std::string format_number(double value);

/// Header run_id,t,chosen,inst_regret,cum_regret,w_1..w_K. Learner indices
/// are written 1-based to match the column labels.
void write_trace_csv(std::ostream& out, std::span<const RunTrace> runs, std::size_t learners);

/// Header t,mean_regret,std_regret,mean_pulls_1..mean_pulls_K.
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows, std::size_t learners);

/// Header t,red,green,red_ucbc; an undefined green line is left empty.
void write_reference_csv(std::ostream& out, std::span<const ReferenceRow> rows);

/// Resolved configuration, derived constants, per-run seeds, pulls and
/// final regrets.
std::string meta_json(const ExperimentConfig& cfg, const ExperimentResult& result);

/// Writes trace.csv, summary.csv, reference.csv and meta.json into `dir`.
void write_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                   const ExperimentResult& result);

}  // namespace corral

#pragma once

// Seeded Monte-Carlo execution of an experiment configuration, summary
// statistics over runs and the reference regret lines.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "corral/config.hpp"
#include "corral/environments.hpp"
#include "corral/learners.hpp"
#include "corral/trace.hpp"

namespace corral {

/// Stream ids for derive_seed.
inline constexpr std::uint64_t kRunStream = 0;
inline constexpr std::uint64_t kLatentStream = 1;

struct BuiltEnvironment {
    EnvironmentPtr env;
    /// Schedule of the scripted learner, when the environment has one.
    std::optional<std::vector<SchedulePhase>> schedule;
    /// Latent draw of lower-bound environments.
    std::optional<double> lb_alpha;
    std::optional<int> lb_beta;
};

/// `latent` is consumed only by lower-bound environments without a fixed draw.
BuiltEnvironment build_environment(const ExperimentConfig& cfg, Rng& latent);

std::vector<LearnerPtr> build_learners(const ExperimentConfig& cfg, const BuiltEnvironment& env);

/// Constants after defaults are applied.
struct ResolvedConstants {
    double beta = 1.0;
    Vec eta_init;
    std::size_t copies = 1;
    double lb_eta = 0.0;
    double lb_rate_factor = 1.0;
    double lb_gamma = 0.0;
};

ResolvedConstants resolve_constants(const ExperimentConfig& cfg);

/// One seeded run; child seeds derive from (master_seed, run_id).
RunTrace run_single(const ExperimentConfig& cfg, std::size_t run_id);

struct SummaryRow {
    std::size_t t = 0;
    double mean_regret = 0.0;
    /// Sample standard deviation (0 for a single run).
    double std_regret = 0.0;
    Vec mean_pulls;
};

/// Aggregates runs row by row; all runs must share the snapshot grid.
std::vector<SummaryRow> summarize(std::span<const RunTrace> runs);

struct ExperimentResult {
    std::vector<RunTrace> runs;
    std::vector<SummaryRow> summary;
};

/// Runs cfg.runs seeded simulations on `threads` workers (0 = hardware
/// concurrency). Output is ordered by run id and independent of `threads`.
/// A failing run aborts the experiment with its run id and seed in the message.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t threads = 0);

// --- reference lines ----------------------------------------------------------

/// 4 sqrt(K T) + Rbar_1(T).
double red_line(std::size_t learners, double t, std::size_t best_arms, double alpha);

/// 4 sum_{i != best} k_i ln t / Delta_i + Rbar_1(t). Throws
/// std::invalid_argument if some Delta_i <= 0.
double green_line(std::span<const std::size_t> arms, std::span<const double> gaps,
                  std::size_t best, double t, double alpha);

/// Red line with the best learner's bound multiplied by ln t, matching the
/// log factor in front of the best learner's regret in the UCB-C bound.
double ucbc_red_line(std::size_t learners, double t, std::size_t best_arms, double alpha);

/// Best learner (highest best-arm mean at t = 1) and gaps Delta_i to it.
struct GapProfile {
    std::size_t best = 0;
    std::vector<std::size_t> arms;
    Vec gaps;
};

GapProfile gap_profile(const Environment& env);

struct ReferenceRow {
    std::size_t t = 0;
    double red = 0.0;
    /// NaN when some gap is not positive.
    double green = 0.0;
    double red_ucbc = 0.0;
};

/// Reference lines for the configuration's environment (lower-bound
/// environments use the latent draw of run 0).
std::vector<ReferenceRow> reference_lines(const ExperimentConfig& cfg,
                                          std::span<const std::size_t> t_grid);

}  // namespace corral

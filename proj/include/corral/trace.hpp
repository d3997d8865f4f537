#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "corral/core.hpp"
#include "corral/environments.hpp"

namespace corral {

struct TraceRow {
    std::size_t t = 0;
    std::size_t chosen = 0;
    std::size_t arm = 0;
    double inst_regret = 0.0;
    double cum_regret = 0.0;
    Vec weights;
    std::vector<std::size_t> pulls;
};

struct RunTrace {
    std::size_t run_id = 0;
    std::uint64_t seed = 0;
    std::vector<TraceRow> rows;
    /// Rounds in which each learner was played.
    std::vector<std::size_t> pulls;
    /// Times each learner was selected by the corraller; equals `pulls`
    /// except for boosted corrallers, where one selection plays every copy.
    std::vector<std::size_t> group_pulls;
    double final_regret = 0.0;
    std::size_t rounds = 0;
};

/// Accumulates pseudo-regret and pull counts round by round and keeps a
/// snapshot row every `snapshot_every` rounds plus the final round.
class RoundRecorder {
public:
    RoundRecorder(const Environment& env, std::size_t horizon, std::size_t snapshot_every);

    /// Record round `t` (1-based, consecutive). An empty `weights` span makes
    /// the snapshot use the empirical distribution of plays.
    void record(std::size_t t, std::size_t learner, std::size_t arm, std::span<const double> weights);

    void count_selection(std::size_t learner) { ++trace_.group_pulls.at(learner); }

    std::size_t rounds() const { return trace_.rounds; }
    double cumulative_regret() const { return trace_.final_regret; }
    std::span<const std::size_t> pulls() const { return trace_.pulls; }

    RunTrace finish() &&;

private:
    const Environment& env_;
    std::size_t horizon_;
    std::size_t snapshot_every_;
    RunTrace trace_;
};

}  // namespace corral

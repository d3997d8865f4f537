#pragma once

// Median-of-copies wrapper: several independent copies of one base learner
// are always played together, and the group is scored by the lower median
// of the copies' empirical average rewards.

#include <cstddef>
#include <vector>

#include "corral/environments.hpp"
#include "corral/learners.hpp"
#include "corral/rng.hpp"
#include "corral/trace.hpp"

namespace corral {

/// max(3, ceil(2 ln T)).
std::size_t copies_for_horizon(std::size_t horizon);

class BoostedLearner {
public:
    BoostedLearner(const Learner& prototype, std::size_t copies);

    BoostedLearner(const BoostedLearner& other);
    BoostedLearner& operator=(const BoostedLearner& other);
    BoostedLearner(BoostedLearner&&) noexcept = default;
    BoostedLearner& operator=(BoostedLearner&&) noexcept = default;

    /// Plays copies in order, one environment round each, starting at round
    /// `t`; stops early after `budget` rounds. Returns the rounds consumed.
    std::size_t play(const Environment& env, std::size_t learner, std::size_t t,
                     std::size_t budget, Rng& rng, RoundRecorder* recorder = nullptr);

    /// Lower median of per-copy empirical average rewards. Throws
    /// std::logic_error while some copy is unplayed.
    double median_mean() const;

    /// Lower median of per-copy cumulative rewards.
    double median_cumulative_reward() const;

    std::size_t copy_count() const { return copies_.size(); }
    /// Completed group plays (every copy played).
    std::size_t pulls() const { return group_pulls_; }
    std::span<const std::size_t> copy_pulls() const { return copy_pulls_; }
    std::span<const double> copy_rewards() const { return cum_reward_; }
    const Learner& copy(std::size_t s) const { return *copies_.at(s); }

private:
    std::vector<LearnerPtr> copies_;
    Vec cum_reward_;
    std::vector<std::size_t> copy_pulls_;
    std::size_t group_pulls_ = 0;
};

}  // namespace corral

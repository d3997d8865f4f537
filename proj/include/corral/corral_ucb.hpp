#pragma once

// UCB-C: an upper-confidence meta-strategy over boosted base learners whose
// confidence widths account for each learner's own regret bound.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "corral/boosting.hpp"
#include "corral/environments.hpp"
#include "corral/learners.hpp"
#include "corral/rng.hpp"
#include "corral/trace.hpp"

namespace corral {

/// Worst-case regret bound sqrt(alpha * k * t * ln(max(t, 2))).
double default_regret_bound(double alpha, std::size_t arms, double t);

/// (sqrt(2 Rbar) + sqrt(2 n ln t)) / n for n = pulls of the group; +inf when n = 0.
double ucbc_bonus(double regret_bound, std::size_t pulls, double log_t);

/// argmax of medians + bonuses; ties go to the lowest index.
std::size_t ucbc_select(std::span<const double> medians, std::span<const double> bonuses);

struct UcbcOptions {
    /// One copy per learner instead of the boosted group.
    bool single_copy = false;
    /// Copies per learner; defaults to copies_for_horizon(T).
    std::optional<std::size_t> copies;
    /// Constant of the default regret bound.
    double alpha = 1.0;
    std::size_t snapshot_every = 1;
};

class UcbcCorraller {
public:
    UcbcCorraller(std::span<const LearnerPtr> prototypes, std::size_t horizon, UcbcOptions opts);

    std::size_t copies_per_learner() const { return copies_; }
    std::span<const BoostedLearner> groups() const { return groups_; }

    /// Current selection values median + bonus at round t.
    Vec scores(std::size_t t) const;

    RunTrace run(const Environment& env, Rng& rng);

private:
    std::vector<BoostedLearner> groups_;
    std::vector<std::size_t> arms_;
    std::size_t horizon_;
    std::size_t copies_;
    UcbcOptions opts_;
};

RunTrace ucbc_run(std::span<const LearnerPtr> prototypes, const Environment& env,
                  std::size_t horizon, Rng& rng, const UcbcOptions& opts = {});

}  // namespace corral

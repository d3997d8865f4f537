#include "corral/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corral {

std::size_t copies_for_horizon(std::size_t horizon) {
    const double raw = std::ceil(2.0 * std::log(static_cast<double>(std::max<std::size_t>(horizon, 1))));
    return std::max<std::size_t>(3, static_cast<std::size_t>(raw));
}

BoostedLearner::BoostedLearner(const Learner& prototype, std::size_t copies)
    : cum_reward_(copies, 0.0), copy_pulls_(copies, 0) {
    if (copies == 0) {
        throw std::invalid_argument("BoostedLearner: at least one copy required");
    }
    copies_.reserve(copies);
    for (std::size_t s = 0; s < copies; ++s) {
        copies_.push_back(prototype.clone());
    }
}

BoostedLearner::BoostedLearner(const BoostedLearner& other)
    : cum_reward_(other.cum_reward_),
      copy_pulls_(other.copy_pulls_),
      group_pulls_(other.group_pulls_) {
    copies_.reserve(other.copies_.size());
    for (const auto& c : other.copies_) {
        copies_.push_back(c->clone());
    }
}

BoostedLearner& BoostedLearner::operator=(const BoostedLearner& other) {
    if (this != &other) {
        BoostedLearner tmp(other);
        *this = std::move(tmp);
    }
    return *this;
}

std::size_t BoostedLearner::play(const Environment& env, std::size_t learner, std::size_t t,
                                 std::size_t budget, Rng& rng, RoundRecorder* recorder) {
    const std::size_t n = std::min(budget, copies_.size());
    for (std::size_t s = 0; s < n; ++s) {
        Learner& copy = *copies_[s];
        const std::size_t arm = copy.propose(rng);
        const double reward = env.sample(learner, arm, t + s, rng);
        copy.update(direct_feedback(arm, reward), rng);
        cum_reward_[s] += reward;
        ++copy_pulls_[s];
        if (recorder != nullptr) {
            recorder->record(t + s, learner, arm, {});
        }
    }
    if (n == copies_.size()) {
        ++group_pulls_;
    }
    return n;
}

double BoostedLearner::median_mean() const {
    Vec means(copies_.size());
    for (std::size_t s = 0; s < copies_.size(); ++s) {
        if (copy_pulls_[s] == 0) {
            throw std::logic_error("BoostedLearner::median_mean: unplayed copy");
        }
        means[s] = cum_reward_[s] / static_cast<double>(copy_pulls_[s]);
    }
    return lower_median(means);
}

double BoostedLearner::median_cumulative_reward() const {
    return lower_median(cum_reward_);
}

}  // namespace corral

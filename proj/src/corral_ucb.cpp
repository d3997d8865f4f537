#include "corral/corral_ucb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace corral {

double default_regret_bound(double alpha, std::size_t arms, double t) {
    if (t <= 0.0) {
        return 0.0;
    }
    return std::sqrt(alpha * static_cast<double>(arms) * t * std::log(std::max(t, 2.0)));
}

double ucbc_bonus(double regret_bound, std::size_t pulls, double log_t) {
    if (pulls == 0) {
        return std::numeric_limits<double>::infinity();
    }
    const double n = static_cast<double>(pulls);
    return (std::sqrt(2.0 * regret_bound) + std::sqrt(2.0 * n * log_t)) / n;
}

std::size_t ucbc_select(std::span<const double> medians, std::span<const double> bonuses) {
    if (medians.size() != bonuses.size() || medians.empty()) {
        throw std::invalid_argument("ucbc_select: size mismatch");
    }
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < medians.size(); ++i) {
        const double value = medians[i] + bonuses[i];
        if (value > best_value) {
            best_value = value;
            best = i;
        }
    }
    return best;
}

UcbcCorraller::UcbcCorraller(std::span<const LearnerPtr> prototypes, std::size_t horizon,
                             UcbcOptions opts)
    : horizon_(horizon), opts_(opts) {
    if (prototypes.empty()) {
        throw std::invalid_argument("UcbcCorraller: no learners");
    }
    copies_ = opts_.single_copy ? 1 : opts_.copies.value_or(copies_for_horizon(horizon));
    if (copies_ == 0) {
        throw std::invalid_argument("UcbcCorraller: copy count must be positive");
    }
    if (horizon < prototypes.size() * copies_) {
        throw std::invalid_argument("UcbcCorraller: horizon shorter than the initial sweep");
    }
    groups_.reserve(prototypes.size());
    for (const auto& p : prototypes) {
        groups_.emplace_back(*p, copies_);
        arms_.push_back(p->arm_count());
    }
}

Vec UcbcCorraller::scores(std::size_t t) const {
    const double log_t = std::log(static_cast<double>(std::max<std::size_t>(t, 2)));
    Vec out(groups_.size());
    for (std::size_t i = 0; i < groups_.size(); ++i) {
        const std::size_t n = groups_[i].pulls();
        if (n == 0) {
            out[i] = std::numeric_limits<double>::infinity();
            continue;
        }
        const double rbar = default_regret_bound(opts_.alpha, arms_[i], static_cast<double>(n));
        out[i] = groups_[i].median_mean() + ucbc_bonus(rbar, n, log_t);
    }
    return out;
}

RunTrace UcbcCorraller::run(const Environment& env, Rng& rng) {
    if (env.learner_count() != groups_.size()) {
        throw std::invalid_argument("UcbcCorraller::run: learner count mismatch");
    }
    RoundRecorder recorder(env, horizon_, opts_.snapshot_every);
    std::size_t t = 1;
    auto play = [&](std::size_t i) {
        recorder.count_selection(i);
        t += groups_[i].play(env, i, t, horizon_ - t + 1, rng, &recorder);
    };

    for (std::size_t i = 0; i < groups_.size() && t <= horizon_; ++i) {
        play(i);
    }
    while (t <= horizon_) {
        const Vec s = scores(t);
        play(static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin()));
    }
    return std::move(recorder).finish();
}

RunTrace ucbc_run(std::span<const LearnerPtr> prototypes, const Environment& env,
                  std::size_t horizon, Rng& rng, const UcbcOptions& opts) {
    UcbcCorraller corraller(prototypes, horizon, opts);
    return corraller.run(env, rng);
}

}  // namespace corral

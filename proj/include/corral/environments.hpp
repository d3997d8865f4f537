#pragma once

// Reward generators indexed by (learner, arm, round). Rounds are 1-based.

#include <cstddef>
#include <memory>
#include <vector>

#include "corral/learners.hpp"
#include "corral/rng.hpp"

namespace corral {

class Environment {
public:
    virtual ~Environment() = default;

    virtual std::size_t learner_count() const = 0;
    virtual std::size_t arm_count(std::size_t learner) const = 0;
    virtual double mean(std::size_t learner, std::size_t arm, std::size_t t) const = 0;
    virtual double sample(std::size_t learner, std::size_t arm, std::size_t t, Rng& rng) const = 0;

    /// max over (i, j) of mean(i, j, t).
    virtual double best_mean(std::size_t t) const;

    /// Per-round benchmark the pseudo-regret is measured against. Defaults to
    /// best_mean; scripted lower-bound environments override it with the mean
    /// of the best learner, since their best arm is not reachable by any
    /// single learner at every round.
    virtual double comparator_mean(std::size_t t) const { return best_mean(t); }
};

using EnvironmentPtr = std::shared_ptr<const Environment>;

/// Stationary environment with independent arms, each either Bernoulli or
/// a point mass at its mean.
class StochasticEnvironment final : public Environment {
public:
    struct Arm {
        double mean = 0.0;
        bool deterministic = false;
    };

    explicit StochasticEnvironment(std::vector<std::vector<Arm>> arms);

    std::size_t learner_count() const override { return arms_.size(); }
    std::size_t arm_count(std::size_t learner) const override { return arms_.at(learner).size(); }
    double mean(std::size_t learner, std::size_t arm, std::size_t t) const override;
    double sample(std::size_t learner, std::size_t arm, std::size_t t, Rng& rng) const override;
    double best_mean(std::size_t /*t*/) const override { return best_; }
    double comparator_mean(std::size_t /*t*/) const override { return comparator_; }

    /// Override the regret benchmark (defaults to the best arm mean).
    void set_comparator(double value) { comparator_ = value; }

private:
    std::vector<std::vector<Arm>> arms_;
    double best_ = 0.0;
    double comparator_ = 0.0;
};

struct GapInstanceConfig {
    double base_reward = 0.5;
    double in_gap = 0.01;
    double out_gap = 0.19;
    double low_reward = 0.2;
    std::size_t arms_best = 10;
    std::size_t arms_other = 5;
    std::size_t learners = 6;
};

/// Learner 0 holds the best arm (base + in + out, then low_reward arms);
/// every other learner has one arm at base + in and the rest at base.
std::shared_ptr<StochasticEnvironment> make_gap_instance(const GapInstanceConfig& cfg);

/// Learner 0: {Bernoulli(mu1), point mass mu2}; learner 1: point mass mu3.
/// Requires mu1 > mu3 > mu2.
std::shared_ptr<StochasticEnvironment> make_single_copy_lb_env(double mu1, double mu2, double mu3);

/// Latent draw and derived parameters of the alternating lower-bound construction.
struct AlternatingLowerBound {
    std::shared_ptr<StochasticEnvironment> env;
    /// Schedule for learner 1 (arm 0 has mean mu2, arm 1 has mean mu3).
    std::vector<SchedulePhase> schedule;
    double alpha = 0.0;
    int beta = 0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double mu3 = 0.0;
    std::size_t alternation_rounds = 0;
};

/// Learner 0 is a single Bernoulli(mu1) arm; learner 1 is scripted over
/// {mu2, mu3}: with beta = 1 it alternates forever, with beta = 0 it
/// alternates for ceil(T^(1-alpha)) plays and then commits to mu2.
/// Requires mu2 > mu1 > (mu2 + mu3) / 2.
AlternatingLowerBound make_alternating_lb_env(double mu1, double mu2, double mu3, double alpha,
                                              int beta, std::size_t horizon);

/// Successive-elimination parameterization: Delta = T^(-(1-alpha)/2),
/// mu3 = mu2 - Delta, mu1 = mu2 - Delta / 4.
AlternatingLowerBound make_formal_alternating_lb_env(double mu2, double alpha, int beta,
                                                     std::size_t horizon);

/// Draws alpha ~ Unif[0, 1] and beta ~ Ber(1/2) from `latent`.
AlternatingLowerBound draw_formal_alternating_lb_env(double mu2, std::size_t horizon, Rng& latent);

/// Deterministic playback of a loss table indexed [round][learner][arm]. Rows
/// are reused cyclically past the end of the table.
class AdversarialEnvironment final : public Environment {
public:
    explicit AdversarialEnvironment(std::vector<std::vector<Vec>> loss_table);

    std::size_t learner_count() const override { return table_.front().size(); }
    std::size_t arm_count(std::size_t learner) const override {
        return table_.front().at(learner).size();
    }
    double mean(std::size_t learner, std::size_t arm, std::size_t t) const override;
    double sample(std::size_t learner, std::size_t arm, std::size_t t, Rng& rng) const override;
    double best_mean(std::size_t t) const override;

    std::size_t period() const { return table_.size(); }

private:
    const std::vector<Vec>& row(std::size_t t) const;

    std::vector<std::vector<Vec>> table_;
    Vec best_;
};

std::shared_ptr<AdversarialEnvironment> make_adversarial_env(std::vector<std::vector<Vec>> loss_table);

/// best_mean(t) - mean(i, j, t).
double pseudo_regret_increment(const Environment& env, std::size_t learner, std::size_t arm,
                               std::size_t t);

}  // namespace corral

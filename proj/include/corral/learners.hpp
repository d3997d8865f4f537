#pragma once

// Base bandit learners. Every learner owns k arms, proposes one per round
// and consumes feedback for the arm it proposed. Feedback carries both the
// reward and the loss view of the same observation so reward-native and
// loss-native learners can share a driver; under importance weighting both
// are divided by the sampling probability and are zero when the learner
// was not selected.

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corral/core.hpp"
#include "corral/rng.hpp"

namespace corral {

struct Feedback {
    std::size_t arm = 0;
    double reward = 0.0;
    double loss = 0.0;
    /// False when the corraller picked another learner this round.
    bool selected = true;
};

/// Raw, unweighted feedback for a direct play.
inline Feedback direct_feedback(std::size_t arm, double reward) {
    return Feedback{arm, reward, 1.0 - reward, true};
}

class Learner {
public:
    virtual ~Learner() = default;

    virtual std::size_t arm_count() const = 0;
    virtual std::size_t propose(Rng& rng) = 0;
    virtual void update(const Feedback& fb, Rng& rng) = 0;
    /// Zero all statistics and set the loss-range scale.
    virtual void restart(double scale) = 0;
    virtual double scale() const = 0;
    virtual std::string name() const = 0;
    virtual std::unique_ptr<Learner> clone() const = 0;
};

using LearnerPtr = std::unique_ptr<Learner>;

// --- UCB-I ------------------------------------------------------------------

/// Confidence width sqrt(4 rho ln t / n) + 4 rho ln t / (3 n); +inf for n = 0.
double ucb_width(double rho, double log_t, std::size_t count);

/// argmax_j means_j + width_j with unplayed arms first and ties to the lowest index.
std::size_t ucb_select(std::span<const std::size_t> counts, std::span<const double> means,
                       double rho, double log_t);

/// UCB-I with the rescaled (Bernstein-style) confidence width. The round
/// index used in ln t is the learner's own clock: updates since restart + 1.
class UcbLearner final : public Learner {
public:
    explicit UcbLearner(std::size_t arms, double scale = 1.0);

    std::size_t arm_count() const override { return counts_.size(); }
    std::size_t propose(Rng& rng) override;
    void update(const Feedback& fb, Rng& rng) override;
    void restart(double scale) override;
    double scale() const override { return rho_; }
    std::string name() const override { return "ucb"; }
    LearnerPtr clone() const override { return std::make_unique<UcbLearner>(*this); }

    std::span<const std::size_t> counts() const { return counts_; }
    std::span<const double> means() const { return means_; }
    std::size_t updates() const { return updates_; }

private:
    std::vector<std::size_t> counts_;
    Vec means_;
    double rho_;
    std::size_t updates_ = 0;
};

// --- Thompson sampling ------------------------------------------------------

/// Beta-Bernoulli Thompson sampling. Non-binary rewards are binarized with
/// an auxiliary Bernoulli draw of success probability min(1, reward / scale).
class ThompsonLearner final : public Learner {
public:
    explicit ThompsonLearner(std::size_t arms, double scale = 1.0);

    std::size_t arm_count() const override { return alpha_.size(); }
    std::size_t propose(Rng& rng) override;
    void update(const Feedback& fb, Rng& rng) override;
    void restart(double scale) override;
    double scale() const override { return rho_; }
    std::string name() const override { return "ts"; }
    LearnerPtr clone() const override { return std::make_unique<ThompsonLearner>(*this); }

    std::span<const double> alpha() const { return alpha_; }
    std::span<const double> beta() const { return beta_; }
    /// Overwrite the posterior; used to probe the sampler directly.
    void set_posterior(Vec alpha, Vec beta);

private:
    Vec alpha_;
    Vec beta_;
    double rho_;
};

// --- Tsallis-INF ------------------------------------------------------------

/// Arm distribution of the Tsallis-INF base learner: FTRL on the arm-level
/// cumulative loss with uniform step size eta.
NormalizationResult tsallis_arm_distribution(std::span<const double> cumulative_loss, double eta);

/// FTRL with the 1/2-Tsallis regularizer and step size eta_1 / sqrt(t).
/// Observed losses are divided by the probability of the proposed arm.
class TsallisInfLearner final : public Learner {
public:
    explicit TsallisInfLearner(std::size_t arms, double base_eta = 2.0, double scale = 1.0);

    std::size_t arm_count() const override { return cumulative_loss_.size(); }
    std::size_t propose(Rng& rng) override;
    void update(const Feedback& fb, Rng& rng) override;
    void restart(double scale) override;
    double scale() const override { return rho_; }
    std::string name() const override { return "tsallis"; }
    LearnerPtr clone() const override { return std::make_unique<TsallisInfLearner>(*this); }

    /// Distribution the next proposal is drawn from.
    Vec distribution() const;
    std::span<const double> cumulative_loss() const { return cumulative_loss_; }
    std::size_t round() const { return round_; }

private:
    Vec cumulative_loss_;
    Vec last_distribution_;
    double base_eta_;
    double rho_;
    std::size_t round_ = 1;
};

// --- Successive elimination -------------------------------------------------

/// Elimination radius sqrt(alpha ln(T k) / n).
double se_radius(double alpha, double log_horizon_arms, std::size_t count);

/// Arms surviving one elimination pass: j is dropped when
/// max_j' mean_j' - mean_j > 2 * radius_j.
std::vector<std::size_t> se_eliminate(std::span<const std::size_t> active,
                                      std::span<const double> means,
                                      std::span<const std::size_t> counts, double alpha,
                                      double log_horizon_arms);

class SuccessiveEliminationLearner final : public Learner {
public:
    SuccessiveEliminationLearner(std::size_t arms, std::size_t horizon, double alpha = 2.0,
                                 double scale = 1.0);

    std::size_t arm_count() const override { return counts_.size(); }
    std::size_t propose(Rng& rng) override;
    void update(const Feedback& fb, Rng& rng) override;
    void restart(double scale) override;
    double scale() const override { return rho_; }
    std::string name() const override { return "se"; }
    LearnerPtr clone() const override {
        return std::make_unique<SuccessiveEliminationLearner>(*this);
    }

    std::span<const std::size_t> active() const { return active_; }

private:
    std::vector<std::size_t> counts_;
    Vec means_;
    std::vector<std::size_t> active_;
    std::size_t cursor_ = 0;
    std::size_t horizon_;
    double alpha_;
    double rho_;
};

// --- Scripted ---------------------------------------------------------------

/// One phase of a scripted schedule: cycle through `pattern` for `duration`
/// plays (nullopt = forever).
struct SchedulePhase {
    std::optional<std::size_t> duration;
    std::vector<std::size_t> pattern;
};

/// Deterministic learner driven by a phase schedule. Its clock advances only
/// on rounds where it was actually selected, so a corraller has to play it
/// to move it through its schedule.
class ScriptedLearner final : public Learner {
public:
    ScriptedLearner(std::size_t arms, std::vector<SchedulePhase> schedule);

    std::size_t arm_count() const override { return arms_; }
    std::size_t propose(Rng& rng) override;
    void update(const Feedback& fb, Rng& rng) override;
    void restart(double scale) override;
    double scale() const override { return rho_; }
    std::string name() const override { return "scripted"; }
    LearnerPtr clone() const override { return std::make_unique<ScriptedLearner>(*this); }

    std::size_t clock() const { return clock_; }
    /// Arm played at 0-based clock value `clock`.
    std::size_t arm_at(std::size_t clock) const;

private:
    std::size_t arms_;
    std::vector<SchedulePhase> schedule_;
    std::size_t clock_ = 0;
    double rho_ = 1.0;
};

}  // namespace corral

#pragma once

// FTRL/OMD corraller with the 1/2-Tsallis regularizer: FTRL steps with a
// 1/sqrt(t) step-size schedule, interleaved with two-round negative-regret
// blocks that raise the step size of learners whose probability crossed a
// threshold of a doubling ladder, and restart them on a rescaled loss range.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "corral/core.hpp"
#include "corral/environments.hpp"
#include "corral/learners.hpp"
#include "corral/rng.hpp"
#include "corral/trace.hpp"

namespace corral {

/// exp(1 / ceil(ln T)^2).
double theory_beta(std::size_t horizon);

/// min over t in {2, 4, 8, ..., T} of (1 - exp(-1 / ln(T)^2)) sqrt(t) / (50 Rbar(t))
/// with Rbar(t) = sqrt(alpha * arms * t * ln t).
double theory_eta_init(std::size_t horizon, std::size_t arms, double alpha = 1.0);

/// rho_1 = 36, rho_{j+1} = 2 rho_j, largest rho_n <= K T.
Vec rho_ladder(std::size_t learners, std::size_t horizon);

/// (1 - 1/(T K)) w + 1/(T K) * uniform.
Vec mix_distribution(std::span<const double> w, std::size_t horizon);

/// Importance-weighted loss vector with a single non-zero coordinate.
struct LossEstimate {
    Vec ell;
    std::size_t chosen = 0;
    std::size_t arm = 0;
    double raw_loss = 0.0;
    /// Mixed probability of the chosen learner.
    double probability = 0.0;
};

/// Samples a learner from the mixed distribution, plays its proposal and
/// feeds every learner the importance-weighted view of the observation:
/// the chosen learner sees reward r / p and loss (1 - r) / p for its own
/// arm, every other learner sees zeros for the arm it proposed. Round t is
/// recorded with `w` as the weight snapshot when a recorder is given.
LossEstimate play_round(std::span<const double> w, std::span<const LearnerPtr> learners,
                        const Environment& env, std::size_t t, std::size_t horizon, Rng& rng,
                        RoundRecorder* recorder = nullptr);

/// play_round with an explicit sampling distribution; `snapshot` is what
/// gets recorded as the round's weights.
LossEstimate play_distribution(std::span<const double> sampling, std::span<const double> snapshot,
                               std::span<const LearnerPtr> learners, const Environment& env,
                               std::size_t t, Rng& rng, RoundRecorder* recorder = nullptr);

/// FTRL iterate grad Phi(-L): solve_shift(-L, eta).
NormalizationResult ftrl_step(std::span<const double> cumulative_loss, std::span<const double> eta);

struct OmdResult {
    Vec weights;
    /// Multiplier of the simplex projection.
    double mu = 0.0;
    /// Cumulative loss whose FTRL iterate under the rescaled step sizes
    /// (eta_i * beta for i in R) equals `weights`; componentwise >= 0.
    Vec transformed_loss;
};

/// One OMD step from w with loss ell and step sizes eta, followed by the
/// loss transform that lets FTRL continue from the OMD iterate after the
/// step sizes in R are multiplied by beta. With w = grad Phi(-L) (multiplier
/// nu) the transform equals s * (L + ell - (nu + mu)), s_i = 1/beta on R
/// and 1 elsewhere. Throws std::logic_error if a transformed coordinate is
/// below -1e-9.
OmdResult omd_step(std::span<const double> w, std::span<const double> ell,
                   std::span<const double> eta, std::span<const std::size_t> rescale,
                   double beta);

/// Threshold indices are 1-based; theta_i = n + 1 marks an exhausted ladder.
/// At an epoch start R = {i : w_i <= 1/rho_1} and theta_i is reset to the
/// first s with w_i > 1/rho_s. Otherwise, unless the previous step was a
/// negative-regret block, R = {i : w_i <= 1/rho_theta_i} and theta_i += 1.
/// When the epoch-start rule finds nothing, the mid-epoch rule applies.
std::vector<std::size_t> threshold_check(std::span<const double> w, std::vector<std::size_t>& theta,
                                         std::span<const double> ladder, bool epoch_start,
                                         bool last_was_nrs);

/// L + d.
Vec apply_loss_offset(std::span<const double> cumulative_loss, std::span<const double> offsets);

/// d_i = dims_i^(2 alpha) / sqrt(T).
Vec model_selection_offsets(std::span<const double> dims, double alpha, std::size_t horizon);

enum class RestartScale {
    TwoOverW,     ///< 2 / w_{t,i}
    HalfOverW,    ///< 1 / (2 w_{t,i})
};

enum class StepKind { WarmStart, Ftrl, NrsOmd, NrsFtrl, NrsFrozen };

/// Per-round diagnostics: the distribution played at round t, the step
/// sizes it was computed with and the set that triggered a block at t.
struct TsallisStepInfo {
    std::size_t t = 0;
    StepKind kind = StepKind::Ftrl;
    std::span<const double> weights;
    std::span<const double> eta;
    std::span<const std::size_t> rescale;
    std::size_t epoch = 0;
};

struct TsallisOptions {
    /// Initial step size per learner (one value broadcasts).
    Vec eta_init{1.0};
    double beta = 0.0;   ///< <= 0 selects theory_beta(T)
    bool restart_learners = true;
    RestartScale restart_scale = RestartScale::TwoOverW;
    /// Restart learners whose weight recovered above 1/rho_1 at epoch starts.
    bool epoch_start_restart = false;
    /// Additive per-round loss offsets; empty means none.
    Vec offsets;
    std::size_t snapshot_every = 1;
    std::function<void(const TsallisStepInfo&)> observer;
};

class TsallisCorraller {
public:
    TsallisCorraller(std::span<const LearnerPtr> prototypes, std::size_t horizon,
                     TsallisOptions opts);

    RunTrace run(const Environment& env, Rng& rng);

    /// Warm-start rounds K (ceil(ln T) + 1).
    std::size_t warm_start_rounds() const { return warm_; }
    std::span<const double> ladder() const { return ladder_; }
    double beta() const { return beta_; }
    std::size_t nrs_blocks() const { return nrs_blocks_; }
    std::span<const double> eta() const { return eta_; }
    std::span<const std::size_t> theta() const { return theta_; }
    std::span<const LearnerPtr> learners() const { return learners_; }

private:
    void refresh_eta();
    void restart_learner(std::size_t i, double weight);
    void notify(std::size_t t, StepKind kind, std::span<const double> w,
                std::span<const std::size_t> rescale, std::size_t epoch) const;

    std::vector<LearnerPtr> learners_;
    std::size_t horizon_;
    TsallisOptions opts_;
    std::size_t warm_;
    Vec ladder_;
    double beta_;
    Vec inv_eta_sq_;
    Vec eta_;
    std::vector<std::size_t> theta_;
    std::size_t nrs_blocks_ = 0;
};

RunTrace corral_tsallis_run(std::span<const LearnerPtr> prototypes, const Environment& env,
                            std::size_t horizon, Rng& rng, const TsallisOptions& opts = {});

}  // namespace corral

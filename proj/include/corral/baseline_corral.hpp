#pragma once

// Log-barrier OMD corraller with increasing per-learner learning rates:
// whenever a learner's mixed probability falls below half its recorded
// floor, the floor is halved and that learner's rate grows by a constant
// factor. Base learners are never restarted.

#include <cstddef>
#include <span>
#include <vector>

#include "corral/core.hpp"
#include "corral/environments.hpp"
#include "corral/learners.hpp"
#include "corral/rng.hpp"
#include "corral/trace.hpp"

namespace corral {

struct LogBarrierOptions {
    double eta_init = 0.0;     ///< <= 0 selects sqrt(K / T)
    double rate_factor = 0.0;  ///< <= 0 selects exp(1 / ln T)
    double gamma = 0.0;        ///< <= 0 selects 1 / T
    std::size_t snapshot_every = 1;
};

/// Mutable state of the log-barrier corraller. `rho_i` is the inverse of
/// the probability floor of learner i.
struct LogBarrierState {
    Vec w;
    Vec eta;
    Vec rho;
    double gamma = 0.0;
    double rate_factor = 1.0;

    LogBarrierState(std::size_t learners, std::size_t horizon, const LogBarrierOptions& opts);

    /// (1 - gamma) w + gamma / K.
    Vec mixed() const;
};

/// One Log-Barrier-OMD step on the importance-weighted loss `ell`, followed
/// by the threshold rule: if 1 / wbar_i > rho_i then rho_i = 2 / wbar_i and
/// eta_i *= rate_factor.
void logbarrier_corral_step(LogBarrierState& state, std::span<const double> ell);

RunTrace logbarrier_corral_run(std::span<const LearnerPtr> prototypes, const Environment& env,
                               std::size_t horizon, Rng& rng, const LogBarrierOptions& opts = {});

}  // namespace corral

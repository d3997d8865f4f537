#include "corral/baseline_corral.hpp"

#include <cmath>
#include <stdexcept>

#include "corral/corral_tsallis.hpp"

namespace corral {

LogBarrierState::LogBarrierState(std::size_t learners, std::size_t horizon,
                                 const LogBarrierOptions& opts) {
    if (learners == 0 || horizon < 2) {
        throw std::invalid_argument("LogBarrierState: need K >= 1 and T >= 2");
    }
    const double k = static_cast<double>(learners);
    const double T = static_cast<double>(horizon);
    const double eta0 = opts.eta_init > 0.0 ? opts.eta_init : std::sqrt(k / T);
    rate_factor = opts.rate_factor > 0.0 ? opts.rate_factor : std::exp(1.0 / std::log(T));
    gamma = opts.gamma > 0.0 ? opts.gamma : 1.0 / T;
    if (rate_factor < 1.0 || gamma >= 1.0) {
        throw std::invalid_argument("LogBarrierState: rate factor must be >= 1 and gamma < 1");
    }
    w.assign(learners, 1.0 / k);
    eta.assign(learners, eta0);
    rho.assign(learners, 2.0 * k);
}

Vec LogBarrierState::mixed() const {
    const double k = static_cast<double>(w.size());
    Vec out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        out[i] = (1.0 - gamma) * w[i] + gamma / k;
    }
    return out;
}

void logbarrier_corral_step(LogBarrierState& state, std::span<const double> ell) {
    if (ell.size() != state.w.size()) {
        throw std::invalid_argument("logbarrier_corral_step: size mismatch");
    }
    state.w = solve_log_barrier(state.w, ell, state.eta).weights;
    const Vec wbar = state.mixed();
    for (std::size_t i = 0; i < wbar.size(); ++i) {
        if (1.0 / wbar[i] > state.rho[i]) {
            state.rho[i] = 2.0 / wbar[i];
            state.eta[i] *= state.rate_factor;
        }
    }
}

RunTrace logbarrier_corral_run(std::span<const LearnerPtr> prototypes, const Environment& env,
                               std::size_t horizon, Rng& rng, const LogBarrierOptions& opts) {
    const std::size_t k = prototypes.size();
    if (env.learner_count() != k) {
        throw std::invalid_argument("logbarrier_corral_run: learner count mismatch");
    }
    std::vector<LearnerPtr> learners;
    for (const auto& p : prototypes) {
        learners.push_back(p->clone());
    }
    LogBarrierState state(k, horizon, opts);
    RoundRecorder recorder(env, horizon, opts.snapshot_every);
    for (std::size_t t = 1; t <= horizon; ++t) {
        const LossEstimate est =
            play_distribution(state.mixed(), state.w, learners, env, t, rng, &recorder);
        logbarrier_corral_step(state, est.ell);
    }
    return std::move(recorder).finish();
}

}  // namespace corral

#include "corral/corral_tsallis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corral {

double theory_beta(std::size_t horizon) {
    const double l = std::ceil(std::log(static_cast<double>(std::max<std::size_t>(horizon, 2))));
    return std::exp(1.0 / (l * l));
}

double theory_eta_init(std::size_t horizon, std::size_t arms, double alpha) {
    if (horizon < 2 || arms == 0 || !(alpha > 0.0)) {
        throw std::invalid_argument("theory_eta_init: need T >= 2, arms >= 1, alpha > 0");
    }
    const double log_T = std::log(static_cast<double>(horizon));
    const double factor = 1.0 - std::exp(-1.0 / (log_T * log_T));
    auto value = [&](double t) {
        const double rbar = std::sqrt(alpha * static_cast<double>(arms) * t * std::log(t));
        return factor * std::sqrt(t) / (50.0 * rbar);
    };
    double best = value(static_cast<double>(horizon));
    for (std::size_t t = 2; t <= horizon; t *= 2) {
        best = std::min(best, value(static_cast<double>(t)));
    }
    return best;
}

Vec rho_ladder(std::size_t learners, std::size_t horizon) {
    const double cap = static_cast<double>(learners) * static_cast<double>(horizon);
    if (!(cap >= 36.0)) {
        throw std::invalid_argument("rho_ladder: K T must be at least 36");
    }
    Vec ladder{36.0};
    while (2.0 * ladder.back() <= cap) {
        ladder.push_back(2.0 * ladder.back());
    }
    return ladder;
}

Vec mix_distribution(std::span<const double> w, std::size_t horizon) {
    const double k = static_cast<double>(w.size());
    const double gamma = 1.0 / (static_cast<double>(horizon) * k);
    Vec out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        out[i] = (1.0 - gamma) * w[i] + gamma / k;
    }
    return out;
}

LossEstimate play_round(std::span<const double> w, std::span<const LearnerPtr> learners,
                        const Environment& env, std::size_t t, std::size_t horizon, Rng& rng,
                        RoundRecorder* recorder) {
    return play_distribution(mix_distribution(w, horizon), w, learners, env, t, rng, recorder);
}

LossEstimate play_distribution(std::span<const double> wbar, std::span<const double> snapshot,
                               std::span<const LearnerPtr> learners, const Environment& env,
                               std::size_t t, Rng& rng, RoundRecorder* recorder) {
    const std::size_t k = learners.size();
    if (wbar.size() != k || env.learner_count() != k) {
        throw std::invalid_argument("play_distribution: learner count mismatch");
    }
    std::vector<std::size_t> arms(k);
    for (std::size_t i = 0; i < k; ++i) {
        arms[i] = learners[i]->propose(rng);
    }
    LossEstimate est;
    est.ell.assign(k, 0.0);
    est.chosen = sample_index(wbar, rng);
    est.arm = arms[est.chosen];
    const double reward = env.sample(est.chosen, est.arm, t, rng);
    est.raw_loss = 1.0 - reward;
    est.probability = wbar[est.chosen];
    est.ell[est.chosen] = est.raw_loss / est.probability;

    for (std::size_t i = 0; i < k; ++i) {
        Feedback fb{arms[i], 0.0, 0.0, false};
        if (i == est.chosen) {
            fb = Feedback{arms[i], reward / est.probability, est.ell[i], true};
        }
        learners[i]->update(fb, rng);
    }
    if (recorder != nullptr) {
        recorder->count_selection(est.chosen);
        recorder->record(t, est.chosen, est.arm, snapshot);
    }
    return est;
}

NormalizationResult ftrl_step(std::span<const double> cumulative_loss, std::span<const double> eta) {
    Vec g(cumulative_loss.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = -cumulative_loss[i];
    }
    return solve_shift(g, eta);
}

OmdResult omd_step(std::span<const double> w, std::span<const double> ell,
                   std::span<const double> eta, std::span<const std::size_t> rescale,
                   double beta) {
    if (ell.size() != w.size()) {
        throw std::invalid_argument("omd_step: size mismatch");
    }
    if (!(beta >= 1.0)) {
        throw std::invalid_argument("omd_step: beta must be >= 1");
    }
    Vec g = tsallis_grad(w, eta);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] -= ell[i];
    }
    NormalizationResult proj = solve_shift(g, eta);

    Vec scale(w.size(), 1.0);
    for (std::size_t i : rescale) {
        scale.at(i) = 1.0 / beta;
    }
    OmdResult out;
    out.mu = proj.nu;
    out.weights = std::move(proj.weights);
    out.transformed_loss.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double v = -scale[i] * (g[i] + out.mu);
        if (v < -1e-9) {
            throw std::logic_error("omd_step: transformed loss is negative");
        }
        out.transformed_loss[i] = std::max(v, 0.0);
    }
    return out;
}

std::vector<std::size_t> threshold_check(std::span<const double> w, std::vector<std::size_t>& theta,
                                         std::span<const double> ladder, bool epoch_start,
                                         bool last_was_nrs) {
    if (theta.size() != w.size() || ladder.empty()) {
        throw std::invalid_argument("threshold_check: size mismatch");
    }
    const std::size_t n = ladder.size();
    std::vector<std::size_t> rescale;
    if (epoch_start) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w[i] <= 1.0 / ladder[0]) {
                std::size_t s = 1;
                while (s <= n && !(w[i] > 1.0 / ladder[s - 1])) {
                    ++s;
                }
                theta[i] = s;
                rescale.push_back(i);
            }
        }
        if (!rescale.empty()) {
            return rescale;
        }
    }
    if (last_was_nrs) {
        return rescale;
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (theta[i] >= 1 && theta[i] <= n && w[i] <= 1.0 / ladder[theta[i] - 1]) {
            ++theta[i];
            rescale.push_back(i);
        }
    }
    return rescale;
}

Vec apply_loss_offset(std::span<const double> cumulative_loss, std::span<const double> offsets) {
    if (offsets.size() != cumulative_loss.size()) {
        throw std::invalid_argument("apply_loss_offset: size mismatch");
    }
    Vec out(cumulative_loss.begin(), cumulative_loss.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (offsets[i] < 0.0) {
            throw std::invalid_argument("apply_loss_offset: offsets must be non-negative");
        }
        out[i] += offsets[i];
    }
    return out;
}

Vec model_selection_offsets(std::span<const double> dims, double alpha, std::size_t horizon) {
    Vec out(dims.size());
    const double root = std::sqrt(static_cast<double>(horizon));
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] < 0.0) {
            throw std::invalid_argument("model_selection_offsets: negative dimension");
        }
        out[i] = std::pow(dims[i], 2.0 * alpha) / root;
    }
    return out;
}

TsallisCorraller::TsallisCorraller(std::span<const LearnerPtr> prototypes, std::size_t horizon,
                                   TsallisOptions opts)
    : horizon_(horizon), opts_(std::move(opts)) {
    const std::size_t k = prototypes.size();
    if (k == 0) {
        throw std::invalid_argument("TsallisCorraller: no learners");
    }
    for (const auto& p : prototypes) {
        learners_.push_back(p->clone());
    }
    const double log_T = std::ceil(std::log(static_cast<double>(std::max<std::size_t>(horizon, 2))));
    warm_ = k * (static_cast<std::size_t>(log_T) + 1);
    if (horizon <= warm_ + 8) {
        throw std::invalid_argument("TsallisCorraller: horizon too short for the warm start");
    }
    ladder_ = rho_ladder(k, horizon);
    beta_ = opts_.beta > 0.0 ? opts_.beta : theory_beta(horizon);
    if (beta_ < 1.0) {
        throw std::invalid_argument("TsallisCorraller: beta must be >= 1");
    }

    Vec eta0 = opts_.eta_init;
    if (eta0.size() == 1) {
        eta0.assign(k, eta0.front());
    }
    if (eta0.size() != k) {
        throw std::invalid_argument("TsallisCorraller: eta_init size mismatch");
    }
    inv_eta_sq_.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (!(eta0[i] > 0.0) || !std::isfinite(eta0[i])) {
            throw std::invalid_argument("TsallisCorraller: eta_init must be positive");
        }
        inv_eta_sq_[i] = 1.0 / (eta0[i] * eta0[i]);
    }
    refresh_eta();
    theta_.assign(k, 1);

    if (opts_.offsets.empty()) {
        opts_.offsets.assign(k, 0.0);
    }
    if (opts_.offsets.size() != k) {
        throw std::invalid_argument("TsallisCorraller: offsets size mismatch");
    }
    for (double d : opts_.offsets) {
        if (!(d >= 0.0)) {
            throw std::invalid_argument("TsallisCorraller: offsets must be non-negative");
        }
    }
}

void TsallisCorraller::refresh_eta() {
    eta_.resize(inv_eta_sq_.size());
    for (std::size_t i = 0; i < eta_.size(); ++i) {
        eta_[i] = 1.0 / std::sqrt(inv_eta_sq_[i]);
    }
}

void TsallisCorraller::restart_learner(std::size_t i, double weight) {
    const double scale =
        opts_.restart_scale == RestartScale::TwoOverW ? 2.0 / weight : 1.0 / (2.0 * weight);
    learners_[i]->restart(std::max(scale, 1.0));
}

void TsallisCorraller::notify(std::size_t t, StepKind kind, std::span<const double> w,
                              std::span<const std::size_t> rescale, std::size_t epoch) const {
    if (opts_.observer) {
        opts_.observer(TsallisStepInfo{t, kind, w, eta_, rescale, epoch});
    }
}

RunTrace TsallisCorraller::run(const Environment& env, Rng& rng) {
    const std::size_t k = learners_.size();
    if (env.learner_count() != k) {
        throw std::invalid_argument("TsallisCorraller::run: learner count mismatch");
    }
    RoundRecorder recorder(env, horizon_, opts_.snapshot_every);
    const Vec& d = opts_.offsets;
    Vec L(k, 0.0);
    std::size_t t = 1;

    // Warm start: round-robin with raw losses.
    const Vec uniform(k, 1.0 / static_cast<double>(k));
    const std::vector<std::size_t> none;
    while (t <= warm_) {
        const std::size_t i = (t - 1) % k;
        const std::size_t arm = learners_[i]->propose(rng);
        const double reward = env.sample(i, arm, t, rng);
        learners_[i]->update(direct_feedback(arm, reward), rng);
        L[i] += 1.0 - reward;
        for (std::size_t c = 0; c < k; ++c) {
            L[c] += d[c];
        }
        recorder.count_selection(i);
        recorder.record(t, i, arm, uniform);
        notify(t, StepKind::WarmStart, uniform, none, 0);
        ++t;
    }

    Vec w = ftrl_step(L, eta_).weights;
    StepKind kind = StepKind::Ftrl;
    bool last_nrs = false;
    std::size_t epoch = 0;
    std::size_t epoch_len = warm_;
    std::size_t epoch_end = warm_;

    auto add_loss = [&](const Vec& ell) {
        for (std::size_t i = 0; i < k; ++i) {
            L[i] += ell[i] + d[i];
        }
    };

    while (t <= horizon_) {
        bool epoch_start = false;
        while (t > epoch_end) {
            epoch_len *= 2;
            epoch_end += epoch_len;
            ++epoch;
            epoch_start = true;
        }
        if (epoch_start && opts_.epoch_start_restart) {
            for (std::size_t i = 0; i < k; ++i) {
                if (w[i] > 1.0 / ladder_[0] && learners_[i]->scale() > 1.0) {
                    learners_[i]->restart(1.0);
                }
            }
        }

        const LossEstimate est = play_round(w, learners_, env, t, horizon_, rng, &recorder);
        const std::vector<std::size_t> rescale = threshold_check(w, theta_, ladder_, epoch_start, last_nrs);
        notify(t, kind, w, rescale, epoch);

        if (!rescale.empty() && horizon_ - t >= 2) {
            ++nrs_blocks_;
            Vec ell = est.ell;
            for (std::size_t i = 0; i < k; ++i) {
                ell[i] += d[i];
            }
            const OmdResult omd = omd_step(w, ell, eta_, rescale, beta_);
            L = omd.transformed_loss;

            ++t;
            const LossEstimate est1 = play_round(omd.weights, learners_, env, t, horizon_, rng, &recorder);
            notify(t, StepKind::NrsOmd, omd.weights, none, epoch);
            add_loss(est1.ell);

            for (std::size_t i : rescale) {
                inv_eta_sq_[i] /= beta_ * beta_;
                if (opts_.restart_learners) {
                    restart_learner(i, w[i]);
                }
            }
            refresh_eta();

            ++t;
            const Vec w2 = ftrl_step(L, eta_).weights;
            const LossEstimate est2 = play_round(w2, learners_, env, t, horizon_, rng, &recorder);
            notify(t, StepKind::NrsFtrl, w2, none, epoch);
            add_loss(est2.ell);

            w = ftrl_step(L, eta_).weights;
            kind = StepKind::NrsFrozen;
            last_nrs = true;
        } else {
            add_loss(est.ell);
            for (double& v : inv_eta_sq_) {
                v += 1.0;
            }
            refresh_eta();
            w = ftrl_step(L, eta_).weights;
            kind = StepKind::Ftrl;
            last_nrs = false;
        }
        ++t;
    }
    return std::move(recorder).finish();
}

RunTrace corral_tsallis_run(std::span<const LearnerPtr> prototypes, const Environment& env,
                            std::size_t horizon, Rng& rng, const TsallisOptions& opts) {
    TsallisCorraller corraller(prototypes, horizon, opts);
    return corraller.run(env, rng);
}

}  // namespace corral

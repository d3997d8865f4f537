#include "corral/learners.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corral {

namespace {

void require_arms(std::size_t arms, const char* who) {
    if (arms == 0) {
        throw std::invalid_argument(std::string(who) + ": at least one arm required");
    }
}

void require_scale(double scale, const char* who) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw std::invalid_argument(std::string(who) + ": scale must be positive");
    }
}

double clamped_log(std::size_t t) {
    return std::log(static_cast<double>(std::max<std::size_t>(t, 2)));
}

}  // namespace

// --- UCB-I ------------------------------------------------------------------

double ucb_width(double rho, double log_t, std::size_t count) {
    if (count == 0) {
        return std::numeric_limits<double>::infinity();
    }
    const double n = static_cast<double>(count);
    return std::sqrt(4.0 * rho * log_t / n) + 4.0 * rho * log_t / (3.0 * n);
}

std::size_t ucb_select(std::span<const std::size_t> counts, std::span<const double> means,
                       double rho, double log_t) {
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] == 0) {
            return j;
        }
    }
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < counts.size(); ++j) {
        const double value = means[j] + ucb_width(rho, log_t, counts[j]);
        if (value > best_value) {
            best_value = value;
            best = j;
        }
    }
    return best;
}

UcbLearner::UcbLearner(std::size_t arms, double scale)
    : counts_(arms, 0), means_(arms, 0.0), rho_(scale) {
    require_arms(arms, "UcbLearner");
    require_scale(scale, "UcbLearner");
}

std::size_t UcbLearner::propose(Rng& /*rng*/) {
    return ucb_select(counts_, means_, rho_, clamped_log(updates_ + 1));
}

void UcbLearner::update(const Feedback& fb, Rng& /*rng*/) {
    const std::size_t j = fb.arm;
    counts_.at(j) += 1;
    means_[j] += (fb.reward - means_[j]) / static_cast<double>(counts_[j]);
    ++updates_;
}

void UcbLearner::restart(double scale) {
    require_scale(scale, "UcbLearner::restart");
    std::fill(counts_.begin(), counts_.end(), 0);
    std::fill(means_.begin(), means_.end(), 0.0);
    updates_ = 0;
    rho_ = scale;
}

// --- Thompson sampling ------------------------------------------------------

ThompsonLearner::ThompsonLearner(std::size_t arms, double scale)
    : alpha_(arms, 1.0), beta_(arms, 1.0), rho_(scale) {
    require_arms(arms, "ThompsonLearner");
    require_scale(scale, "ThompsonLearner");
}

std::size_t ThompsonLearner::propose(Rng& rng) {
    if (alpha_.size() == 1) {
        return 0;
    }
    std::size_t best = 0;
    double best_theta = -1.0;
    for (std::size_t j = 0; j < alpha_.size(); ++j) {
        const double theta = sample_beta(alpha_[j], beta_[j], rng);
        if (theta > best_theta) {
            best_theta = theta;
            best = j;
        }
    }
    return best;
}

void ThompsonLearner::update(const Feedback& fb, Rng& rng) {
    const std::size_t j = fb.arm;
    const double p = std::clamp(fb.reward / rho_, 0.0, 1.0);
    bool success;
    if (p <= 0.0) {
        success = false;
    } else if (p >= 1.0) {
        success = true;
    } else {
        success = bernoulli(p, rng);
    }
    if (success) {
        alpha_.at(j) += 1.0;
    } else {
        beta_.at(j) += 1.0;
    }
}

void ThompsonLearner::restart(double scale) {
    require_scale(scale, "ThompsonLearner::restart");
    std::fill(alpha_.begin(), alpha_.end(), 1.0);
    std::fill(beta_.begin(), beta_.end(), 1.0);
    rho_ = scale;
}

void ThompsonLearner::set_posterior(Vec alpha, Vec beta) {
    if (alpha.size() != alpha_.size() || beta.size() != beta_.size()) {
        throw std::invalid_argument("ThompsonLearner::set_posterior: size mismatch");
    }
    alpha_ = std::move(alpha);
    beta_ = std::move(beta);
}

// --- Tsallis-INF ------------------------------------------------------------

NormalizationResult tsallis_arm_distribution(std::span<const double> cumulative_loss, double eta) {
    Vec g(cumulative_loss.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        g[j] = -cumulative_loss[j];
    }
    const Vec etas(g.size(), eta);
    return solve_shift(g, etas);
}

TsallisInfLearner::TsallisInfLearner(std::size_t arms, double base_eta, double scale)
    : cumulative_loss_(arms, 0.0), base_eta_(base_eta), rho_(scale) {
    require_arms(arms, "TsallisInfLearner");
    require_scale(scale, "TsallisInfLearner");
    if (!(base_eta > 0.0)) {
        throw std::invalid_argument("TsallisInfLearner: base step size must be positive");
    }
}

Vec TsallisInfLearner::distribution() const {
    const double eta = base_eta_ / std::sqrt(static_cast<double>(round_));
    return tsallis_arm_distribution(cumulative_loss_, eta).weights;
}

std::size_t TsallisInfLearner::propose(Rng& rng) {
    last_distribution_ = distribution();
    return sample_index(last_distribution_, rng);
}

void TsallisInfLearner::update(const Feedback& fb, Rng& /*rng*/) {
    if (last_distribution_.empty()) {
        last_distribution_ = distribution();
    }
    const std::size_t j = fb.arm;
    const double p = last_distribution_.at(j);
    cumulative_loss_[j] += (fb.loss / rho_) / p;
    ++round_;
    last_distribution_.clear();
}

void TsallisInfLearner::restart(double scale) {
    require_scale(scale, "TsallisInfLearner::restart");
    std::fill(cumulative_loss_.begin(), cumulative_loss_.end(), 0.0);
    last_distribution_.clear();
    round_ = 1;
    rho_ = scale;
}

// --- Successive elimination -------------------------------------------------

double se_radius(double alpha, double log_horizon_arms, std::size_t count) {
    if (count == 0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::sqrt(alpha * log_horizon_arms / static_cast<double>(count));
}

std::vector<std::size_t> se_eliminate(std::span<const std::size_t> active,
                                      std::span<const double> means,
                                      std::span<const std::size_t> counts, double alpha,
                                      double log_horizon_arms) {
    double leader = -std::numeric_limits<double>::infinity();
    for (std::size_t j : active) {
        leader = std::max(leader, means[j]);
    }
    std::vector<std::size_t> kept;
    for (std::size_t j : active) {
        const double radius = se_radius(alpha, log_horizon_arms, counts[j]);
        if (!(leader - means[j] > 2.0 * radius)) {
            kept.push_back(j);
        }
    }
    return kept;
}

SuccessiveEliminationLearner::SuccessiveEliminationLearner(std::size_t arms, std::size_t horizon,
                                                           double alpha, double scale)
    : counts_(arms, 0), means_(arms, 0.0), horizon_(horizon), alpha_(alpha), rho_(scale) {
    require_arms(arms, "SuccessiveEliminationLearner");
    require_scale(scale, "SuccessiveEliminationLearner");
    if (horizon == 0) {
        throw std::invalid_argument("SuccessiveEliminationLearner: horizon must be positive");
    }
    restart(scale);
}

std::size_t SuccessiveEliminationLearner::propose(Rng& /*rng*/) {
    return active_[cursor_];
}

void SuccessiveEliminationLearner::update(const Feedback& fb, Rng& /*rng*/) {
    const std::size_t j = fb.arm;
    counts_.at(j) += 1;
    means_[j] += (fb.reward / rho_ - means_[j]) / static_cast<double>(counts_[j]);
    if (++cursor_ < active_.size()) {
        return;
    }
    cursor_ = 0;
    const double log_tk =
        std::log(static_cast<double>(horizon_) * static_cast<double>(counts_.size()));
    active_ = se_eliminate(active_, means_, counts_, alpha_, log_tk);
}

void SuccessiveEliminationLearner::restart(double scale) {
    require_scale(scale, "SuccessiveEliminationLearner::restart");
    std::fill(counts_.begin(), counts_.end(), 0);
    std::fill(means_.begin(), means_.end(), 0.0);
    active_.resize(counts_.size());
    for (std::size_t j = 0; j < active_.size(); ++j) {
        active_[j] = j;
    }
    cursor_ = 0;
    rho_ = scale;
}

// --- Scripted ---------------------------------------------------------------

ScriptedLearner::ScriptedLearner(std::size_t arms, std::vector<SchedulePhase> schedule)
    : arms_(arms), schedule_(std::move(schedule)) {
    require_arms(arms, "ScriptedLearner");
    if (schedule_.empty()) {
        throw std::invalid_argument("ScriptedLearner: empty schedule");
    }
    for (const auto& phase : schedule_) {
        if (phase.pattern.empty()) {
            throw std::invalid_argument("ScriptedLearner: empty phase pattern");
        }
        for (std::size_t a : phase.pattern) {
            if (a >= arms_) {
                throw std::invalid_argument("ScriptedLearner: arm index out of range");
            }
        }
    }
}

std::size_t ScriptedLearner::arm_at(std::size_t clock) const {
    for (std::size_t p = 0; p < schedule_.size(); ++p) {
        const auto& phase = schedule_[p];
        const bool last = p + 1 == schedule_.size();
        if (!phase.duration || clock < *phase.duration || last) {
            return phase.pattern[clock % phase.pattern.size()];
        }
        clock -= *phase.duration;
    }
    return schedule_.back().pattern.front();
}

std::size_t ScriptedLearner::propose(Rng& /*rng*/) {
    return arm_at(clock_);
}

void ScriptedLearner::update(const Feedback& fb, Rng& /*rng*/) {
    if (fb.selected) {
        ++clock_;
    }
}

void ScriptedLearner::restart(double scale) {
    require_scale(scale, "ScriptedLearner::restart");
    clock_ = 0;
    rho_ = scale;
}

}  // namespace corral

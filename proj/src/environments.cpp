#include "corral/environments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace corral {

namespace {

void require_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
    }
}

}  // namespace

double Environment::best_mean(std::size_t t) const {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < learner_count(); ++i) {
        for (std::size_t j = 0; j < arm_count(i); ++j) {
            best = std::max(best, mean(i, j, t));
        }
    }
    return best;
}

// --- StochasticEnvironment --------------------------------------------------

StochasticEnvironment::StochasticEnvironment(std::vector<std::vector<Arm>> arms)
    : arms_(std::move(arms)) {
    if (arms_.empty()) {
        throw std::invalid_argument("StochasticEnvironment: no learners");
    }
    best_ = -std::numeric_limits<double>::infinity();
    for (const auto& learner : arms_) {
        if (learner.empty()) {
            throw std::invalid_argument("StochasticEnvironment: learner without arms");
        }
        for (const auto& arm : learner) {
            require_unit(arm.mean, "arm mean");
            best_ = std::max(best_, arm.mean);
        }
    }
    comparator_ = best_;
}

double StochasticEnvironment::mean(std::size_t learner, std::size_t arm, std::size_t) const {
    return arms_.at(learner).at(arm).mean;
}

double StochasticEnvironment::sample(std::size_t learner, std::size_t arm, std::size_t,
                                     Rng& rng) const {
    const Arm& a = arms_.at(learner).at(arm);
    if (a.deterministic) {
        return a.mean;
    }
    return bernoulli(a.mean, rng) ? 1.0 : 0.0;
}

std::shared_ptr<StochasticEnvironment> make_gap_instance(const GapInstanceConfig& cfg) {
    if (cfg.learners == 0 || cfg.arms_best == 0 || cfg.arms_other == 0) {
        throw std::invalid_argument("make_gap_instance: learner and arm counts must be positive");
    }
    if (cfg.in_gap < 0.0 || cfg.out_gap < 0.0) {
        throw std::invalid_argument("make_gap_instance: gaps must be non-negative");
    }
    const double best = cfg.base_reward + cfg.in_gap + cfg.out_gap;
    const double other_best = cfg.base_reward + cfg.in_gap;
    require_unit(best, "best arm mean");
    require_unit(other_best, "other learners' best mean");
    require_unit(cfg.base_reward, "base_reward");
    require_unit(cfg.low_reward, "low_reward");

    using Arm = StochasticEnvironment::Arm;
    std::vector<std::vector<Arm>> arms(cfg.learners);
    arms[0].assign(cfg.arms_best, Arm{cfg.low_reward, false});
    arms[0][0].mean = best;
    for (std::size_t i = 1; i < cfg.learners; ++i) {
        arms[i].assign(cfg.arms_other, Arm{cfg.base_reward, false});
        arms[i][0].mean = other_best;
    }
    return std::make_shared<StochasticEnvironment>(std::move(arms));
}

std::shared_ptr<StochasticEnvironment> make_single_copy_lb_env(double mu1, double mu2, double mu3) {
    if (!(mu1 > mu3 && mu3 > mu2)) {
        throw std::invalid_argument("make_single_copy_lb_env: requires mu1 > mu3 > mu2");
    }
    using Arm = StochasticEnvironment::Arm;
    std::vector<std::vector<Arm>> arms{
        {Arm{mu1, false}, Arm{mu2, true}},
        {Arm{mu3, true}},
    };
    return std::make_shared<StochasticEnvironment>(std::move(arms));
}

AlternatingLowerBound make_alternating_lb_env(double mu1, double mu2, double mu3, double alpha,
                                              int beta, std::size_t horizon) {
    if (!(mu2 > mu1 && mu1 > 0.5 * (mu2 + mu3))) {
        throw std::invalid_argument(
            "make_alternating_lb_env: requires mu2 > mu1 > (mu2 + mu3) / 2");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0) || (beta != 0 && beta != 1) || horizon == 0) {
        throw std::invalid_argument("make_alternating_lb_env: bad latent draw or horizon");
    }
    using Arm = StochasticEnvironment::Arm;
    std::vector<std::vector<Arm>> arms{
        {Arm{mu1, false}},
        {Arm{mu2, false}, Arm{mu3, false}},
    };

    AlternatingLowerBound out;
    out.env = std::make_shared<StochasticEnvironment>(std::move(arms));
    out.alpha = alpha;
    out.beta = beta;
    out.mu1 = mu1;
    out.mu2 = mu2;
    out.mu3 = mu3;
    out.alternation_rounds = static_cast<std::size_t>(
        std::ceil(std::pow(static_cast<double>(horizon), 1.0 - alpha) - 1e-9));
    if (beta == 1) {
        out.schedule = {SchedulePhase{std::nullopt, {0, 1}}};
        // The best learner is the single mu1 arm.
        out.env->set_comparator(mu1);
    } else {
        out.schedule = {SchedulePhase{out.alternation_rounds, {0, 1}},
                        SchedulePhase{std::nullopt, {0}}};
        out.env->set_comparator(mu2);
    }
    return out;
}

AlternatingLowerBound make_formal_alternating_lb_env(double mu2, double alpha, int beta,
                                                     std::size_t horizon) {
    const double delta = std::pow(static_cast<double>(horizon), -(1.0 - alpha) / 2.0);
    const double mu3 = mu2 - delta;
    const double mu1 = mu2 - 0.25 * delta;
    if (mu3 < 0.0) {
        throw std::invalid_argument("make_formal_alternating_lb_env: mu2 - Delta < 0");
    }
    return make_alternating_lb_env(mu1, mu2, mu3, alpha, beta, horizon);
}

AlternatingLowerBound draw_formal_alternating_lb_env(double mu2, std::size_t horizon, Rng& latent) {
    const double alpha = uniform01(latent);
    const int beta = bernoulli(0.5, latent) ? 1 : 0;
    return make_formal_alternating_lb_env(mu2, alpha, beta, horizon);
}

// --- AdversarialEnvironment -------------------------------------------------

AdversarialEnvironment::AdversarialEnvironment(std::vector<std::vector<Vec>> loss_table)
    : table_(std::move(loss_table)) {
    if (table_.empty() || table_.front().empty()) {
        throw std::invalid_argument("AdversarialEnvironment: empty loss table");
    }
    const auto& shape = table_.front();
    best_.reserve(table_.size());
    for (const auto& r : table_) {
        if (r.size() != shape.size()) {
            throw std::invalid_argument("AdversarialEnvironment: ragged learner dimension");
        }
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (r[i].size() != shape[i].size() || r[i].empty()) {
                throw std::invalid_argument("AdversarialEnvironment: ragged arm dimension");
            }
            for (double loss : r[i]) {
                require_unit(loss, "loss");
                best = std::max(best, 1.0 - loss);
            }
        }
        best_.push_back(best);
    }
}

const std::vector<Vec>& AdversarialEnvironment::row(std::size_t t) const {
    if (t == 0) {
        throw std::invalid_argument("AdversarialEnvironment: rounds are 1-based");
    }
    return table_[(t - 1) % table_.size()];
}

double AdversarialEnvironment::mean(std::size_t learner, std::size_t arm, std::size_t t) const {
    return 1.0 - row(t).at(learner).at(arm);
}

double AdversarialEnvironment::sample(std::size_t learner, std::size_t arm, std::size_t t,
                                      Rng&) const {
    return mean(learner, arm, t);
}

double AdversarialEnvironment::best_mean(std::size_t t) const {
    row(t);
    return best_[(t - 1) % table_.size()];
}

std::shared_ptr<AdversarialEnvironment> make_adversarial_env(std::vector<std::vector<Vec>> loss_table) {
    return std::make_shared<AdversarialEnvironment>(std::move(loss_table));
}

double pseudo_regret_increment(const Environment& env, std::size_t learner, std::size_t arm,
                               std::size_t t) {
    return env.comparator_mean(t) - env.mean(learner, arm, t);
}

}  // namespace corral

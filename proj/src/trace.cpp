#include "corral/trace.hpp"

#include <stdexcept>

namespace corral {

RoundRecorder::RoundRecorder(const Environment& env, std::size_t horizon, std::size_t snapshot_every)
    : env_(env), horizon_(horizon), snapshot_every_(snapshot_every) {
    if (snapshot_every_ == 0) {
        throw std::invalid_argument("RoundRecorder: snapshot_every must be >= 1");
    }
    const std::size_t k = env.learner_count();
    trace_.pulls.assign(k, 0);
    trace_.group_pulls.assign(k, 0);
}

void RoundRecorder::record(std::size_t t, std::size_t learner, std::size_t arm,
                           std::span<const double> weights) {
    if (t != trace_.rounds + 1 || t > horizon_) {
        throw std::logic_error("RoundRecorder: rounds must be consecutive and within the horizon");
    }
    const double inst = pseudo_regret_increment(env_, learner, arm, t);
    trace_.rounds = t;
    trace_.final_regret += inst;
    ++trace_.pulls.at(learner);

    if (t % snapshot_every_ != 0 && t != horizon_) {
        return;
    }
    TraceRow row;
    row.t = t;
    row.chosen = learner;
    row.arm = arm;
    row.inst_regret = inst;
    row.cum_regret = trace_.final_regret;
    row.pulls = trace_.pulls;
    if (weights.empty()) {
        row.weights.resize(trace_.pulls.size());
        for (std::size_t i = 0; i < row.weights.size(); ++i) {
            row.weights[i] = static_cast<double>(trace_.pulls[i]) / static_cast<double>(t);
        }
    } else {
        row.weights.assign(weights.begin(), weights.end());
    }
    trace_.rows.push_back(std::move(row));
}

RunTrace RoundRecorder::finish() && {
    return std::move(trace_);
}

}  // namespace corral

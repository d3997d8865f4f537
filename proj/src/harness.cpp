#include "corral/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "corral/baseline_corral.hpp"
#include "corral/boosting.hpp"
#include "corral/corral_tsallis.hpp"
#include "corral/corral_ucb.hpp"

namespace corral {

BuiltEnvironment build_environment(const ExperimentConfig& cfg, Rng& latent) {
    const EnvironmentSpec& e = cfg.environment;
    const std::size_t k = cfg.learners.size();
    BuiltEnvironment out;
    if (e.type == "gap") {
        GapInstanceConfig g = e.gap;
        g.learners = k;
        g.arms_best = cfg.learners.at(0).arms;
        g.arms_other = k > 1 ? cfg.learners[1].arms : 1;
        out.env = make_gap_instance(g);
    } else if (e.type == "single-copy-lb") {
        out.env = make_single_copy_lb_env(e.mu1, e.mu2, e.mu3);
    } else if (e.type == "alternating-lb") {
        // Both draws are taken unconditionally so a fixed alpha does not
        // shift the beta stream.
        const double a_draw = uniform01(latent);
        const int b_draw = bernoulli(0.5, latent) ? 1 : 0;
        const double a = e.lb_alpha.value_or(a_draw);
        const int b = e.lb_beta.value_or(b_draw);
        AlternatingLowerBound lb = e.formal
                                       ? make_formal_alternating_lb_env(e.mu2, a, b, cfg.horizon)
                                       : make_alternating_lb_env(e.mu1, e.mu2, e.mu3, a, b, cfg.horizon);
        out.env = lb.env;
        out.schedule = lb.schedule;
        out.lb_alpha = lb.alpha;
        out.lb_beta = lb.beta;
    } else if (e.type == "adversarial") {
        out.env = make_adversarial_env(e.losses);
    } else {
        throw ConfigError("unknown environment type '" + e.type + "'");
    }
    return out;
}

std::vector<LearnerPtr> build_learners(const ExperimentConfig& cfg, const BuiltEnvironment& env) {
    std::vector<LearnerPtr> out;
    for (const LearnerSpec& l : cfg.learners) {
        if (l.type == "ucb") {
            out.push_back(std::make_unique<UcbLearner>(l.arms));
        } else if (l.type == "ts") {
            out.push_back(std::make_unique<ThompsonLearner>(l.arms));
        } else if (l.type == "tsallis") {
            out.push_back(std::make_unique<TsallisInfLearner>(l.arms, l.eta));
        } else if (l.type == "se") {
            out.push_back(std::make_unique<SuccessiveEliminationLearner>(l.arms, cfg.horizon, l.se_alpha));
        } else if (l.type == "scripted") {
            if (!env.schedule) {
                throw ConfigError("scripted learner needs an environment with a schedule");
            }
            out.push_back(std::make_unique<ScriptedLearner>(l.arms, *env.schedule));
        } else {
            throw ConfigError("unknown learner type '" + l.type + "'");
        }
    }
    return out;
}

ResolvedConstants resolve_constants(const ExperimentConfig& cfg) {
    const Constants& c = cfg.constants;
    const std::size_t k = cfg.learners.size();
    const double T = static_cast<double>(cfg.horizon);
    ResolvedConstants r;
    r.beta = c.beta.value_or(theory_beta(cfg.horizon));
    if (c.eta_theory) {
        for (const LearnerSpec& l : cfg.learners) {
            r.eta_init.push_back(theory_eta_init(cfg.horizon, l.arms, c.alpha));
        }
    } else {
        r.eta_init.assign(k, c.eta_init);
    }
    r.copies = cfg.corraller == CorrallerKind::SingleCopyUcbC
                   ? 1
                   : c.copies.value_or(copies_for_horizon(cfg.horizon));
    r.lb_eta = c.lb_eta.value_or(std::sqrt(static_cast<double>(k) / T));
    r.lb_rate_factor = c.lb_rate_factor.value_or(std::exp(1.0 / std::log(T)));
    r.lb_gamma = c.lb_gamma.value_or(1.0 / T);
    return r;
}

RunTrace run_single(const ExperimentConfig& cfg, std::size_t run_id) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, run_id, kRunStream);
    Rng latent(derive_seed(cfg.master_seed, run_id, kLatentStream));
    Rng rng(seed);
    const BuiltEnvironment built = build_environment(cfg, latent);
    const std::vector<LearnerPtr> learners = build_learners(cfg, built);
    const ResolvedConstants rc = resolve_constants(cfg);
    const std::size_t every = cfg.resolved_snapshot_every();

    RunTrace trace;
    switch (cfg.corraller) {
        case CorrallerKind::UcbC:
        case CorrallerKind::SingleCopyUcbC: {
            UcbcOptions o;
            o.single_copy = cfg.corraller == CorrallerKind::SingleCopyUcbC;
            o.copies = rc.copies;
            o.alpha = cfg.constants.alpha;
            o.snapshot_every = every;
            trace = ucbc_run(learners, *built.env, cfg.horizon, rng, o);
            break;
        }
        case CorrallerKind::Tsallis: {
            TsallisOptions o;
            o.eta_init = rc.eta_init;
            o.beta = rc.beta;
            o.restart_learners = cfg.constants.restart;
            o.restart_scale = cfg.constants.restart_scale == "2/w" ? RestartScale::TwoOverW
                                                                    : RestartScale::HalfOverW;
            o.epoch_start_restart = cfg.constants.epoch_start_restart;
            o.offsets = cfg.constants.offsets;
            o.snapshot_every = every;
            trace = corral_tsallis_run(learners, *built.env, cfg.horizon, rng, o);
            break;
        }
        case CorrallerKind::LogBarrier: {
            LogBarrierOptions o;
            o.eta_init = rc.lb_eta;
            o.rate_factor = rc.lb_rate_factor;
            o.gamma = rc.lb_gamma;
            o.snapshot_every = every;
            trace = logbarrier_corral_run(learners, *built.env, cfg.horizon, rng, o);
            break;
        }
    }
    trace.run_id = run_id;
    trace.seed = seed;
    return trace;
}

std::vector<SummaryRow> summarize(std::span<const RunTrace> runs) {
    if (runs.empty()) {
        throw std::invalid_argument("summarize: no runs");
    }
    const std::size_t rows = runs.front().rows.size();
    for (const RunTrace& r : runs) {
        if (r.rows.size() != rows) {
            throw std::invalid_argument("summarize: runs have different snapshot grids");
        }
    }
    const double n = static_cast<double>(runs.size());
    std::vector<SummaryRow> out(rows);
    for (std::size_t m = 0; m < rows; ++m) {
        SummaryRow& s = out[m];
        s.t = runs.front().rows[m].t;
        const std::size_t k = runs.front().rows[m].pulls.size();
        s.mean_pulls.assign(k, 0.0);
        double sum = 0.0;
        for (const RunTrace& r : runs) {
            const TraceRow& row = r.rows[m];
            if (row.t != s.t) {
                throw std::invalid_argument("summarize: runs have different snapshot grids");
            }
            sum += row.cum_regret;
            for (std::size_t i = 0; i < k; ++i) {
                s.mean_pulls[i] += static_cast<double>(row.pulls[i]);
            }
        }
        s.mean_regret = sum / n;
        for (double& p : s.mean_pulls) {
            p /= n;
        }
        if (runs.size() > 1) {
            double ss = 0.0;
            for (const RunTrace& r : runs) {
                const double dev = r.rows[m].cum_regret - s.mean_regret;
                ss += dev * dev;
            }
            s.std_regret = std::sqrt(ss / (n - 1.0));
        }
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t threads) {
    validate_config(cfg);
    const std::size_t runs = cfg.runs;
    std::size_t workers = threads > 0 ? threads : std::max(1U, std::thread::hardware_concurrency());
    workers = std::min(workers, runs);

    ExperimentResult result;
    result.runs.resize(runs);
    std::vector<std::exception_ptr> errors(runs);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t id = next++; id < runs; id = next++) {
            try {
                result.runs[id] = run_single(cfg, id);
            } catch (...) {
                errors[id] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    for (std::size_t id = 0; id < runs; ++id) {
        if (errors[id]) {
            const std::string prefix = "run " + std::to_string(id) + " (seed " +
                                       std::to_string(derive_seed(cfg.master_seed, id, kRunStream)) +
                                       "): ";
            try {
                std::rethrow_exception(errors[id]);
            } catch (const std::exception& e) {
                throw std::runtime_error(prefix + e.what());
            }
        }
    }
    result.summary = summarize(result.runs);
    return result;
}

// --- reference lines ----------------------------------------------------------

namespace {

double clamped_log(double t) {
    return std::log(std::max(t, 2.0));
}

}  // namespace

double red_line(std::size_t learners, double t, std::size_t best_arms, double alpha) {
    return 4.0 * std::sqrt(static_cast<double>(learners) * t) +
           default_regret_bound(alpha, best_arms, t);
}

double green_line(std::span<const std::size_t> arms, std::span<const double> gaps,
                  std::size_t best, double t, double alpha) {
    if (arms.size() != gaps.size() || best >= arms.size()) {
        throw std::invalid_argument("green_line: size mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < arms.size(); ++i) {
        if (i == best) {
            continue;
        }
        if (!(gaps[i] > 0.0)) {
            throw std::invalid_argument("green_line: gaps must be positive");
        }
        acc += 4.0 * static_cast<double>(arms[i]) * clamped_log(t) / gaps[i];
    }
    return acc + default_regret_bound(alpha, arms[best], t);
}

double ucbc_red_line(std::size_t learners, double t, std::size_t best_arms, double alpha) {
    return 4.0 * std::sqrt(static_cast<double>(learners) * t) +
           clamped_log(t) * default_regret_bound(alpha, best_arms, t);
}

GapProfile gap_profile(const Environment& env) {
    const std::size_t k = env.learner_count();
    GapProfile p;
    Vec best_means(k, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < k; ++i) {
        p.arms.push_back(env.arm_count(i));
        for (std::size_t j = 0; j < p.arms[i]; ++j) {
            best_means[i] = std::max(best_means[i], env.mean(i, j, 1));
        }
    }
    p.best = static_cast<std::size_t>(std::max_element(best_means.begin(), best_means.end()) -
                                      best_means.begin());
    p.gaps.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        p.gaps[i] = best_means[p.best] - best_means[i];
    }
    return p;
}

std::vector<ReferenceRow> reference_lines(const ExperimentConfig& cfg,
                                          std::span<const std::size_t> t_grid) {
    Rng latent(derive_seed(cfg.master_seed, 0, kLatentStream));
    const BuiltEnvironment built = build_environment(cfg, latent);
    const GapProfile p = gap_profile(*built.env);
    const std::size_t k = p.arms.size();
    const double alpha = cfg.constants.alpha;
    std::vector<ReferenceRow> out;
    for (std::size_t t : t_grid) {
        const double td = static_cast<double>(t);
        ReferenceRow row;
        row.t = t;
        row.red = red_line(k, td, p.arms[p.best], alpha);
        row.red_ucbc = ucbc_red_line(k, td, p.arms[p.best], alpha);
        try {
            row.green = green_line(p.arms, p.gaps, p.best, td, alpha);
        } catch (const std::invalid_argument&) {
            row.green = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace corral

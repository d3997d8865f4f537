#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "corral/corral_tsallis.hpp"
#include "corral/environments.hpp"
#include "corral/learners.hpp"
#include "oracles.hpp"

using corral::Rng;
using corral::Vec;

namespace {

std::vector<corral::LearnerPtr> ucb_learners(std::size_t k, std::size_t arms) {
    std::vector<corral::LearnerPtr> v;
    for (std::size_t i = 0; i < k; ++i) {
        v.push_back(std::make_unique<corral::UcbLearner>(arms));
    }
    return v;
}

/// Two single-arm learners with means 0.9 and 0.1: learner 2's weight
/// quickly falls through the threshold ladder.
std::shared_ptr<corral::StochasticEnvironment> wide_two_learner_env() {
    using Arm = corral::StochasticEnvironment::Arm;
    return std::make_shared<corral::StochasticEnvironment>(
        std::vector<std::vector<Arm>>{{Arm{0.9, false}}, {Arm{0.1, false}}});
}

struct Observed {
    std::size_t t;
    corral::StepKind kind;
    Vec w;
    Vec eta;
    std::vector<std::size_t> rescale;
    std::size_t epoch;
};

}  // namespace

// --- constants ----------------------------------------------------------------

TEST(TsallisConstants, TheoryBeta) {
    // floor(e^10) = 22026 has ceil(ln T) = 10.
    EXPECT_NEAR(corral::theory_beta(22026), std::exp(0.01), 1e-15);
    EXPECT_NEAR(corral::theory_beta(22026), 1.01005, 1e-5);
}

TEST(TsallisConstants, TheoryEtaInit) {
    const double T = 1e5;
    const double lT = std::log(T);
    const double expected = (1.0 - std::exp(-1.0 / (lT * lT))) * std::sqrt(T) /
                            (50.0 * std::sqrt(5.0 * T * lT));
    EXPECT_NEAR(corral::theory_eta_init(100000, 5), expected, 1e-15);
    EXPECT_THROW(corral::theory_eta_init(1, 5), std::invalid_argument);
}

TEST(TsallisConstants, RhoLadder) {
    const Vec ladder = corral::rho_ladder(2, 1000);
    const Vec expected{36, 72, 144, 288, 576, 1152};
    EXPECT_EQ(ladder, expected);
    EXPECT_THROW(corral::rho_ladder(1, 35), std::invalid_argument);
}

// --- mixing and estimator -------------------------------------------------------

TEST(Mixing, Example) {
    const Vec m = corral::mix_distribution(Vec{1.0, 0.0}, 10);
    EXPECT_NEAR(m[0], 0.975, 1e-15);
    EXPECT_NEAR(m[1], 0.025, 1e-15);
}

TEST(Mixing, UniformIsFixedPoint) {
    const Vec m = corral::mix_distribution(Vec(4, 0.25), 100);
    for (double v : m) {
        EXPECT_NEAR(v, 0.25, 1e-16);
    }
}

TEST(Mixing, FloorAndSimplex) {
    std::mt19937_64 gen(1);
    for (std::size_t k = 1; k <= 8; ++k) {
        const std::size_t T = 1000;
        for (int rep = 0; rep < 50; ++rep) {
            Vec w(k, 0.0);
            w[static_cast<std::size_t>(rep) % k] = 1.0;
            if (rep % 2 == 1) {
                w = oracle::random_interior(k, gen);
            }
            const Vec m = corral::mix_distribution(w, T);
            EXPECT_TRUE(corral::on_simplex(m, 1e-12));
            const double floor = 1.0 / (static_cast<double>(T) * static_cast<double>(k * k));
            for (double v : m) {
                EXPECT_GE(v, floor - 1e-15);
            }
        }
    }
}

TEST(Estimator, SingleNonZeroCoordinateAndFeedback) {
    using Arm = corral::StochasticEnvironment::Arm;
    auto env = std::make_shared<corral::StochasticEnvironment>(
        std::vector<std::vector<Arm>>{{Arm{0.3, true}}, {Arm{0.6, true}}, {Arm{0.8, true}}});
    auto learners = ucb_learners(3, 1);
    const Vec w{0.2, 0.3, 0.5};
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        const auto est = corral::play_distribution(w, w, learners, *env, 1, rng);
        for (std::size_t c = 0; c < 3; ++c) {
            if (c == est.chosen) {
                EXPECT_NEAR(est.ell[c], est.raw_loss / w[c], 1e-15);
            } else {
                EXPECT_EQ(est.ell[c], 0.0);
            }
        }
        EXPECT_EQ(est.probability, w[est.chosen]);
    }
    // Unselected rounds are fed as zero rewards, selected ones as r / p.
    const auto& u = dynamic_cast<const corral::UcbLearner&>(*learners[2]);
    EXPECT_EQ(u.updates(), 200U);
}

TEST(Estimator, UnbiasedMonteCarlo) {
    using Arm = corral::StochasticEnvironment::Arm;
    const Vec loss{0.7, 0.4, 0.2};
    auto env = std::make_shared<corral::StochasticEnvironment>(std::vector<std::vector<Arm>>{
        {Arm{1.0 - loss[0], true}}, {Arm{1.0 - loss[1], true}}, {Arm{1.0 - loss[2], true}}});
    auto learners = ucb_learners(3, 1);
    const Vec w{0.1, 0.3, 0.6};
    const int n = 100000;
    Vec sum(3, 0.0);
    Rng rng(8);
    for (int i = 0; i < n; ++i) {
        const auto est = corral::play_distribution(w, w, learners, *env, 1, rng);
        for (std::size_t c = 0; c < 3; ++c) {
            sum[c] += est.ell[c];
        }
    }
    for (std::size_t c = 0; c < 3; ++c) {
        const double se = loss[c] / w[c] * std::sqrt(w[c] * (1.0 - w[c]) / n);
        EXPECT_NEAR(sum[c] / n, loss[c], 3.0 * se);
    }
}

// --- FTRL / OMD ---------------------------------------------------------------------

TEST(Ftrl, Examples) {
    const auto u = corral::ftrl_step(Vec{0.0, 0.0, 0.0}, Vec{1.0, 1.0, 1.0});
    for (double v : u.weights) {
        EXPECT_NEAR(v, 1.0 / 3.0, 1e-12);
    }
    const auto r = corral::ftrl_step(Vec{0.0, 2.0}, Vec{1.0, 1.0});
    EXPECT_NEAR(r.weights[0], 0.780, 1e-3);
    EXPECT_NEAR(r.weights[1], 0.220, 1e-3);
}

TEST(Omd, ZeroLossIsIdentity) {
    const Vec w{0.5, 0.3, 0.2};
    const Vec eta{1.0, 0.5, 2.0};
    const auto r = corral::omd_step(w, Vec{0.0, 0.0, 0.0}, eta, {}, 1.0);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(r.weights[i], w[i], 1e-12);
    }
}

TEST(Omd, EmptyRescaleMatchesUntransformedFtrl) {
    const Vec L{3.0, 1.0, 2.5};
    const Vec eta{0.8, 0.8, 0.8};
    const Vec ell{0.0, 4.0, 0.0};
    const auto w = corral::ftrl_step(L, eta);
    const auto r = corral::omd_step(w.weights, ell, eta, {}, 1.3);
    // Transform equals L + ell - (nu + mu) * 1.
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(r.transformed_loss[i], L[i] + ell[i] - (w.nu + r.mu), 1e-9);
    }
    const auto direct = corral::ftrl_step(Vec{L[0] + ell[0], L[1] + ell[1], L[2] + ell[2]}, eta);
    const auto shifted = corral::ftrl_step(r.transformed_loss, eta);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(shifted.weights[i], direct.weights[i], 1e-10);
        EXPECT_NEAR(r.weights[i], direct.weights[i], 1e-10);
    }
}

TEST(Omd, MatchesDirectMirrorDescentOracle) {
    std::mt19937_64 gen(13);
    for (int rep = 0; rep < 100; ++rep) {
        const Vec w = oracle::random_interior(3, gen);
        const Vec eta{0.3 + rep * 0.01, 1.0, 2.0};
        Vec ell(3, 0.0);
        ell[static_cast<std::size_t>(rep) % 3] = 1.0 / w[static_cast<std::size_t>(rep) % 3];
        const auto r = corral::omd_step(w, ell, eta, {}, 1.0);
        const Vec o = oracle::omd_direct(w, ell, eta);
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_NEAR(r.weights[i], o[i], 1e-10);
        }
    }
}

TEST(Omd, TransformedLossEquivalence) {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t k = 2 + static_cast<std::size_t>(rep) % 5;
        Vec L(k), eta(k);
        for (std::size_t i = 0; i < k; ++i) {
            L[i] = 200.0 * unif(gen);
            eta[i] = 0.01 + unif(gen);
        }
        const Vec w = corral::ftrl_step(L, eta).weights;
        Vec ell(k, 0.0);
        const std::size_t c = static_cast<std::size_t>(unif(gen) * static_cast<double>(k)) % k;
        ell[c] = unif(gen) / std::max(w[c], 1e-6);
        const double beta = 1.0 + unif(gen);
        std::vector<std::size_t> R;
        for (std::size_t i = 0; i < k; ++i) {
            if (unif(gen) < 0.4) {
                R.push_back(i);
            }
        }
        const auto r = corral::omd_step(w, ell, eta, R, beta);
        Vec eta2 = eta;
        for (std::size_t i : R) {
            eta2[i] *= beta;
        }
        const Vec f = corral::ftrl_step(r.transformed_loss, eta2).weights;
        for (std::size_t i = 0; i < k; ++i) {
            ASSERT_NEAR(f[i], r.weights[i], 1e-8) << "instance " << rep;
            ASSERT_GE(r.transformed_loss[i], -1e-9);
        }
    }
}

TEST(Omd, BetaOneReducesToPlainFtrl) {
    const Vec L{5.0, 2.0, 7.0};
    const Vec eta{0.5, 0.5, 0.5};
    const Vec ell1{0.0, 3.0, 0.0};
    const Vec ell2{1.5, 0.0, 0.0};
    const auto w = corral::ftrl_step(L, eta);
    const std::vector<std::size_t> R{1};
    const auto r = corral::omd_step(w.weights, ell1, eta, R, 1.0);
    Vec t2 = r.transformed_loss;
    Vec plain = L;
    for (std::size_t i = 0; i < 3; ++i) {
        t2[i] += ell2[i];
        plain[i] += ell1[i] + ell2[i];
    }
    const Vec a = corral::ftrl_step(t2, eta).weights;
    const Vec b = corral::ftrl_step(plain, eta).weights;
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(a[i], b[i], 1e-8);
    }
}

TEST(Omd, RejectsBadInput) {
    EXPECT_THROW(corral::omd_step(Vec{0.5, 0.5}, Vec{0.0}, Vec{1.0, 1.0}, {}, 1.0), std::invalid_argument);
    EXPECT_THROW(corral::omd_step(Vec{0.5, 0.5}, Vec{0.0, 0.0}, Vec{1.0, 1.0}, {}, 0.5), std::invalid_argument);
}

// --- thresholds and offsets -------------------------------------------------------

TEST(Threshold, AllAboveFirstRung) {
    const Vec ladder = corral::rho_ladder(3, 1000);
    std::vector<std::size_t> theta{1, 1, 1};
    EXPECT_TRUE(corral::threshold_check(Vec{0.3, 0.3, 0.4}, theta, ladder, true, false).empty());
    EXPECT_TRUE(corral::threshold_check(Vec{0.3, 0.3, 0.4}, theta, ladder, false, false).empty());
}

TEST(Threshold, EpochStartExample) {
    const Vec ladder = corral::rho_ladder(2, 100000);
    std::vector<std::size_t> theta{1, 1};
    const auto R = corral::threshold_check(Vec{0.9, 0.1 / 9.0}, theta, ladder, true, false);
    ASSERT_EQ(R.size(), 1U);
    EXPECT_EQ(R[0], 1U);
    EXPECT_EQ(theta[1], 3U);
    EXPECT_EQ(theta[0], 1U);
}

TEST(Threshold, GuardAfterBlock) {
    const Vec ladder = corral::rho_ladder(2, 100000);
    std::vector<std::size_t> theta{1, 1};
    EXPECT_TRUE(corral::threshold_check(Vec{0.999, 0.001}, theta, ladder, false, true).empty());
    EXPECT_EQ(theta[1], 1U);
}

TEST(Threshold, MidEpochIncrementsAndExhausts) {
    const Vec ladder = corral::rho_ladder(2, 100);  // 36, 72, 144
    std::vector<std::size_t> theta{1, 1};
    const Vec w{0.999, 0.001};
    for (std::size_t step = 1; step <= ladder.size(); ++step) {
        const auto R = corral::threshold_check(w, theta, ladder, false, false);
        ASSERT_EQ(R.size(), 1U);
        EXPECT_EQ(theta[1], step + 1);
    }
    EXPECT_TRUE(corral::threshold_check(w, theta, ladder, false, false).empty());
    EXPECT_EQ(theta[1], ladder.size() + 1);
}

TEST(Offsets, Examples) {
    const Vec L{1.0, 2.0};
    EXPECT_EQ(corral::apply_loss_offset(L, Vec{0.0, 0.0}), L);
    const Vec d = corral::model_selection_offsets(Vec{2.0, 4.0}, 0.5, 10000);
    EXPECT_NEAR(d[0], 0.02, 1e-15);
    EXPECT_NEAR(d[1], 0.04, 1e-15);
    const Vec eta{1.0, 1.0};
    const double base = corral::ftrl_step(L, eta).weights[1];
    const double shifted = corral::ftrl_step(corral::apply_loss_offset(L, Vec{0.0, 0.5}), eta).weights[1];
    EXPECT_LT(shifted, base);
    EXPECT_THROW(corral::apply_loss_offset(L, Vec{0.0, -1.0}), std::invalid_argument);
}

// --- full corraller ---------------------------------------------------------------

TEST(TsallisCorraller, SingleLearnerMatchesBase) {
    using Arm = corral::StochasticEnvironment::Arm;
    auto env = std::make_shared<corral::StochasticEnvironment>(
        std::vector<std::vector<Arm>>{{Arm{0.2, true}, Arm{0.5, true}, Arm{0.9, true}}});
    auto learners = ucb_learners(1, 3);
    const std::size_t T = 2000;
    Rng rng(1);
    corral::TsallisCorraller c(learners, T, {});
    const auto trace = c.run(*env, rng);

    corral::UcbLearner base(3);
    double regret = 0.0;
    for (std::size_t t = 1; t <= T; ++t) {
        const std::size_t a = base.propose(rng);
        regret += corral::pseudo_regret_increment(*env, 0, a, t);
        base.update(corral::direct_feedback(a, env->mean(0, a, t)), rng);
    }
    EXPECT_LE(std::abs(trace.final_regret - regret), 2.0 * static_cast<double>(c.warm_start_rounds()));
    EXPECT_EQ(c.nrs_blocks(), 0U);
}

TEST(TsallisCorraller, WarmStartAndEpochStructure) {
    auto env = corral::make_gap_instance({});
    auto learners = ucb_learners(1, 10);
    for (int i = 0; i < 5; ++i) {
        learners.push_back(std::make_unique<corral::UcbLearner>(5));
    }
    const std::size_t T = 20000;
    std::vector<Observed> log;
    corral::TsallisOptions opts;
    opts.observer = [&](const corral::TsallisStepInfo& s) {
        log.push_back({s.t, s.kind, Vec(s.weights.begin(), s.weights.end()),
                       Vec(s.eta.begin(), s.eta.end()),
                       std::vector<std::size_t>(s.rescale.begin(), s.rescale.end()), s.epoch});
    };
    corral::TsallisCorraller c(learners, T, opts);
    Rng rng(3);
    const auto trace = c.run(*env, rng);
    ASSERT_EQ(log.size(), T);
    EXPECT_EQ(trace.rounds, T);

    const std::size_t warm = c.warm_start_rounds();
    EXPECT_EQ(warm, 6U * (static_cast<std::size_t>(std::ceil(std::log(20000.0))) + 1));
    for (std::size_t t = 1; t <= warm; ++t) {
        EXPECT_EQ(log[t - 1].kind, corral::StepKind::WarmStart);
        EXPECT_EQ(trace.group_pulls.size(), 6U);
    }

    std::map<std::size_t, std::size_t> lengths;
    for (const auto& o : log) {
        ++lengths[o.epoch];
    }
    EXPECT_EQ(lengths[0], warm);
    std::size_t j = 0;
    for (const auto& [epoch, len] : lengths) {
        EXPECT_EQ(epoch, j);
        if (epoch + 1 < lengths.size()) {
            EXPECT_EQ(len, warm << epoch);
        } else {
            EXPECT_LE(len, warm << epoch);
        }
        ++j;
    }
    EXPECT_LE(lengths.size(), static_cast<std::size_t>(std::ceil(std::log2(20000.0))) + 1);
}

TEST(TsallisCorraller, FtrlScheduleAddsOnePerRound) {
    auto env = corral::make_gap_instance({});
    auto learners = ucb_learners(6, 5);
    learners[0] = std::make_unique<corral::UcbLearner>(10);
    std::vector<Observed> log;
    corral::TsallisOptions opts;
    opts.eta_init = Vec{0.7};
    opts.observer = [&](const corral::TsallisStepInfo& s) {
        log.push_back({s.t, s.kind, Vec(s.weights.begin(), s.weights.end()),
                       Vec(s.eta.begin(), s.eta.end()), {}, s.epoch});
    };
    corral::TsallisCorraller c(learners, 10000, opts);
    Rng rng(2);
    c.run(*env, rng);
    std::size_t checked = 0;
    for (std::size_t n = 1; n < log.size(); ++n) {
        if (log[n].kind == corral::StepKind::Ftrl &&
            (log[n - 1].kind == corral::StepKind::Ftrl || log[n - 1].kind == corral::StepKind::NrsFrozen)) {
            for (std::size_t i = 0; i < 6; ++i) {
                const double a = 1.0 / (log[n - 1].eta[i] * log[n - 1].eta[i]);
                const double b = 1.0 / (log[n].eta[i] * log[n].eta[i]);
                ASSERT_NEAR(b - a, 1.0, 1e-9 * b);
                ASSERT_LE(log[n].eta[i], log[n - 1].eta[i]);
            }
            ++checked;
        }
    }
    EXPECT_GT(checked, 9000U);
    // The first FTRL round uses eta_init.
    EXPECT_NEAR(log[c.warm_start_rounds()].eta[0], 0.7, 1e-15);
}

TEST(TsallisCorraller, NegRegBlockRescalesAndRestarts) {
    auto env = wide_two_learner_env();
    auto learners = ucb_learners(2, 1);
    corral::TsallisCorraller* self = nullptr;
    std::vector<Observed> log;
    std::vector<std::pair<std::size_t, double>> scale_checks;
    std::size_t blocks_seen = 0;
    corral::TsallisOptions opts;
    opts.observer = [&](const corral::TsallisStepInfo& s) {
        log.push_back({s.t, s.kind, Vec(s.weights.begin(), s.weights.end()),
                       Vec(s.eta.begin(), s.eta.end()),
                       std::vector<std::size_t>(s.rescale.begin(), s.rescale.end()), s.epoch});
        if (s.kind == corral::StepKind::NrsFtrl) {
            // Trigger round is two entries back.
            const Observed& trigger = log[log.size() - 3];
            ASSERT_FALSE(trigger.rescale.empty());
            ++blocks_seen;
            for (std::size_t i = 0; i < 2; ++i) {
                const bool in_r = std::find(trigger.rescale.begin(), trigger.rescale.end(), i) !=
                                  trigger.rescale.end();
                const double ratio = s.eta[i] / trigger.eta[i];
                ASSERT_NEAR(ratio, in_r ? self->beta() : 1.0, 1e-12);
                if (in_r) {
                    const double expected = std::max(1.0, 2.0 / trigger.w[i]);
                    ASSERT_DOUBLE_EQ(self->learners()[i]->scale(), expected);
                    scale_checks.emplace_back(i, expected);
                }
            }
        }
    };
    corral::TsallisCorraller c(learners, 20000, opts);
    self = &c;
    Rng rng(6);
    c.run(*env, rng);
    EXPECT_GT(blocks_seen, 0U);
    EXPECT_EQ(blocks_seen, c.nrs_blocks());
    EXPECT_FALSE(scale_checks.empty());
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_LE(c.theta()[i], c.ladder().size() + 1);
    }
}

TEST(TsallisCorraller, RestartScaleExample) {
    // Weight 0.01 restarts with scale 2 / 0.01 = 200.
    auto learners = ucb_learners(1, 2);
    learners[0]->restart(std::max(1.0, 2.0 / 0.01));
    EXPECT_DOUBLE_EQ(learners[0]->scale(), 200.0);
}

TEST(TsallisCorraller, ThetaMonotoneWithinEpochAndBlockCount) {
    auto env = wide_two_learner_env();
    auto learners = ucb_learners(2, 1);
    corral::TsallisCorraller* self = nullptr;
    std::vector<std::size_t> prev_theta;
    std::size_t prev_epoch = 0;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> blocks;
    corral::TsallisOptions opts;
    opts.observer = [&](const corral::TsallisStepInfo& s) {
        const auto th = self->theta();
        std::vector<std::size_t> cur(th.begin(), th.end());
        if (s.epoch == prev_epoch && !prev_theta.empty()) {
            for (std::size_t i = 0; i < cur.size(); ++i) {
                ASSERT_GE(cur[i], prev_theta[i]);
            }
        }
        for (std::size_t i : s.rescale) {
            ++blocks[{s.epoch, i}];
        }
        prev_theta = cur;
        prev_epoch = s.epoch;
    };
    corral::TsallisCorraller c(learners, 50000, opts);
    self = &c;
    Rng rng(10);
    c.run(*env, rng);
    for (const auto& [key, count] : blocks) {
        EXPECT_LE(count, c.ladder().size());
    }
}

TEST(TsallisCorraller, SamplingDistributionsRespectFloor) {
    auto env = wide_two_learner_env();
    auto learners = ucb_learners(2, 1);
    const std::size_t T = 20000;
    double min_mixed = 1.0;
    corral::TsallisOptions opts;
    opts.observer = [&](const corral::TsallisStepInfo& s) {
        if (s.kind == corral::StepKind::WarmStart) {
            return;
        }
        for (double v : corral::mix_distribution(s.weights, T)) {
            min_mixed = std::min(min_mixed, v);
        }
        ASSERT_TRUE(corral::on_simplex(s.weights, 1e-9));
    };
    Rng rng(7);
    corral::corral_tsallis_run(learners, *env, T, rng, opts);
    EXPECT_GE(min_mixed, 1.0 / (static_cast<double>(T) * 4.0) - 1e-15);
}

TEST(TsallisCorraller, TimeVaryingEnvironment) {
    // Best learner alternates every round; no stationarity assumption.
    std::vector<std::vector<Vec>> table{{Vec{0.1}, Vec{0.9}}, {Vec{0.9}, Vec{0.1}}};
    auto env = corral::make_adversarial_env(table);
    auto learners = ucb_learners(2, 1);
    Rng rng(3);
    const auto trace = corral::corral_tsallis_run(learners, *env, 2000, rng);
    EXPECT_EQ(trace.rounds, 2000U);
    EXPECT_GE(trace.final_regret, 0.0);
}

TEST(TsallisCorraller, OffsetsShiftPlayAwayFromPenalized) {
    auto env = corral::make_gap_instance({.in_gap = 0.0, .out_gap = 0.0, .low_reward = 0.5, .learners = 2});
    auto learners = ucb_learners(2, 5);
    learners[0] = std::make_unique<corral::UcbLearner>(10);
    corral::TsallisOptions opts;
    opts.offsets = Vec{0.0, 0.05};
    Rng rng(1);
    const auto trace = corral::corral_tsallis_run(learners, *env, 20000, rng, opts);
    EXPECT_GT(trace.pulls[0], trace.pulls[1]);
    EXPECT_EQ(trace.final_regret, 0.0);
}

TEST(TsallisCorraller, RejectsBadOptions) {
    auto learners = ucb_learners(2, 1);
    EXPECT_THROW(corral::TsallisCorraller(learners, 10, {}), std::invalid_argument);
    corral::TsallisOptions opts;
    opts.eta_init = Vec{1.0, 2.0, 3.0};
    EXPECT_THROW(corral::TsallisCorraller(learners, 1000, opts), std::invalid_argument);
    corral::TsallisOptions neg;
    neg.offsets = Vec{0.0, -1.0};
    EXPECT_THROW(corral::TsallisCorraller(learners, 1000, neg), std::invalid_argument);
}

TEST(TsallisCorraller, Deterministic) {
    auto env = corral::make_gap_instance({});
    auto learners = ucb_learners(6, 5);
    learners[0] = std::make_unique<corral::UcbLearner>(10);
    Rng a(5);
    Rng b(5);
    const auto ta = corral::corral_tsallis_run(learners, *env, 5000, a);
    const auto tb = corral::corral_tsallis_run(learners, *env, 5000, b);
    EXPECT_EQ(ta.final_regret, tb.final_regret);
    EXPECT_EQ(ta.pulls, tb.pulls);
}

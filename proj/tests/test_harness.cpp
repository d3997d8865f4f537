#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "corral/config.hpp"
#include "corral/harness.hpp"
#include "corral/output.hpp"

using corral::ConfigError;
using corral::ExperimentConfig;

namespace {

const char* kGapConfig = R"({
  "horizon": 2000,
  "runs": 3,
  "master_seed": 5,
  "snapshot_every": 100,
  "corraller": "tsallis",
  "environment": {"type": "gap"},
  "learners": [{"type": "ucb", "arms": 10}, {"type": "ts", "arms": 5}, {"type": "tsallis", "arms": 5}],
  "constants": {}
})";

std::string with_replaced(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    if (pos == std::string::npos) {
        throw std::logic_error("pattern not found: " + from);
    }
    return text.replace(pos, from.size(), to);
}

std::string trace_text(const corral::ExperimentResult& r, std::size_t k) {
    std::ostringstream s;
    corral::write_trace_csv(s, r.runs, k);
    return s.str();
}

std::string summary_text(const corral::ExperimentResult& r, std::size_t k) {
    std::ostringstream s;
    corral::write_summary_csv(s, r.summary, k);
    return s.str();
}

}  // namespace

// --- reference lines ----------------------------------------------------------

TEST(ReferenceLines, RedExample) {
    const double red = corral::red_line(6, 1e6, 10, 1.0);
    EXPECT_NEAR(red, 4.0 * std::sqrt(6e6) + std::sqrt(10.0 * 1e6 * std::log(1e6)), 1e-9);
    // Hand-rounded example value.
    EXPECT_NEAR(red, 21550.0, 21550.0 * 1e-3);
}

TEST(ReferenceLines, GreenExample) {
    const std::vector<std::size_t> arms{10, 5, 5, 5, 5, 5};
    const std::vector<double> gaps{0.0, 0.19, 0.19, 0.19, 0.19, 0.19};
    const double green = corral::green_line(arms, gaps, 0, 1e6, 1.0);
    EXPECT_NEAR(green, 19024.0, 19024.0 * 1e-3);
}

TEST(ReferenceLines, ClampedAtSmallT) {
    const std::vector<std::size_t> arms{2, 2};
    const std::vector<double> gaps{0.0, 0.5};
    EXPECT_TRUE(std::isfinite(corral::red_line(2, 1.0, 2, 1.0)));
    EXPECT_TRUE(std::isfinite(corral::green_line(arms, gaps, 0, 1.0, 1.0)));
    EXPECT_TRUE(std::isfinite(corral::ucbc_red_line(2, 1.0, 2, 1.0)));
}

TEST(ReferenceLines, ZeroGapIsInvalid) {
    const std::vector<std::size_t> arms{2, 2};
    const std::vector<double> gaps{0.0, 0.0};
    EXPECT_THROW(corral::green_line(arms, gaps, 0, 100.0, 1.0), std::invalid_argument);
}

TEST(ReferenceLines, UcbcLineCarriesLogFactor) {
    const double t = 2e5;
    EXPECT_NEAR(corral::ucbc_red_line(6, t, 10, 1.0),
                4.0 * std::sqrt(6.0 * t) + std::log(t) * std::sqrt(10.0 * t * std::log(t)), 1e-6);
}

TEST(ReferenceLines, GapProfileOfLargeGapInstance) {
    auto env = corral::make_gap_instance({});
    const auto p = corral::gap_profile(*env);
    EXPECT_EQ(p.best, 0U);
    EXPECT_EQ(p.arms[0], 10U);
    EXPECT_NEAR(p.gaps[3], 0.19, 1e-12);
    EXPECT_EQ(p.gaps[0], 0.0);
}

TEST(ReferenceLines, FromConfig) {
    const ExperimentConfig cfg = corral::parse_config(kGapConfig);
    const std::vector<std::size_t> grid{1000, 2000};
    const auto rows = corral::reference_lines(cfg, grid);
    ASSERT_EQ(rows.size(), 2U);
    EXPECT_NEAR(rows[1].red, corral::red_line(3, 2000.0, 10, 1.0), 1e-9);
    EXPECT_TRUE(std::isfinite(rows[1].green));
}

// --- config -----------------------------------------------------------------------

TEST(Config, ParsesAndFillsDefaults) {
    const ExperimentConfig cfg = corral::parse_config(kGapConfig);
    EXPECT_EQ(cfg.horizon, 2000U);
    EXPECT_EQ(cfg.runs, 3U);
    EXPECT_EQ(cfg.master_seed, 5U);
    EXPECT_EQ(cfg.corraller, corral::CorrallerKind::Tsallis);
    EXPECT_EQ(cfg.learners.size(), 3U);
    EXPECT_DOUBLE_EQ(cfg.environment.gap.out_gap, 0.19);
    EXPECT_DOUBLE_EQ(cfg.constants.eta_init, 1.0);
    EXPECT_TRUE(cfg.constants.restart);
    EXPECT_FALSE(cfg.constants.beta.has_value());
}

TEST(Config, SnapshotDefault) {
    ExperimentConfig cfg = corral::parse_config(with_replaced(kGapConfig, "\"snapshot_every\": 100,", ""));
    EXPECT_EQ(cfg.resolved_snapshot_every(), 2U);
    cfg.horizon = 500;
    EXPECT_EQ(cfg.resolved_snapshot_every(), 1U);
}

TEST(Config, UnknownKeysRejected) {
    EXPECT_THROW(corral::parse_config(with_replaced(kGapConfig, "\"runs\"", "\"rusn\"")), ConfigError);
    EXPECT_THROW(corral::parse_config(with_replaced(kGapConfig, "{\"type\": \"gap\"}",
                                                    "{\"type\": \"gap\", \"gap\": 1}")),
                 ConfigError);
    EXPECT_THROW(corral::parse_config(with_replaced(kGapConfig, "\"arms\": 10}", "\"arms\": 10, \"x\": 1}")),
                 ConfigError);
    EXPECT_THROW(corral::parse_config(with_replaced(kGapConfig, "\"constants\": {}",
                                                    "\"constants\": {\"eta\": 1}")),
                 ConfigError);
}

TEST(Config, InvalidValuesRejected) {
    EXPECT_THROW(corral::parse_config("{"), ConfigError);
    EXPECT_THROW(corral::parse_config(with_replaced(kGapConfig, "\"horizon\": 2000", "\"horizon\": 50")),
                 ConfigError);
    EXPECT_THROW(corral::parse_config(with_replaced(kGapConfig, "\"tsallis\",", "\"exp3\",")), ConfigError);
    EXPECT_THROW(corral::parse_config(with_replaced(kGapConfig, "\"ts\"", "\"scripted\"")), ConfigError);
    EXPECT_THROW(corral::parse_config(with_replaced(kGapConfig, "\"constants\": {}",
                                                    "\"constants\": {\"beta\": 0.5}")),
                 ConfigError);
    EXPECT_THROW(corral::parse_config(with_replaced(kGapConfig, "\"constants\": {}",
                                                    "\"constants\": {\"restart_scale\": \"w\"}")),
                 ConfigError);
    EXPECT_THROW(corral::parse_config(with_replaced(kGapConfig, "\"runs\": 3", "\"runs\": -3")), ConfigError);
    // Learners 2..K of a gap instance must have equal arm counts.
    EXPECT_THROW(corral::parse_config(with_replaced(kGapConfig, "\"ts\", \"arms\": 5", "\"ts\", \"arms\": 4")),
                 ConfigError);
}

TEST(Config, TheoryStepSize) {
    const ExperimentConfig cfg = corral::parse_config(
        with_replaced(kGapConfig, "\"constants\": {}", "\"constants\": {\"eta_init\": \"theory\"}"));
    EXPECT_TRUE(cfg.constants.eta_theory);
    const auto rc = corral::resolve_constants(cfg);
    ASSERT_EQ(rc.eta_init.size(), 3U);
    EXPECT_LT(rc.eta_init[0], rc.eta_init[1]);
}

TEST(Config, JsonRoundTrip) {
    const ExperimentConfig cfg = corral::parse_config(kGapConfig);
    const ExperimentConfig again = corral::parse_config(corral::config_to_json(cfg));
    EXPECT_EQ(corral::config_to_json(cfg), corral::config_to_json(again));
}

TEST(Config, ShippedConfigsValidate) {
    for (const char* name : {"large_gap_tsallis", "large_gap_ucbc", "large_gap_logbarrier",
                             "small_gap_tsallis", "small_gap_logbarrier", "single_copy_lb_boosted",
                             "single_copy_lb_single", "alternating_lb_tsallis"}) {
        EXPECT_NO_THROW(corral::load_config(std::string(CORRAL_CONFIG_DIR) + "/" + name + ".json")) << name;
    }
    EXPECT_THROW(corral::load_config("/nonexistent/config.json"), ConfigError);
}

// --- harness ------------------------------------------------------------------------

TEST(Harness, SingleRunHasZeroStd) {
    ExperimentConfig cfg = corral::parse_config(kGapConfig);
    cfg.runs = 1;
    const auto r = corral::run_experiment(cfg, 1);
    for (const auto& row : r.summary) {
        EXPECT_EQ(row.std_regret, 0.0);
    }
}

TEST(Harness, SummaryStatistics) {
    corral::RunTrace a;
    corral::RunTrace b;
    a.rows.push_back({.t = 10, .cum_regret = 1.0, .pulls = {4, 6}});
    b.rows.push_back({.t = 10, .cum_regret = 3.0, .pulls = {8, 2}});
    const std::vector<corral::RunTrace> runs{a, b};
    const auto s = corral::summarize(runs);
    ASSERT_EQ(s.size(), 1U);
    EXPECT_DOUBLE_EQ(s[0].mean_regret, 2.0);
    EXPECT_DOUBLE_EQ(s[0].std_regret, std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(s[0].mean_pulls[0], 6.0);
    b.rows[0].t = 11;
    const std::vector<corral::RunTrace> bad{a, b};
    EXPECT_THROW(corral::summarize(bad), std::invalid_argument);
}

TEST(Harness, DeterministicAcrossThreadCounts) {
    const ExperimentConfig cfg = corral::parse_config(kGapConfig);
    const auto one = corral::run_experiment(cfg, 1);
    const auto many = corral::run_experiment(cfg, 3);
    EXPECT_EQ(trace_text(one, 3), trace_text(many, 3));
    EXPECT_EQ(summary_text(one, 3), summary_text(many, 3));
    EXPECT_EQ(one.runs[2].seed, corral::derive_seed(5, 2, corral::kRunStream));
}

TEST(Harness, RunsDifferAcrossSeeds) {
    const ExperimentConfig cfg = corral::parse_config(kGapConfig);
    const auto r = corral::run_experiment(cfg, 2);
    EXPECT_NE(r.runs[0].final_regret, r.runs[1].final_regret);
}

TEST(Harness, EveryCorrallerRuns) {
    for (const char* name : {"ucb-c", "single-copy-ucb-c", "log-barrier"}) {
        const ExperimentConfig cfg = corral::parse_config(
            with_replaced(kGapConfig, "\"tsallis\",", std::string("\"") + name + "\","));
        const auto r = corral::run_experiment(cfg, 2);
        EXPECT_EQ(r.runs[0].rounds, 2000U) << name;
        EXPECT_EQ(r.summary.back().t, 2000U) << name;
    }
}

TEST(Harness, AlternatingLowerBoundSharesLatentDraw) {
    const ExperimentConfig cfg = corral::load_config(std::string(CORRAL_CONFIG_DIR) + "/alternating_lb_tsallis.json");
    corral::Rng l1(corral::derive_seed(cfg.master_seed, 4, corral::kLatentStream));
    corral::Rng l2(corral::derive_seed(cfg.master_seed, 4, corral::kLatentStream));
    const auto a = corral::build_environment(cfg, l1);
    const auto b = corral::build_environment(cfg, l2);
    EXPECT_EQ(*a.lb_alpha, *b.lb_alpha);
    EXPECT_EQ(*a.lb_beta, *b.lb_beta);
    ASSERT_TRUE(a.schedule.has_value());
    const auto learners = corral::build_learners(cfg, a);
    EXPECT_EQ(learners[1]->name(), "scripted");
}

TEST(Harness, FixedAlphaKeepsBetaStream) {
    ExperimentConfig cfg = corral::load_config(std::string(CORRAL_CONFIG_DIR) + "/alternating_lb_tsallis.json");
    corral::Rng l1(77);
    const auto drawn = corral::build_environment(cfg, l1);
    cfg.environment.lb_alpha = 0.25;
    corral::Rng l2(77);
    const auto fixed = corral::build_environment(cfg, l2);
    EXPECT_EQ(*fixed.lb_alpha, 0.25);
    EXPECT_EQ(*fixed.lb_beta, *drawn.lb_beta);
}

// --- output -------------------------------------------------------------------------

TEST(Output, FormatNumberRoundTrips) {
    EXPECT_EQ(corral::format_number(0.1), "0.1");
    EXPECT_EQ(corral::format_number(2.0), "2");
    EXPECT_EQ(corral::format_number(1e-300), "1e-300");
    for (double v : {1.0 / 3.0, 0.19, 123456.789, -2.5e-7}) {
        EXPECT_EQ(std::stod(corral::format_number(v)), v);
    }
}

TEST(Output, CsvHeadersAndRows) {
    ExperimentConfig cfg = corral::parse_config(kGapConfig);
    cfg.runs = 2;
    const auto r = corral::run_experiment(cfg, 1);
    const std::string trace = trace_text(r, 3);
    EXPECT_EQ(trace.substr(0, trace.find('\n')), "run_id,t,chosen,inst_regret,cum_regret,w_1,w_2,w_3");
    const std::string summary = summary_text(r, 3);
    EXPECT_EQ(summary.substr(0, summary.find('\n')),
              "t,mean_regret,std_regret,mean_pulls_1,mean_pulls_2,mean_pulls_3");
    // 20 snapshot rows per run plus the header.
    EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 41);
    EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 21);

    std::ostringstream ref;
    corral::write_reference_csv(ref, corral::reference_lines(cfg, std::vector<std::size_t>{100, 2000}));
    EXPECT_EQ(ref.str().substr(0, ref.str().find('\n')), "t,red,green,red_ucbc");
}

TEST(Output, EmptyGreenWhenUndefined) {
    std::ostringstream s;
    const std::vector<corral::ReferenceRow> rows{{10, 1.5, std::nan(""), 2.5}};
    corral::write_reference_csv(s, rows);
    EXPECT_EQ(s.str(), "t,red,green,red_ucbc\n10,1.5,,2.5\n");
}

TEST(Output, MetaEchoesConfig) {
    ExperimentConfig cfg = corral::parse_config(kGapConfig);
    cfg.runs = 1;
    const auto r = corral::run_experiment(cfg, 1);
    const std::string meta = corral::meta_json(cfg, r);
    for (const char* key : {"\"config\"", "\"derived\"", "\"runs\"", "\"seed\"", "\"reference\"",
                            "\"master_seed\": 5", "\"rho_ladder\""}) {
        EXPECT_NE(meta.find(key), std::string::npos) << key;
    }
}

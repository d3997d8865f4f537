#include "corral/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "corral/boosting.hpp"
#include "json.hpp"

namespace corral {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

template <typename T>
T get_as(const json& obj, const std::string& key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

template <typename T>
void read_opt(const json& obj, const std::string& key, T& out, const std::string& where) {
    if (obj.contains(key)) {
        out = get_as<T>(obj, key, where);
    }
}

std::size_t read_count(const json& obj, const std::string& key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError(where + "." + key + ": expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

LearnerSpec parse_learner(const json& j, std::size_t index) {
    const std::string where = "learners[" + std::to_string(index) + "]";
    check_keys(j, {"type", "arms", "eta", "alpha"}, where);
    LearnerSpec spec;
    if (!j.contains("type")) {
        throw ConfigError(where + ": missing 'type'");
    }
    spec.type = get_as<std::string>(j, "type", where);
    if (j.contains("arms")) {
        spec.arms = read_count(j, "arms", where);
    }
    read_opt(j, "eta", spec.eta, where);
    read_opt(j, "alpha", spec.se_alpha, where);
    return spec;
}

EnvironmentSpec parse_environment(const json& j) {
    const std::string where = "environment";
    if (!j.is_object() || !j.contains("type")) {
        throw ConfigError(where + ": expected an object with a 'type'");
    }
    EnvironmentSpec spec;
    spec.type = get_as<std::string>(j, "type", where);
    if (spec.type == "gap") {
        check_keys(j, {"type", "base_reward", "in_gap", "out_gap", "low_reward"}, where);
        read_opt(j, "base_reward", spec.gap.base_reward, where);
        read_opt(j, "in_gap", spec.gap.in_gap, where);
        read_opt(j, "out_gap", spec.gap.out_gap, where);
        read_opt(j, "low_reward", spec.gap.low_reward, where);
    } else if (spec.type == "single-copy-lb") {
        check_keys(j, {"type", "mu1", "mu2", "mu3"}, where);
        read_opt(j, "mu1", spec.mu1, where);
        read_opt(j, "mu2", spec.mu2, where);
        read_opt(j, "mu3", spec.mu3, where);
    } else if (spec.type == "alternating-lb") {
        check_keys(j, {"type", "mu1", "mu2", "mu3", "formal", "alpha", "beta"}, where);
        spec.mu2 = 1.0;
        read_opt(j, "formal", spec.formal, where);
        read_opt(j, "mu1", spec.mu1, where);
        read_opt(j, "mu2", spec.mu2, where);
        read_opt(j, "mu3", spec.mu3, where);
        if (spec.formal && (j.contains("mu1") || j.contains("mu3"))) {
            throw ConfigError(where + ": mu1/mu3 are derived when formal = true");
        }
        if (j.contains("alpha")) {
            spec.lb_alpha = get_as<double>(j, "alpha", where);
        }
        if (j.contains("beta")) {
            spec.lb_beta = get_as<int>(j, "beta", where);
        }
    } else if (spec.type == "adversarial") {
        check_keys(j, {"type", "losses"}, where);
        if (!j.contains("losses")) {
            throw ConfigError(where + ": adversarial environment needs 'losses'");
        }
        spec.losses = get_as<std::vector<std::vector<Vec>>>(j, "losses", where);
    } else {
        throw ConfigError(where + ": unknown type '" + spec.type + "'");
    }
    return spec;
}

Constants parse_constants(const json& j) {
    const std::string where = "constants";
    check_keys(j, {"alpha", "beta", "eta_init", "copies", "offsets", "restart", "restart_scale",
                   "epoch_start_restart", "lb_eta", "lb_rate_factor", "lb_gamma"},
               where);
    Constants c;
    read_opt(j, "alpha", c.alpha, where);
    if (j.contains("beta") && !j.at("beta").is_null()) {
        c.beta = get_as<double>(j, "beta", where);
    }
    if (j.contains("eta_init")) {
        const json& v = j.at("eta_init");
        if (v.is_string()) {
            if (v.get<std::string>() != "theory") {
                throw ConfigError(where + ".eta_init: expected a number or \"theory\"");
            }
            c.eta_theory = true;
        } else {
            c.eta_init = get_as<double>(j, "eta_init", where);
        }
    }
    if (j.contains("copies") && !j.at("copies").is_null()) {
        c.copies = read_count(j, "copies", where);
    }
    read_opt(j, "offsets", c.offsets, where);
    read_opt(j, "restart", c.restart, where);
    read_opt(j, "restart_scale", c.restart_scale, where);
    read_opt(j, "epoch_start_restart", c.epoch_start_restart, where);
    for (const char* key : {"lb_eta", "lb_rate_factor", "lb_gamma"}) {
        if (j.contains(key) && !j.at(key).is_null()) {
            const double v = get_as<double>(j, key, where);
            if (std::string(key) == "lb_eta") {
                c.lb_eta = v;
            } else if (std::string(key) == "lb_rate_factor") {
                c.lb_rate_factor = v;
            } else {
                c.lb_gamma = v;
            }
        }
    }
    return c;
}

bool valid_learner_type(const std::string& t) {
    return t == "ucb" || t == "ts" || t == "tsallis" || t == "se" || t == "scripted";
}

}  // namespace

std::string to_string(CorrallerKind kind) {
    switch (kind) {
        case CorrallerKind::UcbC: return "ucb-c";
        case CorrallerKind::SingleCopyUcbC: return "single-copy-ucb-c";
        case CorrallerKind::Tsallis: return "tsallis";
        case CorrallerKind::LogBarrier: return "log-barrier";
    }
    throw std::logic_error("unknown corraller kind");
}

CorrallerKind corraller_from_string(const std::string& name) {
    for (CorrallerKind k : {CorrallerKind::UcbC, CorrallerKind::SingleCopyUcbC,
                            CorrallerKind::Tsallis, CorrallerKind::LogBarrier}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw ConfigError("unknown corraller '" + name + "'");
}

std::size_t ExperimentConfig::resolved_snapshot_every() const {
    return snapshot_every > 0 ? snapshot_every : std::max<std::size_t>(1, horizon / 1000);
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    check_keys(j, {"horizon", "runs", "master_seed", "snapshot_every", "corraller", "environment",
                   "learners", "constants"},
               "config");
    for (const char* key : {"horizon", "corraller", "environment", "learners"}) {
        if (!j.contains(key)) {
            throw ConfigError(std::string("config: missing '") + key + "'");
        }
    }
    ExperimentConfig cfg;
    cfg.horizon = read_count(j, "horizon", "config");
    if (j.contains("runs")) {
        cfg.runs = read_count(j, "runs", "config");
    }
    if (j.contains("master_seed")) {
        const json& v = j.at("master_seed");
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
            throw ConfigError("config.master_seed: expected a non-negative integer");
        }
        cfg.master_seed = v.get<std::uint64_t>();
    }
    if (j.contains("snapshot_every")) {
        cfg.snapshot_every = read_count(j, "snapshot_every", "config");
    }
    cfg.corraller = corraller_from_string(get_as<std::string>(j, "corraller", "config"));
    cfg.environment = parse_environment(j.at("environment"));
    const json& learners = j.at("learners");
    if (!learners.is_array()) {
        throw ConfigError("config.learners: expected an array");
    }
    for (std::size_t i = 0; i < learners.size(); ++i) {
        cfg.learners.push_back(parse_learner(learners[i], i));
    }
    if (j.contains("constants")) {
        cfg.constants = parse_constants(j.at("constants"));
    }
    validate_config(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

void validate_config(const ExperimentConfig& cfg) {
    const std::size_t k = cfg.learners.size();
    if (cfg.horizon < 100) {
        throw ConfigError("config.horizon: must be >= 100");
    }
    if (cfg.runs < 1) {
        throw ConfigError("config.runs: must be >= 1");
    }
    if (k == 0) {
        throw ConfigError("config.learners: at least one learner required");
    }
    for (std::size_t i = 0; i < k; ++i) {
        const LearnerSpec& l = cfg.learners[i];
        const std::string where = "learners[" + std::to_string(i) + "]";
        if (!valid_learner_type(l.type)) {
            throw ConfigError(where + ": unknown type '" + l.type + "'");
        }
        if (l.arms == 0) {
            throw ConfigError(where + ": arms must be >= 1");
        }
        if (!(l.eta > 0.0) || !(l.se_alpha > 0.0)) {
            throw ConfigError(where + ": eta and alpha must be positive");
        }
        const bool scripted_slot = cfg.environment.type == "alternating-lb" && i == 1;
        if ((l.type == "scripted") != scripted_slot) {
            throw ConfigError(where + ": scripted learners belong exactly to slot 1 of an "
                                      "alternating-lb environment");
        }
    }

    const EnvironmentSpec& e = cfg.environment;
    try {
        if (e.type == "gap") {
            if (k > 1) {
                for (std::size_t i = 2; i < k; ++i) {
                    if (cfg.learners[i].arms != cfg.learners[1].arms) {
                        throw ConfigError("environment: gap instance needs equal arm counts for learners 2..K");
                    }
                }
            }
            GapInstanceConfig g = e.gap;
            g.learners = k;
            g.arms_best = cfg.learners[0].arms;
            g.arms_other = k > 1 ? cfg.learners[1].arms : 1;
            make_gap_instance(g);
        } else if (e.type == "single-copy-lb") {
            if (k != 2 || cfg.learners[0].arms != 2 || cfg.learners[1].arms != 1) {
                throw ConfigError("environment: single-copy-lb needs learners with 2 and 1 arms");
            }
            make_single_copy_lb_env(e.mu1, e.mu2, e.mu3);
        } else if (e.type == "alternating-lb") {
            if (k != 2 || cfg.learners[0].arms != 1 || cfg.learners[1].arms != 2) {
                throw ConfigError("environment: alternating-lb needs learners with 1 and 2 arms");
            }
            if (e.lb_alpha && !(*e.lb_alpha >= 0.0 && *e.lb_alpha <= 1.0)) {
                throw ConfigError("environment.alpha: must lie in [0, 1]");
            }
            if (e.lb_beta && *e.lb_beta != 0 && *e.lb_beta != 1) {
                throw ConfigError("environment.beta: must be 0 or 1");
            }
            const double a = e.lb_alpha.value_or(0.5);
            const int b = e.lb_beta.value_or(1);
            if (e.formal) {
                make_formal_alternating_lb_env(e.mu2, a, b, cfg.horizon);
            } else {
                make_alternating_lb_env(e.mu1, e.mu2, e.mu3, a, b, cfg.horizon);
            }
        } else if (e.type == "adversarial") {
            auto env = make_adversarial_env(e.losses);
            if (env->learner_count() != k) {
                throw ConfigError("environment: loss table learner count mismatch");
            }
            for (std::size_t i = 0; i < k; ++i) {
                if (env->arm_count(i) != cfg.learners[i].arms) {
                    throw ConfigError("environment: loss table arm count mismatch for learner " +
                                      std::to_string(i));
                }
            }
        } else {
            throw ConfigError("environment: unknown type '" + e.type + "'");
        }
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(std::string("environment: ") + ex.what());
    }

    const Constants& c = cfg.constants;
    if (!(c.alpha > 0.0)) {
        throw ConfigError("constants.alpha: must be positive");
    }
    if (c.beta && !(*c.beta >= 1.0)) {
        throw ConfigError("constants.beta: must be >= 1");
    }
    if (!(c.eta_init > 0.0) || !std::isfinite(c.eta_init)) {
        throw ConfigError("constants.eta_init: must be positive");
    }
    if (c.copies && *c.copies == 0) {
        throw ConfigError("constants.copies: must be >= 1");
    }
    if (!c.offsets.empty()) {
        if (c.offsets.size() != k) {
            throw ConfigError("constants.offsets: need one offset per learner");
        }
        for (double d : c.offsets) {
            if (!(d >= 0.0)) {
                throw ConfigError("constants.offsets: must be non-negative");
            }
        }
    }
    if (c.restart_scale != "2/w" && c.restart_scale != "1/(2w)") {
        throw ConfigError("constants.restart_scale: expected \"2/w\" or \"1/(2w)\"");
    }
    if ((c.lb_eta && !(*c.lb_eta > 0.0)) || (c.lb_rate_factor && !(*c.lb_rate_factor >= 1.0)) ||
        (c.lb_gamma && !(*c.lb_gamma > 0.0 && *c.lb_gamma < 1.0))) {
        throw ConfigError("constants: invalid log-barrier override");
    }

    const double log_T = std::ceil(std::log(static_cast<double>(cfg.horizon)));
    switch (cfg.corraller) {
        case CorrallerKind::Tsallis:
            if (cfg.horizon <= k * (static_cast<std::size_t>(log_T) + 1) + 8) {
                throw ConfigError("config.horizon: too short for the tsallis warm start");
            }
            break;
        case CorrallerKind::UcbC: {
            const std::size_t copies = c.copies.value_or(copies_for_horizon(cfg.horizon));
            if (cfg.horizon < k * copies) {
                throw ConfigError("config.horizon: shorter than the ucb-c initial sweep");
            }
            break;
        }
        case CorrallerKind::SingleCopyUcbC:
        case CorrallerKind::LogBarrier:
            break;
    }
}

std::string config_to_json(const ExperimentConfig& cfg, int indent) {
    json j;
    j["horizon"] = cfg.horizon;
    j["runs"] = cfg.runs;
    j["master_seed"] = cfg.master_seed;
    j["snapshot_every"] = cfg.resolved_snapshot_every();
    j["corraller"] = to_string(cfg.corraller);

    const EnvironmentSpec& e = cfg.environment;
    json env;
    env["type"] = e.type;
    if (e.type == "gap") {
        env["base_reward"] = e.gap.base_reward;
        env["in_gap"] = e.gap.in_gap;
        env["out_gap"] = e.gap.out_gap;
        env["low_reward"] = e.gap.low_reward;
    } else if (e.type == "single-copy-lb") {
        env["mu1"] = e.mu1;
        env["mu2"] = e.mu2;
        env["mu3"] = e.mu3;
    } else if (e.type == "alternating-lb") {
        env["formal"] = e.formal;
        env["mu2"] = e.mu2;
        if (!e.formal) {
            env["mu1"] = e.mu1;
            env["mu3"] = e.mu3;
        }
        if (e.lb_alpha) {
            env["alpha"] = *e.lb_alpha;
        }
        if (e.lb_beta) {
            env["beta"] = *e.lb_beta;
        }
    } else {
        env["losses"] = e.losses;
    }
    j["environment"] = env;

    json learners = json::array();
    for (const LearnerSpec& l : cfg.learners) {
        json lj{{"type", l.type}, {"arms", l.arms}};
        if (l.type == "tsallis") {
            lj["eta"] = l.eta;
        }
        if (l.type == "se") {
            lj["alpha"] = l.se_alpha;
        }
        learners.push_back(lj);
    }
    j["learners"] = learners;

    const Constants& c = cfg.constants;
    json cj;
    cj["alpha"] = c.alpha;
    cj["beta"] = c.beta ? json(*c.beta) : json(nullptr);
    cj["eta_init"] = c.eta_theory ? json("theory") : json(c.eta_init);
    cj["copies"] = c.copies ? json(*c.copies) : json(nullptr);
    cj["offsets"] = c.offsets;
    cj["restart"] = c.restart;
    cj["restart_scale"] = c.restart_scale;
    cj["epoch_start_restart"] = c.epoch_start_restart;
    cj["lb_eta"] = c.lb_eta ? json(*c.lb_eta) : json(nullptr);
    cj["lb_rate_factor"] = c.lb_rate_factor ? json(*c.lb_rate_factor) : json(nullptr);
    cj["lb_gamma"] = c.lb_gamma ? json(*c.lb_gamma) : json(nullptr);
    j["constants"] = cj;
    return j.dump(indent);
}

}  // namespace corral

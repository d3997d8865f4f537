#pragma once

// Experiment configuration. Parsed from JSON with strict key checking; the
// JSON library stays an implementation detail of config.cpp.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corral/core.hpp"
#include "corral/environments.hpp"

namespace corral {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CorrallerKind { UcbC, SingleCopyUcbC, Tsallis, LogBarrier };

std::string to_string(CorrallerKind kind);
CorrallerKind corraller_from_string(const std::string& name);

struct LearnerSpec {
    std::string type;  ///< ucb | ts | tsallis | se | scripted
    std::size_t arms = 1;
    /// Base step size of a Tsallis-INF learner.
    double eta = 2.0;
    /// Confidence constant of a successive-elimination learner.
    double se_alpha = 2.0;
};

struct EnvironmentSpec {
    std::string type = "gap";  ///< gap | single-copy-lb | alternating-lb | adversarial
    GapInstanceConfig gap;
    double mu1 = 0.9;
    double mu2 = 0.2;
    double mu3 = 0.6;
    /// alternating-lb: derive mu1, mu3 from mu2 and the latent alpha.
    bool formal = true;
    /// alternating-lb: fixed latent draw instead of sampling per run.
    std::optional<double> lb_alpha;
    std::optional<int> lb_beta;
    /// adversarial: losses[t][learner][arm].
    std::vector<std::vector<Vec>> losses;
};

struct Constants {
    /// Constant of the default regret bound sqrt(alpha k t ln t).
    double alpha = 1.0;
    /// Tsallis corraller multiplier; nullopt = exp(1 / ceil(ln T)^2).
    std::optional<double> beta;
    /// Tsallis corraller initial step size; ignored when eta_theory.
    double eta_init = 1.0;
    bool eta_theory = false;
    /// UCB-C copies per learner; nullopt = max(3, ceil(2 ln T)).
    std::optional<std::size_t> copies;
    /// Per-round loss offsets added to the corraller's cumulative loss.
    Vec offsets;
    bool restart = true;
    std::string restart_scale = "2/w";  ///< 2/w | 1/(2w)
    bool epoch_start_restart = false;
    /// Log-barrier baseline overrides; nullopt = defaults.
    std::optional<double> lb_eta;
    std::optional<double> lb_rate_factor;
    std::optional<double> lb_gamma;
};

struct ExperimentConfig {
    std::size_t horizon = 1000;
    std::size_t runs = 1;
    std::uint64_t master_seed = 0;
    /// 0 = max(1, T / 1000).
    std::size_t snapshot_every = 0;
    CorrallerKind corraller = CorrallerKind::Tsallis;
    EnvironmentSpec environment;
    std::vector<LearnerSpec> learners;
    Constants constants;

    std::size_t resolved_snapshot_every() const;
};

/// Parses JSON text; throws ConfigError on syntax errors, unknown keys,
/// wrong types or failed validation.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Throws ConfigError if the configuration is inconsistent.
void validate_config(const ExperimentConfig& cfg);

/// JSON of the configuration with every default filled in.
std::string config_to_json(const ExperimentConfig& cfg, int indent = 2);

}  // namespace corral

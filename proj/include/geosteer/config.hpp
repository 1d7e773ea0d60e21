#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geosteer/dqn_agent.hpp"
#include "geosteer/environment.hpp"
#include "geosteer/particle_filter.hpp"
#include "geosteer/policies.hpp"

namespace geosteer {

// Everything an experiment needs, with paper defaults. Resolution order:
// preset -> config file -> command-line flags.
struct HarnessConfig {
    EnvConfig env;
    AgentConfig agent;
    TransitionModel pf_model;
    double pf_sigma = 0.2;
    int pf_n_par = 128;
    double pf_prior_lo = 180.0; // prior support = bit TVD + [lo, hi]
    double pf_prior_hi = 270.0;
    RuleBasedConfig rule;
    std::string rule_landing_checkpoint; // empty = rl_est_1 checkpoint of seeds[0]

    std::string method = "rl_est_1";
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    int eval_realizations = 1000;
    std::uint64_t eval_seed = 424242; // shared across methods: paired comparisons
    std::uint64_t log_seed = 1;       // the one offset log used everywhere
    std::string out_dir = "out";
    int threads = 0;    // 0 = leave the OpenMP default alone
    bool timing = false; // real wall_ms in curve CSVs (off keeps them deterministic)
    int checkpoint_every = 1000;
    std::string preset = "full";
};

HarnessConfig preset_config(const std::string& name); // "desk" or "full"

// Flat key=value file, '#' comments, unknown keys rejected.
void apply_config_file(HarnessConfig& cfg, const std::string& path);

// One "key = value" assignment (also used for config-file lines).
void apply_config_entry(HarnessConfig& cfg, const std::string& key, const std::string& value);

} // namespace geosteer

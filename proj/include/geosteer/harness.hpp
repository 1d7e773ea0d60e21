#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geosteer/config.hpp"

namespace geosteer {

enum class Method {
    rule_based_1,
    rule_based_5,
    rl_log,
    rl_est_1,
    rl_est_5,
    oracle_true,
    oracle_lookahead
};

Method parse_method(const std::string& name);
const char* method_name(Method m);
bool method_is_rl(Method m);
EncoderId method_encoder(Method m); // RL methods only

struct EvalEpisode {
    std::string method;
    std::uint64_t seed;
    int realization;
    int reward;
    double contact; // fraction, == (max_penalty + reward) / max_penalty
    int faults;
    double boundary_mae; // NaN when the method has no estimation input
    double gamma_mae;
};

struct EvalReport {
    std::string method;
    std::vector<std::pair<std::uint64_t, double>> per_seed_mean_reward;
    double median_reward = 0.0;     // median over per-seed means
    double contact_pct = 0.0;       // derived from median_reward
    double contact_pct_ge1 = 0.0;   // strata: episodes with >= 1 / >= 2 faults
    double contact_pct_ge2 = 0.0;
    double boundary_mae_mean = 0.0; // NaN when n/a
    double gamma_mae_mean = 0.0;
    std::vector<EvalEpisode> episodes;
    std::uint64_t eval_set_hash = 0;
    double wall_seconds = 0.0;
};

// CLI entry points. Each throws config_error/validation_error (exit 2) or
// io_error (exit 3); main translates.
void cmd_generate(const HarnessConfig& cfg);
void cmd_train(const HarnessConfig& cfg);
EvalReport cmd_evaluate(const HarnessConfig& cfg);
void cmd_pf_sweep(const HarnessConfig& cfg);
void cmd_benchmark(const HarnessConfig& cfg);
void cmd_report(const HarnessConfig& cfg);

// Shared helpers (also used by tests).
double median(std::vector<double> values);
std::vector<Realization> make_eval_set(const HarnessConfig& cfg, int count, const char* tag);
std::uint64_t realization_set_hash(const std::vector<Realization>& reals);
std::string checkpoint_path(const HarnessConfig& cfg, Method m, std::uint64_t seed);

} // namespace geosteer

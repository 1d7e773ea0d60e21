#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geosteer/dqn_agent.hpp"
#include "geosteer/environment.hpp"
#include "geosteer/particle_filter.hpp"

namespace geosteer {

enum class EncoderId { rl_log, rl_est_1, rl_est_5, oracle_true, oracle_lookahead };

int encoder_dim(EncoderId id);                    // 34 / 5 / 17 / 4 / 12
const char* encoder_name(EncoderId id);
EncoderId parse_encoder(const std::string& name); // throws config_error

// Hidden widths scale with the input size n: (2n,4n,2n), except RL-Log which
// uses (4n,8n,4n). The output is always the 11 Q-values.
LayerSpec layer_spec_for(EncoderId id);

// [32 gammas of the last interval] ++ [(incl-90)/20] ++ [station/320].
// Before the first decision the window is padded with the station-0 reading.
std::vector<double> encode_rl_log(const EnvState& env);

// Per estimate [d_top/100, d_bottom/100, weight], then incl/station features.
std::vector<double> encode_rl_est(const EnvState& env,
                                  const std::vector<BoundaryEstimate>& estimates);

// True distances; with lookahead, appends (top-bit)/100,(bottom-bit)/100 at
// stations k+8, k+16, k+24, k+32 (clamped to the last station).
std::vector<double> encode_oracle(const EnvState& env, bool lookahead);

// Bundles an EncoderId into the run_episode encoder callback.
Encoder make_encoder(EncoderId id);

// --- rule-based greedy baseline ----------------------------------------------

struct RuleBasedConfig {
    int x_best = 1;  // particles fed to the decision (1 or 5)
    int m_draws = 1; // look-ahead draws averaged per (action, particle)
};

// Parabolic station reward: 1 when centered (d_min = h/2), 0 at a boundary,
// negative outside.
inline double rule_reward(double d_min, double h) {
    const double u = d_min / h - 0.5;
    return -4.0 * u * u + 1.0;
}

// R = sum_i w_i sum_j r_ij over the particles' station rewards.
double expected_reward(const std::vector<double>& weights,
                       const std::vector<std::vector<double>>& station_rewards);

// Greedy action for a post-landing decision: scores all 11 actions against
// stochastic look-ahead boundary paths drawn per (action, particle); ties
// break toward smaller |delta|, then the negative one. Takes the X best
// particles with their subset-normalized weights (pf_best_particles).
// When input_mae_out is given, it receives the weighted mean
// |path top - true top| of the chosen action's paths (the look-ahead input MAE).
int rule_based_decide(const std::vector<std::pair<Particle, double>>& best,
                      const WellState& well, Phase phase, const SteeringConstraints& steer,
                      const TransitionModel& model, double thickness,
                      const RuleBasedConfig& cfg, std::uint64_t seed,
                      const std::vector<double>* true_top = nullptr,
                      double* input_mae_out = nullptr);

// Same scoring with externally supplied boundary paths (one per particle,
// reused for every action) — the zero-noise truth-path benchmark.
int rule_based_decide_with_paths(
    const std::vector<double>& weights,
    const std::vector<std::vector<std::pair<double, double>>>& paths, const WellState& well,
    Phase phase, const SteeringConstraints& steer, double thickness);

} // namespace geosteer

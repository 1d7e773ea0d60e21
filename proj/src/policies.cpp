#include "geosteer/policies.hpp"

#include <algorithm>
#include <cmath>

#include "geosteer/errors.hpp"
#include "geosteer/rng.hpp"

namespace geosteer {

int encoder_dim(EncoderId id) {
    switch (id) {
        case EncoderId::rl_log: return 34;
        case EncoderId::rl_est_1: return 5;
        case EncoderId::rl_est_5: return 17;
        case EncoderId::oracle_true: return 4;
        case EncoderId::oracle_lookahead: return 12;
    }
    throw usage_error("unknown encoder id");
}

const char* encoder_name(EncoderId id) {
    switch (id) {
        case EncoderId::rl_log: return "rl_log";
        case EncoderId::rl_est_1: return "rl_est_1";
        case EncoderId::rl_est_5: return "rl_est_5";
        case EncoderId::oracle_true: return "oracle_true";
        case EncoderId::oracle_lookahead: return "oracle_lookahead";
    }
    throw usage_error("unknown encoder id");
}

EncoderId parse_encoder(const std::string& name) {
    for (EncoderId id : {EncoderId::rl_log, EncoderId::rl_est_1, EncoderId::rl_est_5,
                         EncoderId::oracle_true, EncoderId::oracle_lookahead})
        if (name == encoder_name(id)) return id;
    throw config_error("unknown encoder: " + name);
}

LayerSpec layer_spec_for(EncoderId id) {
    const int n = encoder_dim(id);
    const int scale = id == EncoderId::rl_log ? 4 : 2;
    return LayerSpec{{n, scale * n, 2 * scale * n, scale * n, kNumActions}};
}

static double incl_feature(const EnvState& env) {
    return (env.well.inclination - 90.0) / 20.0;
}

static double station_feature(const EnvState& env) {
    return static_cast<double>(env.well.station) / env.config.total_stations();
}

std::vector<double> encode_rl_log(const EnvState& env) {
    const int window = env.config.stations_per_decision();
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(window) + 2);
    const auto& hist = env.gamma_history;
    for (int i = 0; i < window; ++i) {
        const long idx = static_cast<long>(hist.size()) - window + i;
        v.push_back(idx >= 0 ? hist[static_cast<std::size_t>(idx)] : hist.front());
    }
    v.push_back(incl_feature(env));
    v.push_back(station_feature(env));
    return v;
}

std::vector<double> encode_rl_est(const EnvState& env,
                                  const std::vector<BoundaryEstimate>& estimates) {
    if (estimates.size() != 1 && estimates.size() != 5)
        throw usage_error("encode_rl_est expects 1 or 5 estimates");
    std::vector<double> v;
    v.reserve(estimates.size() * 3 + 2);
    for (const BoundaryEstimate& e : estimates) {
        v.push_back((env.well.tvd - e.top_depth) / 100.0);
        v.push_back((e.bottom_depth - env.well.tvd) / 100.0);
        v.push_back(e.normalized_weight);
    }
    v.push_back(incl_feature(env));
    v.push_back(station_feature(env));
    return v;
}

std::vector<double> encode_oracle(const EnvState& env, bool lookahead) {
    const int k = env.well.station;
    const Distances d =
        distances(env.well.tvd, env.realization.top(k), env.realization.bottom(k));
    std::vector<double> v{d.d_top / 100.0, d.d_bottom / 100.0, incl_feature(env),
                          station_feature(env)};
    if (lookahead) {
        const int last = env.config.total_stations();
        for (int off : {8, 16, 24, 32}) {
            const int kk = std::min(k + off, last);
            v.push_back((env.realization.top(kk) - env.well.tvd) / 100.0);
            v.push_back((env.realization.bottom(kk) - env.well.tvd) / 100.0);
        }
    }
    return v;
}

Encoder make_encoder(EncoderId id) {
    switch (id) {
        case EncoderId::rl_log:
            return [](const EpisodeContext& ctx) { return encode_rl_log(*ctx.env); };
        case EncoderId::rl_est_1:
        case EncoderId::rl_est_5: {
            const int x = id == EncoderId::rl_est_1 ? 1 : 5;
            return [x](const EpisodeContext& ctx) {
                if (!ctx.filter) throw usage_error("rl_est encoder needs the particle filter");
                return encode_rl_est(*ctx.env,
                                     pf_best(*ctx.filter, x, ctx.env->config.strat.thickness_h));
            };
        }
        case EncoderId::oracle_true:
            return [](const EpisodeContext& ctx) { return encode_oracle(*ctx.env, false); };
        case EncoderId::oracle_lookahead:
            return [](const EpisodeContext& ctx) { return encode_oracle(*ctx.env, true); };
    }
    throw usage_error("unknown encoder id");
}

double expected_reward(const std::vector<double>& weights,
                       const std::vector<std::vector<double>>& station_rewards) {
    if (weights.size() != station_rewards.size())
        throw usage_error("expected_reward: weight/row count mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        double row = 0.0;
        for (double r : station_rewards[i]) row += r;
        total += weights[i] * row;
    }
    return total;
}

// Sum of station rewards for one projected trajectory against one boundary path.
static double path_score(const std::vector<TrajectoryPoint>& pts,
                         const std::vector<std::pair<double, double>>& path, double thickness) {
    double acc = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        const double d = distances(pts[j].tvd, path[j].first, path[j].second).d_min;
        acc += rule_reward(d, thickness);
    }
    return acc;
}

// Tie rule: higher score, then smaller |delta|, then the negative delta.
static bool beats(double score, int action, double best_score, int best_action) {
    if (score != best_score) return score > best_score;
    const double d = action_delta(action), bd = action_delta(best_action);
    if (std::abs(d) != std::abs(bd)) return std::abs(d) < std::abs(bd);
    return d < bd;
}

int rule_based_decide(const std::vector<std::pair<Particle, double>>& best,
                      const WellState& well, Phase phase, const SteeringConstraints& steer,
                      const TransitionModel& model, double thickness,
                      const RuleBasedConfig& cfg, std::uint64_t seed,
                      const std::vector<double>* true_top, double* input_mae_out) {
    if (best.empty()) throw usage_error("rule_based_decide: no particles");
    const int n = steer.interval_stations;

    int best_action = -1;
    double best_score = 0.0;
    double best_mae = 0.0;
    for (int a = 0; a < kNumActions; ++a) {
        const double applied = clamp_action(well, action_delta(a), steer, phase);
        const std::vector<TrajectoryPoint> pts = step_interval(well, applied, steer);

        double score = 0.0;
        double mae = 0.0;
        for (std::size_t i = 0; i < best.size(); ++i) {
            double particle_score = 0.0;
            double particle_err = 0.0;
            for (int m = 0; m < cfg.m_draws; ++m) {
                const auto path = pf_lookahead(best[i].first, model, n, thickness,
                                               derive_seed(seed, "rb", a, i, m));
                particle_score += path_score(pts, path, thickness);
                if (true_top)
                    for (int j = 0; j < n; ++j)
                        particle_err +=
                            std::abs(path[static_cast<std::size_t>(j)].first -
                                     (*true_top)[static_cast<std::size_t>(j)]) / n;
            }
            score += best[i].second * particle_score / cfg.m_draws;
            mae += best[i].second * particle_err / cfg.m_draws;
        }
        if (best_action < 0 || beats(score, a, best_score, best_action)) {
            best_action = a;
            best_score = score;
            best_mae = mae;
        }
    }
    if (input_mae_out) *input_mae_out = best_mae;
    return best_action;
}

int rule_based_decide_with_paths(
    const std::vector<double>& weights,
    const std::vector<std::vector<std::pair<double, double>>>& paths, const WellState& well,
    Phase phase, const SteeringConstraints& steer, double thickness) {
    if (weights.size() != paths.size())
        throw usage_error("rule_based_decide_with_paths: weight/path count mismatch");

    int best_action = -1;
    double best_score = 0.0;
    for (int a = 0; a < kNumActions; ++a) {
        const double applied = clamp_action(well, action_delta(a), steer, phase);
        const std::vector<TrajectoryPoint> pts = step_interval(well, applied, steer);
        double score = 0.0;
        for (std::size_t i = 0; i < paths.size(); ++i)
            score += weights[i] * path_score(pts, paths[i], thickness);
        if (best_action < 0 || beats(score, a, best_score, best_action)) {
            best_action = a;
            best_score = score;
        }
    }
    return best_action;
}

} // namespace geosteer

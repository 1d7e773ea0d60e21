#include "geosteer/environment.hpp"

#include <algorithm>

#include "geosteer/csv.hpp"
#include "geosteer/errors.hpp"

namespace geosteer {

int reward_point(double bit_tvd, double top, double bottom) {
    return (bit_tvd >= top && bit_tvd <= bottom) ? 0 : -1;
}

Distances distances(double bit_tvd, double top, double bottom) {
    const double d_top = bit_tvd - top;
    const double d_bottom = bottom - bit_tvd;
    return {d_top, d_bottom, std::min(d_top, d_bottom)};
}

static double observe(const EnvState& env, int station, double tvd) {
    return gamma_at(*env.offset_log, tvd - env.realization.top(station));
}

EnvState reset(Realization realization, const OffsetLog& offset_log,
               const EnvConfig& config, std::uint64_t seed) {
    if (realization.n_stations() != config.total_stations())
        throw validation_error("realization station count does not match episode length");

    EnvState env;
    env.realization = std::move(realization);
    env.offset_log = &offset_log;
    env.config = config;
    env.rng_seed = seed;
    env.well.station = 0;
    env.well.tvd = env.realization.top(0) - env.realization.start_offset;
    env.well.inclination = 110.0;
    env.phase = Phase::landing;

    const double rel0 = env.well.tvd - env.realization.top(0);
    if (rel0 < offset_log.rel_depth.front() || rel0 > offset_log.rel_depth.back())
        throw config_error("offset log grid does not cover the initial relative depth");

    env.trajectory.push_back({0, env.well.tvd, env.well.inclination});
    env.gamma_history.push_back(observe(env, 0, env.well.tvd));
    env.reward_history.push_back(0);
    return env;
}

StepOutcome step(EnvState& env, int action_index) {
    if (env.done()) throw usage_error("step() on a finished episode");
    if (action_index < 0 || action_index >= kNumActions)
        throw usage_error("action index out of range");

    const double delta = action_delta(action_index);
    const double applied = clamp_action(env.well, delta, env.config.steer, env.phase);

    StepOutcome out;
    out.stations = step_interval(env.well, applied, env.config.steer);
    for (const TrajectoryPoint& p : out.stations) {
        const double g = observe(env, p.station, p.tvd);
        out.gammas.push_back(g);
        int r = reward_point(p.tvd, env.realization.top(p.station),
                             env.realization.bottom(p.station));
        if (!env.config.landing_penalty && p.station <= env.config.landing_stations()) {
            out.landing_misses -= r;
            r = 0;
        }
        out.reward += r;
        env.trajectory.push_back(p);
        env.gamma_history.push_back(g);
        env.reward_history.push_back(r);
    }

    env.well = {out.stations.back().station, out.stations.back().tvd,
                env.well.inclination + applied};
    env.reward_total += out.reward;
    env.decision_index += 1;
    env.phase = env.decision_index < env.config.landing_decisions ? Phase::landing
                                                                  : Phase::drilling;
    out.done = env.done();
    return out;
}

void save_trace_csv(const EnvState& env, const std::string& path) {
    CsvWriter csv(path, {"station", "tvd_ft", "inclination_deg", "top_ft", "bottom_ft",
                         "gamma", "reward"});
    for (std::size_t i = 0; i < env.trajectory.size(); ++i) {
        const TrajectoryPoint& p = env.trajectory[i];
        csv.write_row({std::to_string(p.station), format_double(p.tvd, 4),
                       format_double(p.inclination, 4),
                       format_double(env.realization.top(p.station), 4),
                       format_double(env.realization.bottom(p.station), 4),
                       format_double(env.gamma_history[i], 6),
                       std::to_string(env.reward_history[i])});
    }
    csv.close();
}

} // namespace geosteer

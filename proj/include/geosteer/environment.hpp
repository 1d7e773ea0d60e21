#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geosteer/stratigraphy.hpp"
#include "geosteer/trajectory.hpp"

namespace geosteer {

struct EnvConfig {
    StratigraphyConfig strat;
    SteeringConstraints steer;
    int landing_decisions = 3; // first decisions with relaxed bounds and no penalty
    int total_decisions = 10;
    bool landing_penalty = false; // sensitivity switch: charge -1s during landing too

    int stations_per_decision() const { return steer.interval_stations; }
    int landing_stations() const { return landing_decisions * steer.interval_stations; }
    int total_stations() const { return total_decisions * steer.interval_stations; }
    // Worst case: -1 at every post-landing station (224 in the default setup).
    int max_penalty() const { return total_stations() - landing_stations(); }
};

struct StepOutcome {
    std::vector<TrajectoryPoint> stations; // the 32 new points
    std::vector<double> gammas;            // observed at those points
    int reward = 0;                        // sum over the interval, in [-32, 0]
    // Landing-phase stations outside the reservoir. Exempt from the reward
    // metric, but the unavoidable -1s still exist physically; training can
    // charge them to densify the early learning signal.
    int landing_misses = 0;
    bool done = false;
};

// One episode, mutated in place by step(). The offset log is shared read-only.
struct EnvState {
    Realization realization;
    const OffsetLog* offset_log = nullptr;
    EnvConfig config;
    WellState well;
    int decision_index = 0;
    Phase phase = Phase::landing;
    std::vector<TrajectoryPoint> trajectory;  // station 0..current
    std::vector<double> gamma_history;        // aligned with trajectory
    std::vector<int> reward_history;          // aligned; station 0 entry is 0
    int reward_total = 0;
    std::uint64_t rng_seed = 0;

    bool done() const { return decision_index >= config.total_decisions; }
};

EnvState reset(Realization realization, const OffsetLog& offset_log,
               const EnvConfig& config, std::uint64_t seed);

StepOutcome step(EnvState& env, int action_index);

// 0 iff top <= bit_tvd <= bottom (inclusive on both boundaries), else -1.
int reward_point(double bit_tvd, double top, double bottom);

struct Distances {
    double d_top;    // bit minus top; negative above the reservoir
    double d_bottom; // bottom minus bit; negative below
    double d_min;    // min of the two; negative means outside
};
Distances distances(double bit_tvd, double top, double bottom);

inline double contact_fraction(int reward_total, const EnvConfig& config) {
    const double m = config.max_penalty();
    return (m + reward_total) / m;
}

// Same mapping applied to an averaged reward.
inline double contact_fraction(double mean_reward, const EnvConfig& config) {
    const double m = config.max_penalty();
    return (m + mean_reward) / m;
}

void save_trace_csv(const EnvState& env, const std::string& path);

} // namespace geosteer

#pragma once

#include <vector>

namespace geosteer {

enum class Phase { landing, drilling };

// 90 deg = horizontal; >90 deepens the well. Station index counts 10-ft
// horizontal steps, matching the boundary discretization.
struct WellState {
    int station = 0;
    double tvd = 0.0;
    double inclination = 90.0;
};

struct TrajectoryPoint {
    int station;
    double tvd;
    double inclination;
};

struct SteeringConstraints {
    double landing_lo = 70.0, landing_hi = 110.0; // deg
    double drilling_lo = 86.0, drilling_hi = 94.0;
    double dls_limit = 3.0;      // deg per 100 ft
    int interval_stations = 32;  // stations per decision
    double station_spacing = 10.0;

    double interval_length() const { return interval_stations * station_spacing; }
    double phase_lo(Phase p) const { return p == Phase::landing ? landing_lo : drilling_lo; }
    double phase_hi(Phase p) const { return p == Phase::landing ? landing_hi : drilling_hi; }
};

// Actions 0..10 map to inclination changes of -5..+5 degrees.
inline constexpr int kNumActions = 11;
inline double action_delta(int action_index) { return static_cast<double>(action_index - 5); }

// Largest same-sign delta with |applied| <= |delta| that respects the phase
// inclination bounds and the DLS limit; moves toward the bounds if the current
// inclination is outside them (possible right after the landing->drilling flip).
double clamp_action(const WellState& state, double delta,
                    const SteeringConstraints& constraints, Phase phase);

// Constant-curvature arc: inclination linear in horizontal distance across the
// interval; per-station TVD from the closed-form log-cosine integral.
std::vector<TrajectoryPoint> step_interval(const WellState& state, double applied_delta,
                                           const SteeringConstraints& constraints);

double dls_of(double delta, double horizontal_length);

} // namespace geosteer

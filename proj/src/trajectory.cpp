#include "geosteer/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "geosteer/errors.hpp"

namespace geosteer {

static double deg2rad(double d) { return d * M_PI / 180.0; }

double dls_of(double delta, double horizontal_length) {
    if (horizontal_length <= 0.0) throw usage_error("dls_of needs positive length");
    return std::abs(delta) * 100.0 / horizontal_length;
}

double clamp_action(const WellState& state, double delta,
                    const SteeringConstraints& constraints, Phase phase) {
    if (delta == 0.0) return 0.0;
    const double lo = constraints.phase_lo(phase);
    const double hi = constraints.phase_hi(phase);
    // Feasible move toward/within the bounds. If even the sign is wrong
    // (already at or beyond the bound on that side), the action degrades to 0.
    const double raw = std::clamp(delta, lo - state.inclination, hi - state.inclination);
    if (raw == 0.0 || std::signbit(raw) != std::signbit(delta)) return 0.0;
    const double dls_cap =
        constraints.dls_limit * constraints.interval_length() / 100.0;
    const double mag = std::min({std::abs(raw), std::abs(delta), dls_cap});
    return std::copysign(mag, delta);
}

// TVD gained between horizontal positions x1 and x2 when inclination sweeps
// linearly from theta0 to theta0+delta over [0, L]. With alpha = theta - 90
// in radians, integral of tan(alpha) dx = (L/delta_rad)(ln cos a1 - ln cos a2).
static double arc_tvd(double theta0, double delta, double length, double x1, double x2) {
    const double a1 = deg2rad(theta0 + delta * x1 / length - 90.0);
    const double a2 = deg2rad(theta0 + delta * x2 / length - 90.0);
    if (delta == 0.0) return std::tan(a1) * (x2 - x1);
    const double delta_rad = deg2rad(delta);
    return (length / delta_rad) * (std::log(std::cos(a1)) - std::log(std::cos(a2)));
}

std::vector<TrajectoryPoint> step_interval(const WellState& state, double applied_delta,
                                           const SteeringConstraints& constraints) {
    const double length = constraints.interval_length();
    const double theta0 = state.inclination;
    if (theta0 <= 0.0 || theta0 >= 180.0 || theta0 + applied_delta <= 0.0 ||
        theta0 + applied_delta >= 180.0)
        throw usage_error("inclination out of (0,180): geometry invariant violated");

    std::vector<TrajectoryPoint> out;
    out.reserve(static_cast<std::size_t>(constraints.interval_stations));
    double tvd = state.tvd;
    for (int i = 1; i <= constraints.interval_stations; ++i) {
        const double x1 = (i - 1) * constraints.station_spacing;
        const double x2 = i * constraints.station_spacing;
        tvd += arc_tvd(theta0, applied_delta, length, x1, x2);
        const double incl =
            theta0 + applied_delta * (static_cast<double>(i) / constraints.interval_stations);
        out.push_back({state.station + i, tvd, incl});
    }
    return out;
}

} // namespace geosteer

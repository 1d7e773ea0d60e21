#include "geosteer/stratigraphy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "geosteer/csv.hpp"
#include "geosteer/errors.hpp"
#include "geosteer/rng.hpp"

namespace geosteer {

void StratigraphyConfig::validate() const {
    if (n_stations <= 0) throw config_error("n_stations must be positive");
    if (thickness_h <= 0) throw config_error("thickness_h must be positive");
    if (slope_clamp <= 0) throw config_error("slope_clamp must be positive");
    if (slope_ar1_rho <= 0 || slope_ar1_rho >= 1)
        throw config_error("slope_ar1_rho must be in (0,1)");
    if (max_faults < 0) throw config_error("max_faults must be >= 0");
    if (max_faults > 1 &&
        static_cast<long>(min_fault_separation) * (max_faults - 1) >= n_stations)
        throw config_error("min_fault_separation too large for station count");
    if (fault_throw_min > fault_throw_max)
        throw config_error("fault throw range inverted");
    if (start_offset_min > start_offset_max)
        throw config_error("start offset range inverted");
}

double Realization::bottom(int k) const { return top(k) + thickness; }

// Reference TVD for the first station's top boundary. Arbitrary anchor; all
// physics depends only on bit-minus-boundary differences.
static constexpr double kAnchorTvd = 10000.0;

Realization generate_realization(const StratigraphyConfig& config, std::uint64_t seed) {
    config.validate();
    SplitMix64 rng(derive_seed(seed, "realization"));

    Realization real;
    real.seed = seed;
    real.thickness = config.thickness_h;
    real.start_offset = rng.uniform(config.start_offset_min, config.start_offset_max);

    const int n_faults = static_cast<int>(rng.uniform_int(
        static_cast<std::uint64_t>(config.max_faults) + 1));

    // Fault stations label the increment they land on, so valid positions are
    // 1..n_stations-1. Rejection-sample the whole set per attempt (placing
    // one at a time can wedge: two faults can exclude every remaining slot).
    const int max_retries = 10000;
    for (int tries = 0; static_cast<int>(real.fault_stations.size()) < n_faults; ++tries) {
        if (tries >= max_retries)
            throw config_error("could not place faults with requested separation");
        std::vector<int> candidate;
        for (int f = 0; f < n_faults; ++f)
            candidate.push_back(1 + static_cast<int>(rng.uniform_int(
                                        static_cast<std::uint64_t>(config.n_stations - 1))));
        std::sort(candidate.begin(), candidate.end());
        bool ok = true;
        for (int f = 1; f < n_faults; ++f)
            if (candidate[static_cast<std::size_t>(f)] -
                    candidate[static_cast<std::size_t>(f) - 1] <
                config.min_fault_separation)
                ok = false;
        if (ok) real.fault_stations = std::move(candidate);
    }
    for (std::size_t i = 0; i < real.fault_stations.size(); ++i) {
        const double mag = rng.uniform(config.fault_throw_min, config.fault_throw_max);
        const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
        real.fault_throws.push_back(sign * mag);
    }

    // AR(1) slope walk; depth advances by the current slope, then the slope
    // itself evolves and is clamped.
    double slope = rng.uniform(-config.slope_clamp, config.slope_clamp);
    real.top_depth.resize(static_cast<std::size_t>(config.n_stations) + 1);
    real.top_depth[0] = kAnchorTvd;
    for (int k = 0; k < config.n_stations; ++k) {
        double increment = slope;
        for (std::size_t f = 0; f < real.fault_stations.size(); ++f)
            if (real.fault_stations[f] == k + 1) increment += real.fault_throws[f];
        real.top_depth[static_cast<std::size_t>(k) + 1] =
            real.top_depth[static_cast<std::size_t>(k)] + increment;
        slope = config.slope_ar1_rho * slope + rng.gauss(0.0, config.slope_noise_sigma);
        slope = std::clamp(slope, -config.slope_clamp, config.slope_clamp);
    }
    return real;
}

// Synthetic stand-in for an offset-well gamma log: layer baselines with a
// smooth seeded fluctuation, sampled every foot of relative depth.
static constexpr double kLogGridMin = -300.0;
static constexpr double kLogGridMax = 280.0;
static constexpr double kReservoirThickness = 20.0;
static constexpr int kNumSinusoids = 8;
static constexpr double kTotalFluctuation = 0.15;

OffsetLog synth_offset_log(std::uint64_t seed) {
    SplitMix64 rng(derive_seed(seed, "synthlog"));

    double wavelengths[kNumSinusoids];
    double phases[kNumSinusoids];
    double amps[kNumSinusoids];
    double amp_sum = 0.0;
    for (int i = 0; i < kNumSinusoids; ++i) {
        wavelengths[i] = rng.uniform(5.0, 80.0);
        phases[i] = rng.uniform(0.0, 2.0 * M_PI);
        amps[i] = rng.uniform(0.5, 1.0);
        amp_sum += amps[i];
    }
    for (double& a : amps) a *= kTotalFluctuation / amp_sum;

    OffsetLog log;
    log.source = OffsetLog::Source::synthetic;
    log.seed = seed;
    const int n = static_cast<int>(kLogGridMax - kLogGridMin) + 1;
    log.rel_depth.reserve(static_cast<std::size_t>(n));
    log.gamma.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double rel = kLogGridMin + i;
        double base = 0.8; // shale above
        if (rel >= 0.0 && rel <= kReservoirThickness) base = 0.2; // reservoir
        else if (rel > kReservoirThickness) base = 0.75;          // shale below
        double g = base;
        for (int s = 0; s < kNumSinusoids; ++s)
            g += amps[s] * std::sin(2.0 * M_PI * rel / wavelengths[s] + phases[s]);
        log.rel_depth.push_back(rel);
        log.gamma.push_back(std::clamp(g, 0.0, 1.0));
    }
    return log;
}

OffsetLog load_offset_log(const std::string& path, bool rescale) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open offset log: " + path);

    OffsetLog log;
    log.source = OffsetLog::Source::file;
    log.path = path;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
            if (lineno == 1) continue; // tolerate a header row
            throw validation_error(path + ":" + std::to_string(lineno) + ": expected two columns");
        }
        double depth, g;
        try {
            std::size_t pa = 0, pb = 0;
            depth = std::stod(a, &pa);
            g = std::stod(b, &pb);
        } catch (const std::exception&) {
            if (lineno == 1) continue; // header
            throw validation_error(path + ":" + std::to_string(lineno) + ": non-numeric row");
        }
        log.rel_depth.push_back(depth);
        log.gamma.push_back(g);
    }
    if (log.rel_depth.empty()) throw validation_error(path + ": empty offset log");

    for (std::size_t i = 1; i < log.rel_depth.size(); ++i)
        if (log.rel_depth[i] <= log.rel_depth[i - 1])
            throw validation_error(path + ": rel_depth not strictly increasing at row " +
                                   std::to_string(i + 1));

    if (rescale) {
        const auto [lo_it, hi_it] = std::minmax_element(log.gamma.begin(), log.gamma.end());
        const double lo = *lo_it, hi = *hi_it; // copy before the loop rewrites them
        if (hi == lo) throw validation_error(path + ": constant gamma, cannot rescale");
        for (double& g : log.gamma) g = (g - lo) / (hi - lo);
    } else {
        for (double g : log.gamma)
            if (g < 0.0 || g > 1.0)
                throw validation_error(path + ": gamma outside [0,1]; pass rescale to normalize");
    }
    return log;
}

double gamma_at(const OffsetLog& log, double rel_depth) {
    const auto& xs = log.rel_depth;
    if (rel_depth <= xs.front()) return log.gamma.front();
    if (rel_depth >= xs.back()) return log.gamma.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), rel_depth);
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double t = (rel_depth - xs[lo]) / (xs[hi] - xs[lo]);
    return log.gamma[lo] + t * (log.gamma[hi] - log.gamma[lo]);
}

void save_realization_csv(const Realization& real, const std::string& path) {
    CsvWriter csv(path, {"station", "top_tvd_ft", "bottom_tvd_ft", "is_fault"});
    for (int k = 0; k <= real.n_stations(); ++k) {
        const bool is_fault = std::find(real.fault_stations.begin(), real.fault_stations.end(), k) !=
                              real.fault_stations.end();
        csv.write_row({std::to_string(k), format_double(real.top(k), 4),
                       format_double(real.bottom(k), 4), is_fault ? "1" : "0"});
    }
    csv.close();
}

} // namespace geosteer

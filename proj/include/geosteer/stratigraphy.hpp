#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace geosteer {

struct StratigraphyConfig {
    int n_stations = 320;
    double station_spacing = 10.0; // ft of horizontal distance per station
    double thickness_h = 20.0;     // constant reservoir thickness, ft
    int max_faults = 3;
    int min_fault_separation = 100; // stations
    double slope_ar1_rho = 0.97;
    double slope_noise_sigma = 0.1; // ft/station
    double slope_clamp = 0.6;       // ft/station
    double fault_throw_min = 10.0; // ft
    double fault_throw_max = 30.0;
    double start_offset_min = 200.0; // well starts this far above the top boundary
    double start_offset_max = 250.0;
    double measurement_noise = 0.0; // gamma observation noise hook, off by default

    void validate() const; // throws config_error on nonsense
};

// One true-earth model: the top boundary at every station, plus fault metadata.
// The bottom boundary is implicit (top + thickness) everywhere.
struct Realization {
    std::vector<double> top_depth; // n_stations + 1 values, TVD ft
    std::vector<int> fault_stations; // sorted; fault applies on the increment into that station
    std::vector<double> fault_throws; // signed ft, aligned with fault_stations
    double start_offset = 0.0; // ft above top_depth[0] where the well starts
    std::uint64_t seed = 0;

    double top(int k) const { return top_depth[static_cast<std::size_t>(k)]; }
    double bottom(int k) const;
    int n_stations() const { return static_cast<int>(top_depth.size()) - 1; }
    double thickness = 20.0;
};

struct OffsetLog {
    enum class Source { synthetic, file };
    std::vector<double> rel_depth; // strictly increasing, ft (bit TVD minus top TVD)
    std::vector<double> gamma;     // same length, values in [0,1]
    Source source = Source::synthetic;
    std::uint64_t seed = 0;   // when synthetic
    std::string path;         // when loaded from file
};

Realization generate_realization(const StratigraphyConfig& config, std::uint64_t seed);

OffsetLog synth_offset_log(std::uint64_t seed);

// Two-column CSV (rel_depth_ft, gamma), optional header. With rescale, gamma
// is min-max scaled into [0,1]; without it, out-of-range gamma is an error.
OffsetLog load_offset_log(const std::string& path, bool rescale = false);

// Linear interpolation; queries outside the grid clamp to the end samples.
double gamma_at(const OffsetLog& log, double rel_depth);

void save_realization_csv(const Realization& real, const std::string& path);

} // namespace geosteer

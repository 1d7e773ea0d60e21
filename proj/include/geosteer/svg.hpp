#pragma once

#include <string>
#include <vector>

namespace geosteer {

// Minimal deterministic SVG charts: fixed canvas, fixed palette, no external
// references, numbers formatted with fixed precision so identical inputs give
// byte-identical files.

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    // Optional shaded band (e.g. min-max across seeds), same x as band_x.
    std::vector<double> band_x, band_lo, band_hi;

    void save(const std::string& path) const;
};

struct BarGroup {
    std::string label;                // x-axis group label
    std::vector<double> values;       // one bar per series label
};

struct BarChart {
    std::string title;
    std::string y_label;
    std::vector<std::string> series_labels;
    std::vector<BarGroup> groups;
    double y_min = 0.0, y_max = 100.0;

    void save(const std::string& path) const;
};

} // namespace geosteer

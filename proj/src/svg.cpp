#include "geosteer/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "geosteer/csv.hpp"
#include "geosteer/errors.hpp"

namespace geosteer {

namespace {

constexpr double kWidth = 800, kHeight = 480;
constexpr double kLeft = 70, kRight = 30, kTop = 40, kBottom = 60;

const char* palette(std::size_t i) {
    static const char* colors[] = {"#4472c4", "#ed7d31", "#70ad47", "#c00000",
                                   "#7030a0", "#786048", "#2596be"};
    return colors[i % (sizeof(colors) / sizeof(colors[0]))];
}

std::string num(double v) { return format_double(v, 2); }

// A readable tick step: 1/2/5 times a power of ten covering the range.
double tick_step(double range) {
    if (range <= 0.0) return 1.0;
    const double raw = range / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

struct Scale {
    double lo, hi, px0, px1;
    double operator()(double v) const { return px0 + (v - lo) / (hi - lo) * (px1 - px0); }
};

void open_svg(std::ofstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
}

void axes(std::ofstream& out, const Scale& sx, const Scale& sy, const std::string& x_label,
          const std::string& y_label) {
    out << "<line x1=\"" << num(sx.px0) << "\" y1=\"" << num(sy.px0) << "\" x2=\""
        << num(sx.px1) << "\" y2=\"" << num(sy.px0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << num(sx.px0) << "\" y1=\"" << num(sy.px0) << "\" x2=\""
        << num(sx.px0) << "\" y2=\"" << num(sy.px1) << "\" stroke=\"black\"/>\n";

    const double xstep = tick_step(sx.hi - sx.lo);
    for (double t = std::ceil(sx.lo / xstep) * xstep; t <= sx.hi + 1e-9; t += xstep) {
        out << "<line x1=\"" << num(sx(t)) << "\" y1=\"" << num(sy.px0) << "\" x2=\""
            << num(sx(t)) << "\" y2=\"" << num(sy.px0 + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(sx(t)) << "\" y=\"" << num(sy.px0 + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_double(t, xstep < 1 ? 2 : 0) << "</text>\n";
    }
    const double ystep = tick_step(sy.hi - sy.lo);
    for (double t = std::ceil(sy.lo / ystep) * ystep; t <= sy.hi + 1e-9; t += ystep) {
        out << "<line x1=\"" << num(sx.px0 - 5) << "\" y1=\"" << num(sy(t)) << "\" x2=\""
            << num(sx.px0) << "\" y2=\"" << num(sy(t)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(sx.px0 - 8) << "\" y=\"" << num(sy(t) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_double(t, ystep < 1 ? 3 : 0) << "</text>\n";
    }
    out << "<text x=\"" << num((sx.px0 + sx.px1) / 2) << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << num((sy.px0 + sy.px1) / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << num((sy.px0 + sy.px1) / 2) << ")\">" << y_label
        << "</text>\n";
}

} // namespace

void LineChart::save(const std::string& path) const {
    if (series.empty()) throw usage_error("line chart needs at least one series");
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    auto grow = [&](const std::vector<double>& xs, const std::vector<double>& ys) {
        for (double v : xs) { xlo = std::min(xlo, v); xhi = std::max(xhi, v); }
        for (double v : ys) { ylo = std::min(ylo, v); yhi = std::max(yhi, v); }
    };
    for (const Series& s : series) grow(s.x, s.y);
    if (!band_x.empty()) { grow(band_x, band_lo); grow(band_x, band_hi); }
    if (xhi <= xlo) xhi = xlo + 1;
    if (yhi <= ylo) yhi = ylo + 1;
    const double pad = (yhi - ylo) * 0.05;
    ylo -= pad;
    yhi += pad;

    const Scale sx{xlo, xhi, kLeft, kWidth - kRight};
    const Scale sy{ylo, yhi, kHeight - kBottom, kTop};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write svg: " + path);
    open_svg(out, title);

    if (!band_x.empty()) {
        out << "<polygon fill=\"#4472c4\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < band_x.size(); ++i)
            out << num(sx(band_x[i])) << ',' << num(sy(band_hi[i])) << ' ';
        for (std::size_t i = band_x.size(); i-- > 0;)
            out << num(sx(band_x[i])) << ',' << num(sy(band_lo[i])) << ' ';
        out << "\"/>\n";
    }
    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        out << "<polyline fill=\"none\" stroke=\"" << palette(k) << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << num(sx(s.x[i])) << ',' << num(sy(s.y[i])) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << num(kWidth - kRight - 6) << "\" y=\"" << num(kTop + 16 * (k + 1))
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
            << palette(k) << "\">" << s.label << "</text>\n";
    }
    axes(out, sx, sy, x_label, y_label);
    out << "</svg>\n";
    if (!out) throw io_error("svg write failed: " + path);
}

void BarChart::save(const std::string& path) const {
    if (groups.empty() || series_labels.empty())
        throw usage_error("bar chart needs groups and series labels");

    const Scale sy{y_min, y_max, kHeight - kBottom, kTop};
    const double plot_w = kWidth - kLeft - kRight;
    const double group_w = plot_w / groups.size();
    const double bar_w = group_w * 0.8 / series_labels.size();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write svg: " + path);
    open_svg(out, title);

    for (std::size_t g = 0; g < groups.size(); ++g) {
        const double gx = kLeft + group_w * (g + 0.1);
        for (std::size_t s = 0; s < series_labels.size(); ++s) {
            const double v = s < groups[g].values.size() ? groups[g].values[s] : 0.0;
            const double x = gx + bar_w * s;
            const double y = sy(v);
            out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
                << num(bar_w * 0.92) << "\" height=\"" << num(sy.px0 - y) << "\" fill=\""
                << palette(s) << "\"/>\n";
            out << "<text x=\"" << num(x + bar_w * 0.46) << "\" y=\"" << num(y - 4)
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"9\">"
                << format_double(v, 1) << "</text>\n";
        }
        out << "<text x=\"" << num(kLeft + group_w * (g + 0.5)) << "\" y=\""
            << num(kHeight - kBottom + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << groups[g].label << "</text>\n";
    }
    for (std::size_t s = 0; s < series_labels.size(); ++s)
        out << "<text x=\"" << num(kWidth - kRight - 6) << "\" y=\"" << num(kTop + 16 * (s + 1))
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
            << palette(s) << "\">" << series_labels[s] << "</text>\n";

    const Scale sx{0, 1, kLeft, kWidth - kRight};
    const double ystep = tick_step(y_max - y_min);
    out << "<line x1=\"" << num(sx.px0) << "\" y1=\"" << num(sy.px0) << "\" x2=\"" << num(sx.px1)
        << "\" y2=\"" << num(sy.px0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << num(sx.px0) << "\" y1=\"" << num(sy.px0) << "\" x2=\"" << num(sx.px0)
        << "\" y2=\"" << num(sy.px1) << "\" stroke=\"black\"/>\n";
    for (double t = std::ceil(y_min / ystep) * ystep; t <= y_max + 1e-9; t += ystep) {
        out << "<line x1=\"" << num(sx.px0 - 5) << "\" y1=\"" << num(sy(t)) << "\" x2=\""
            << num(sx.px0) << "\" y2=\"" << num(sy(t)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(sx.px0 - 8) << "\" y=\"" << num(sy(t) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_double(t, 0) << "</text>\n";
    }
    out << "<text x=\"18\" y=\"" << num((sy.px0 + sy.px1) / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << num((sy.px0 + sy.px1) / 2) << ")\">" << y_label
        << "</text>\n";
    out << "</svg>\n";
    if (!out) throw io_error("svg write failed: " + path);
}

} // namespace geosteer

#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "geosteer/errors.hpp"

namespace geosteer {

// Deterministic CSV writer: fixed column order, fixed formatting, '\n' line
// endings. Numeric cells go through format_double so that two runs with the
// same data produce byte-identical files.

inline std::string format_double(double v, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

inline std::string format_sci(double v, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*e", precision, v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary), ncols_(header.size()) {
        if (!out_) throw io_error("cannot open for writing: " + path);
        write_row(header);
    }

    void write_row(const std::vector<std::string>& cells) {
        if (cells.size() != ncols_)
            throw usage_error("csv row has " + std::to_string(cells.size()) +
                              " cells, expected " + std::to_string(ncols_));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
        if (!out_) throw io_error("csv write failed");
    }

    void close() {
        out_.close();
        if (out_.fail()) throw io_error("csv close failed");
    }

private:
    std::ofstream out_;
    std::size_t ncols_;
};

} // namespace geosteer

#pragma once

#include <stdexcept>
#include <string>

namespace geosteer {

// Maps to CLI exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input data (malformed file, missing artifact, shape mismatch). Exit code 2.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem / stream failure. Exit code 3.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

// API misuse by calling code (stepping a finished episode, size mismatch).
struct usage_error : std::logic_error {
    explicit usage_error(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace geosteer

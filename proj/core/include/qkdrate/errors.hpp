#pragma once

#include <stdexcept>
#include <string>

namespace qkdrate {

// Thrown when a channel/source combination produces no usable signal
// (zero total gain, zero clicks, ...). Sweeps catch this per point and
// mark the row instead of aborting.
class degenerate_channel_error : public std::runtime_error {
public:
    explicit degenerate_channel_error(const std::string& what)
        : std::runtime_error(what) {}
};

// Thrown by the Monte Carlo layer when an estimate has no denominator.
class insufficient_statistics_error : public std::runtime_error {
public:
    explicit insufficient_statistics_error(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace qkdrate

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qkdrate/infomath.hpp"
#include "qkdrate/rates.hpp"

namespace qkdrate {

// Request metadata echoed into output headers for provenance (seed-free).
struct sweep_echo {
    std::string protocol;
    std::string profile_name;
    double l_min = 0.0;
    double l_max = 0.0;
    double l_step = 1.0;
    std::string optimize = "none";
    double mu = 0.1;
    double chi = 0.1;
    double q_threshold = 0.04;
    std::string ec = "cascade";
};

std::string ec_model_to_string(const ec_model& m);
// Accepts "shannon", "cascade", "const:<value>".
std::optional<ec_model> parse_ec_model(const std::string& s);

std::string optimize_vars_to_string(optimize_vars v);
std::optional<optimize_vars> parse_optimize_vars(const std::string& s);

const char* point_status_name(point_status s);

// min + k*step up to max inclusive (fp-tolerant endpoint); single point
// when min == max.
std::vector<double> make_grid(double l_min, double l_max, double l_step);

// CSV: '#'-prefixed request echo, fixed column set, shortest round-trip
// decimals, empty cells for absent values. Byte-stable for identical inputs.
std::string render_sweep_csv(const sweep_echo& echo,
                             const std::vector<rate_point>& points);
std::string render_sweep_json(const sweep_echo& echo,
                              const std::vector<rate_point>& points);

// Inverse of the renderers; numeric fields reproduce bit-exactly.
std::vector<rate_point> parse_sweep_csv(const std::string& text);
std::vector<rate_point> parse_sweep_json(const std::string& text);

} // namespace qkdrate

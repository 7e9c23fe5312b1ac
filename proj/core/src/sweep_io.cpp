#include "qkdrate/sweep_io.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "numfmt.hpp"

namespace qkdrate {

using detail::format_double;

std::string ec_model_to_string(const ec_model& m) {
    switch (m.which) {
    case ec_model::kind::shannon_limit: return "shannon";
    case ec_model::kind::cascade_cubic: return "cascade";
    case ec_model::kind::constant: return "const:" + format_double(m.constant_value);
    case ec_model::kind::custom: return "custom";
    }
    throw std::logic_error("ec_model_to_string: unreachable");
}

std::optional<ec_model> parse_ec_model(const std::string& s) {
    if (s == "shannon") return ec_model::shannon();
    if (s == "cascade") return ec_model::cascade();
    if (s.rfind("const:", 0) == 0) {
        try {
            return ec_model::constant(detail::parse_double(s.substr(6)));
        } catch (const std::invalid_argument&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::string optimize_vars_to_string(optimize_vars v) {
    switch (v) {
    case optimize_vars::none: return "none";
    case optimize_vars::mu: return "mu";
    case optimize_vars::chi: return "chi";
    case optimize_vars::mu_chi: return "mu-chi";
    }
    throw std::logic_error("optimize_vars_to_string: unreachable");
}

std::optional<optimize_vars> parse_optimize_vars(const std::string& s) {
    if (s == "none") return optimize_vars::none;
    if (s == "mu") return optimize_vars::mu;
    if (s == "chi") return optimize_vars::chi;
    if (s == "mu-chi") return optimize_vars::mu_chi;
    return std::nullopt;
}

const char* point_status_name(point_status s) {
    return s == point_status::ok ? "ok" : "degenerate";
}

std::vector<double> make_grid(double l_min, double l_max, double l_step) {
    if (!(l_step > 0.0)) throw std::invalid_argument("make_grid: step must be > 0");
    if (l_min < 0.0) throw std::invalid_argument("make_grid: L must be >= 0");
    if (l_min > l_max) throw std::invalid_argument("make_grid: min exceeds max");
    const double n_real = (l_max - l_min) / l_step;
    const auto n = static_cast<std::size_t>(std::floor(n_real + 1e-9));
    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        grid[i] = l_min + static_cast<double>(i) * l_step;
    return grid;
}

namespace {

constexpr const char* k_csv_columns =
    "L_km,transmittance,qber,mu,chi,rate_per_pulse_raw,rate_per_pulse,rate_bps,status";

std::string echo_line(const sweep_echo& e) {
    std::string s = "# protocol=" + e.protocol + " profile=" + e.profile_name;
    s += " l_min=" + format_double(e.l_min) + " l_max=" + format_double(e.l_max) +
         " l_step=" + format_double(e.l_step);
    s += " optimize=" + e.optimize;
    s += " mu=" + format_double(e.mu) + " chi=" + format_double(e.chi);
    s += " qt=" + format_double(e.q_threshold) + " ec=" + e.ec;
    return s;
}

std::string cell(double v) {
    return std::isnan(v) ? std::string() : format_double(v);
}

std::string cell(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

double parse_cell(const std::string& s) {
    return s.empty() ? std::numeric_limits<double>::quiet_NaN()
                     : detail::parse_double(s);
}

std::optional<double> parse_opt_cell(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return detail::parse_double(s);
}

} // namespace

std::string render_sweep_csv(const sweep_echo& echo,
                             const std::vector<rate_point>& points) {
    std::string out = "# qkdrate sweep\n" + echo_line(echo) + "\n";
    out += k_csv_columns;
    out += "\n";
    for (const auto& p : points) {
        out += format_double(p.L_km);
        out += ',' + cell(p.transmittance);
        out += ',' + cell(p.qber);
        out += ',' + cell(p.mu);
        out += ',' + cell(p.chi);
        out += ',' + cell(p.rate_per_pulse_raw);
        out += ',' + cell(p.rate_per_pulse);
        out += ',' + cell(p.rate_bps);
        out += ',';
        out += point_status_name(p.status);
        out += '\n';
    }
    return out;
}

std::vector<rate_point> parse_sweep_csv(const std::string& text) {
    std::vector<rate_point> points;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != k_csv_columns)
                throw std::invalid_argument("parse_sweep_csv: unexpected column header");
            header_seen = true;
            continue;
        }
        std::vector<std::string> cells;
        std::string cur;
        for (char ch : line) {
            if (ch == ',') {
                cells.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        cells.push_back(cur);
        if (cells.size() != 9)
            throw std::invalid_argument("parse_sweep_csv: expected 9 columns");
        rate_point p;
        p.L_km = detail::parse_double(cells[0]);
        p.transmittance = parse_cell(cells[1]);
        p.qber = parse_cell(cells[2]);
        p.mu = parse_opt_cell(cells[3]);
        p.chi = parse_opt_cell(cells[4]);
        p.rate_per_pulse_raw = parse_cell(cells[5]);
        p.rate_per_pulse = parse_cell(cells[6]);
        p.rate_bps = parse_cell(cells[7]);
        if (cells[8] == "ok") p.status = point_status::ok;
        else if (cells[8] == "degenerate") p.status = point_status::degenerate;
        else throw std::invalid_argument("parse_sweep_csv: unknown status '" + cells[8] + "'");
        points.push_back(std::move(p));
    }
    if (!header_seen)
        throw std::invalid_argument("parse_sweep_csv: no column header found");
    return points;
}

namespace {

void append_json_number(std::string& out, const char* key, double v,
                        bool trailing_comma = true) {
    out += '"';
    out += key;
    out += "\":";
    out += std::isnan(v) ? "null" : format_double(v);
    if (trailing_comma) out += ',';
}

void append_json_number(std::string& out, const char* key,
                        const std::optional<double>& v,
                        bool trailing_comma = true) {
    out += '"';
    out += key;
    out += "\":";
    out += v ? format_double(*v) : "null";
    if (trailing_comma) out += ',';
}

} // namespace

std::string render_sweep_json(const sweep_echo& echo,
                              const std::vector<rate_point>& points) {
    // Hand-rendered so the byte layout is stable; parsing uses a real JSON
    // library.
    std::string out = "{\n  \"request\": {";
    out += "\"protocol\":\"" + echo.protocol + "\",";
    out += "\"profile\":\"" + echo.profile_name + "\",";
    append_json_number(out, "l_min", echo.l_min);
    append_json_number(out, "l_max", echo.l_max);
    append_json_number(out, "l_step", echo.l_step);
    out += "\"optimize\":\"" + echo.optimize + "\",";
    append_json_number(out, "mu", echo.mu);
    append_json_number(out, "chi", echo.chi);
    append_json_number(out, "qt", echo.q_threshold);
    out += "\"ec\":\"" + echo.ec + "\"},\n  \"points\": [";
    bool first = true;
    for (const auto& p : points) {
        out += first ? "\n    {" : ",\n    {";
        first = false;
        append_json_number(out, "L_km", p.L_km);
        append_json_number(out, "transmittance", p.transmittance);
        append_json_number(out, "qber", p.qber);
        append_json_number(out, "mu", p.mu);
        append_json_number(out, "chi", p.chi);
        append_json_number(out, "rate_per_pulse_raw", p.rate_per_pulse_raw);
        append_json_number(out, "rate_per_pulse", p.rate_per_pulse);
        append_json_number(out, "rate_bps", p.rate_bps);
        out += "\"status\":\"";
        out += point_status_name(p.status);
        out += "\"}";
    }
    out += "\n  ]\n}\n";
    return out;
}

std::vector<rate_point> parse_sweep_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    std::vector<rate_point> points;
    auto get_num = [](const nlohmann::json& row, const char* key) {
        const auto& v = row.at(key);
        return v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                           : v.get<double>();
    };
    for (const auto& row : doc.at("points")) {
        rate_point p;
        p.L_km = row.at("L_km").get<double>();
        p.transmittance = get_num(row, "transmittance");
        p.qber = get_num(row, "qber");
        if (!row.at("mu").is_null()) p.mu = row.at("mu").get<double>();
        if (!row.at("chi").is_null()) p.chi = row.at("chi").get<double>();
        p.rate_per_pulse_raw = get_num(row, "rate_per_pulse_raw");
        p.rate_per_pulse = get_num(row, "rate_per_pulse");
        p.rate_bps = get_num(row, "rate_bps");
        const std::string status = row.at("status").get<std::string>();
        if (status == "ok") p.status = point_status::ok;
        else if (status == "degenerate") p.status = point_status::degenerate;
        else throw std::invalid_argument("parse_sweep_json: unknown status");
        points.push_back(std::move(p));
    }
    return points;
}

} // namespace qkdrate

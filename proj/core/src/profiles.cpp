#include "qkdrate/profiles.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "numfmt.hpp"

namespace qkdrate {

namespace {

experiment_profile make(std::string name, double alpha, double lc, double eta,
                        double dark, double e0, double lambda_nm,
                        std::optional<double> mid_dark = std::nullopt) {
    experiment_profile p;
    p.name = std::move(name);
    p.channel = {alpha, lc};
    p.detector = {eta, dark, 2, e0};
    p.pulse_rate_hz = 1.0;
    p.wavelength_nm = lambda_nm;
    p.mid_station_dark_count = mid_dark;
    return p;
}

std::vector<experiment_profile> build_registry() {
    std::vector<experiment_profile> v;
    //                 alpha   L_c   eta    dark      e_0     lambda
    v.push_back(make("BT8", 2.5, 8.0, 0.5, 5e-8, 0.01, 830.0));
    v.push_back(make("BT13", 0.38, 5.0, 0.11, 1e-5, 8e-3, 1300.0));
    v.push_back(make("G13", 0.32, 3.2, 0.17, 8.2e-5, 1.4e-3, 1300.0));
    v.push_back(make("KTH15", 0.2, 1.0, 0.18, 2e-4, 0.01, 1550.0));
    v.push_back(make("NTT-Red", 0.2, 2.0, 0.03, 1.95e-5, 0.088, 1550.0));
    v.push_back(make("NTT-Green", 0.2, 1.0, 0.03, 1e-6, 0.02, 1550.0));
    v.push_back(make("NTT-Blue", 0.2, 1.0, 0.03, 1e-6, 0.07, 1550.0));
    // GYS / TANG have no quoted receiver loss; the relay variant of GYS
    // uses d = 8.5e-7 instead of the fiber-link value 1e-6.
    v.push_back(make("GYS", 0.21, 0.0, 0.045, 1e-6, 0.033, 1550.0, 8.5e-7));
    v.push_back(make("TANG", 0.21, 0.0, 0.43, 1e-7, 0.005, 1550.0));
    return v;
}

} // namespace

const std::vector<experiment_profile>& builtin_profiles() {
    static const std::vector<experiment_profile> registry = build_registry();
    return registry;
}

const experiment_profile* find_builtin_profile(const std::string& name) {
    for (const auto& p : builtin_profiles())
        if (p.name == name) return &p;
    return nullptr;
}

double transmittance(const channel_params& ch, double L_km,
                     bool include_receiver_loss) {
    if (L_km < 0.0) throw std::invalid_argument("transmittance: L < 0");
    double db = ch.alpha_db_per_km * L_km;
    if (include_receiver_loss) db += ch.receiver_loss_db;
    return std::pow(10.0, -db / 10.0);
}

double mid_station_transmittance(const channel_params& ch, double L_km) {
    if (L_km < 0.0) throw std::invalid_argument("mid_station_transmittance: L < 0");
    return std::pow(10.0, -ch.alpha_db_per_km * L_km / 20.0);
}

std::string serialize_profile(const experiment_profile& p) {
    using detail::format_double;
    std::string out;
    out += "alpha_db_per_km=" + format_double(p.channel.alpha_db_per_km) + "\n";
    out += "receiver_loss_db=" + format_double(p.channel.receiver_loss_db) + "\n";
    out += "efficiency=" + format_double(p.detector.efficiency) + "\n";
    out += "dark_count=" + format_double(p.detector.dark_count) + "\n";
    out += "num_detectors=" + std::to_string(p.detector.num_detectors) + "\n";
    out += "intrinsic_error=" + format_double(p.detector.intrinsic_error) + "\n";
    out += "pulse_rate_hz=" + format_double(p.pulse_rate_hz) + "\n";
    out += "wavelength_nm=" + format_double(p.wavelength_nm) + "\n";
    if (p.mid_station_dark_count)
        out += "mid_station_dark_count=" + format_double(*p.mid_station_dark_count) + "\n";
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

} // namespace

experiment_profile parse_profile(const std::string& text, const std::string& name) {
    experiment_profile p;
    p.name = name;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("profile: expected key=value, got '" + line + "'");
        std::string_view key = trim(sv.substr(0, eq));
        std::string_view val = trim(sv.substr(eq + 1));
        if (key == "alpha_db_per_km") p.channel.alpha_db_per_km = detail::parse_double(val);
        else if (key == "receiver_loss_db") p.channel.receiver_loss_db = detail::parse_double(val);
        else if (key == "efficiency") p.detector.efficiency = detail::parse_double(val);
        else if (key == "dark_count") p.detector.dark_count = detail::parse_double(val);
        else if (key == "num_detectors") p.detector.num_detectors = static_cast<int>(detail::parse_int(val));
        else if (key == "intrinsic_error") p.detector.intrinsic_error = detail::parse_double(val);
        else if (key == "pulse_rate_hz") p.pulse_rate_hz = detail::parse_double(val);
        else if (key == "wavelength_nm") p.wavelength_nm = detail::parse_double(val);
        else if (key == "mid_station_dark_count") p.mid_station_dark_count = detail::parse_double(val);
        else throw std::invalid_argument("profile: unknown key '" + std::string(key) + "'");
    }
    if (p.channel.alpha_db_per_km <= 0.0)
        throw std::invalid_argument("profile: alpha_db_per_km must be > 0");
    if (p.detector.efficiency < 0.0 || p.detector.efficiency > 1.0)
        throw std::invalid_argument("profile: efficiency outside [0,1]");
    if (p.detector.dark_count < 0.0 || p.detector.dark_count >= 1.0)
        throw std::invalid_argument("profile: dark_count outside [0,1)");
    if (p.detector.num_detectors < 1)
        throw std::invalid_argument("profile: num_detectors must be >= 1");
    if (p.detector.intrinsic_error < 0.0 || p.detector.intrinsic_error > 0.5)
        throw std::invalid_argument("profile: intrinsic_error outside [0,0.5]");
    return p;
}

experiment_profile load_profile_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open profile file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    // Name the profile after the file stem.
    auto slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
    return parse_profile(ss.str(), base);
}

} // namespace qkdrate

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qkdrate {

struct channel_params {
    double alpha_db_per_km = 0.2; // fiber attenuation
    double receiver_loss_db = 0.0; // L_c; 0 when a protocol ignores it
};

struct detector_params {
    double efficiency = 1.0;      // quantum yield eta in [0,1]
    double dark_count = 0.0;      // per-gate, per-detector probability d_B
    int num_detectors = 2;        // n_D
    double intrinsic_error = 0.0; // baseline error on a genuine detection (e_0 / e_d)
    // Aggregate dark-count probability across all gated detectors.
    double p_dark() const { return num_detectors * dark_count; }
};

struct experiment_profile {
    std::string name;
    channel_params channel;
    detector_params detector;
    double pulse_rate_hz = 1.0; // nu; 1 => outputs are per pulse
    double wavelength_nm = 0.0; // metadata only
    // Some parameter sets quote a distinct dark count for the untrusted-relay
    // detectors; engines that model a mid-station prefer this when present.
    std::optional<double> mid_station_dark_count;
};

// The nine named parameter sets used throughout: BT8, BT13, G13, KTH15,
// NTT-Red, NTT-Green, NTT-Blue, GYS, TANG.
const std::vector<experiment_profile>& builtin_profiles();

// nullptr when the name is unknown. Lookup is case-sensitive.
const experiment_profile* find_builtin_profile(const std::string& name);

// 10^(-alpha L / 10), optionally folding the lumped receiver loss:
// 10^(-(alpha L + L_c)/10). L < 0 rejected.
double transmittance(const channel_params& ch, double L_km,
                     bool include_receiver_loss = false);

// One-arm transmittance to a relay at mid distance: 10^(-alpha L / 20).
double mid_station_transmittance(const channel_params& ch, double L_km);

// Flat key=value text. Keys: alpha_db_per_km, receiver_loss_db, efficiency,
// dark_count, num_detectors, intrinsic_error, pulse_rate_hz, wavelength_nm,
// and optionally mid_station_dark_count. Values round-trip bit-exactly
// (shortest decimal representation).
std::string serialize_profile(const experiment_profile& p);
experiment_profile parse_profile(const std::string& text,
                                 const std::string& name = "custom");
experiment_profile load_profile_file(const std::string& path);

} // namespace qkdrate

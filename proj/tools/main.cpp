// qkdrate: secret-key-rate sweeps, profile listing, and Monte Carlo
// validation for a family of fiber QKD protocols.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qkdrate/errors.hpp"
#include "qkdrate/mcoracle.hpp"
#include "qkdrate/profiles.hpp"
#include "qkdrate/rates.hpp"
#include "qkdrate/sweep_io.hpp"

namespace {

constexpr int k_exit_ok = 0;
constexpr int k_exit_bad_args = 2;
constexpr int k_exit_validation = 3;
constexpr int k_exit_degenerate = 4;

int write_output(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        return k_exit_ok;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file: " << out_path << "\n";
        return k_exit_bad_args;
    }
    out << content;
    return k_exit_ok;
}

std::string human_profile_table(const std::string& only = {}) {
    std::string s =
        "name        alpha[dB/km]  L_c[dB]  efficiency  dark_count  n_D  "
        "intrinsic_error  pulse_rate[Hz]  wavelength[nm]\n";
    char line[256];
    for (const auto& p : qkdrate::builtin_profiles()) {
        if (!only.empty() && p.name != only) continue;
        std::snprintf(line, sizeof(line),
                      "%-11s %-13g %-8g %-11g %-11g %-4d %-16g %-15g %g\n",
                      p.name.c_str(), p.channel.alpha_db_per_km,
                      p.channel.receiver_loss_db, p.detector.efficiency,
                      p.detector.dark_count, p.detector.num_detectors,
                      p.detector.intrinsic_error, p.pulse_rate_hz,
                      p.wavelength_nm);
        s += line;
    }
    return s;
}

struct sweep_args {
    std::string protocol;
    std::string profile;
    std::string params_file;
    double l_min = 0.0, l_max = 100.0, l_step = 1.0;
    std::string optimize = "none";
    double mu = 0.1, chi = 0.1, qt = 0.04;
    std::string ec = "cascade";
    std::string format = "csv";
    std::string out;
    int threads = 0;
};

int run_sweep(const sweep_args& a) {
    const auto protocol = qkdrate::parse_protocol(a.protocol);
    if (!protocol) {
        std::cerr << "error: unknown protocol '" << a.protocol << "'\n";
        return k_exit_bad_args;
    }

    qkdrate::experiment_profile profile;
    if (!a.params_file.empty()) {
        try {
            profile = qkdrate::load_profile_file(a.params_file);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return k_exit_bad_args;
        }
    } else {
        const auto* p = qkdrate::find_builtin_profile(a.profile);
        if (!p) {
            std::cerr << "error: unknown profile '" << a.profile << "'\n";
            return k_exit_bad_args;
        }
        profile = *p;
    }

    const auto opt = qkdrate::parse_optimize_vars(a.optimize);
    if (!opt) {
        std::cerr << "error: bad --optimize value '" << a.optimize << "'\n";
        return k_exit_bad_args;
    }
    const auto ec = qkdrate::parse_ec_model(a.ec);
    if (!ec) {
        std::cerr << "error: bad --ec value '" << a.ec << "'\n";
        return k_exit_bad_args;
    }
    if (a.format != "csv" && a.format != "json") {
        std::cerr << "error: bad --format value '" << a.format << "'\n";
        return k_exit_bad_args;
    }

    qkdrate::sweep_request req;
    req.protocol = *protocol;
    req.profile = profile;
    req.optimize = *opt;
    req.mu = a.mu;
    req.chi = a.chi;
    req.q_threshold = a.qt;
    req.ec = *ec;
    req.threads = a.threads;

    std::vector<qkdrate::rate_point> points;
    try {
        req.grid = qkdrate::make_grid(a.l_min, a.l_max, a.l_step);
        points = qkdrate::sweep(req);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return k_exit_bad_args;
    }

    qkdrate::sweep_echo echo;
    echo.protocol = a.protocol;
    echo.profile_name = profile.name;
    echo.l_min = a.l_min;
    echo.l_max = a.l_max;
    echo.l_step = a.l_step;
    echo.optimize = a.optimize;
    echo.mu = a.mu;
    echo.chi = a.chi;
    echo.q_threshold = a.qt;
    echo.ec = qkdrate::ec_model_to_string(*ec);

    const std::string text = a.format == "csv"
                                 ? qkdrate::render_sweep_csv(echo, points)
                                 : qkdrate::render_sweep_json(echo, points);
    const int rc = write_output(text, a.out);
    if (rc != k_exit_ok) return rc;

    bool all_degenerate = !points.empty();
    for (const auto& p : points)
        if (p.status == qkdrate::point_status::ok) all_degenerate = false;
    return all_degenerate ? k_exit_degenerate : k_exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"QKD secret-key-rate calculator"};
    app.require_subcommand(1);

    // profiles list
    auto* profiles_cmd = app.add_subcommand("profiles", "profile registry");
    profiles_cmd->require_subcommand(1);
    auto* list_cmd = profiles_cmd->add_subcommand("list", "list builtin profiles");
    bool machine = false;
    std::string list_profile;
    list_cmd->add_flag("--machine", machine,
                       "emit re-parseable key=value profile text");
    list_cmd->add_option("--profile", list_profile, "restrict to one profile");

    // sweep
    sweep_args sa;
    auto* sweep_cmd = app.add_subcommand("sweep", "rate vs distance sweep");
    sweep_cmd->add_option("--protocol", sa.protocol, "protocol id")->required();
    sweep_cmd->add_option("--profile", sa.profile, "builtin profile name");
    sweep_cmd->add_option("--params", sa.params_file, "profile parameter file");
    sweep_cmd->add_option("--l-min", sa.l_min, "start distance, km");
    sweep_cmd->add_option("--l-max", sa.l_max, "end distance, km");
    sweep_cmd->add_option("--l-step", sa.l_step, "grid step, km");
    sweep_cmd->add_option("--optimize", sa.optimize, "none|mu|chi|mu-chi");
    sweep_cmd->add_option("--mu", sa.mu, "mean photon number (fixed or seed)");
    sweep_cmd->add_option("--chi", sa.chi, "SPDC parameter (fixed or seed)");
    sweep_cmd->add_option("--qt", sa.qt, "threshold QBER (simple protocol)");
    sweep_cmd->add_option("--ec", sa.ec, "shannon|const:<v>|cascade");
    sweep_cmd->add_option("--format", sa.format, "csv|json");
    sweep_cmd->add_option("--out", sa.out, "output path (default stdout)");
    sweep_cmd->add_option("--threads", sa.threads, "worker threads (0 = auto)");

    // mc-validate
    std::uint64_t pulses = 1000000, seed = 42;
    int mc_threads = 0;
    std::string mc_out;
    std::string models = "wcp,simple,qc";
    auto* mc_cmd = app.add_subcommand("mc-validate",
                                      "Monte Carlo vs analytic agreement");
    mc_cmd->add_option("--pulses", pulses, "pulses per estimate (>= 1e4)");
    mc_cmd->add_option("--seed", seed, "base RNG seed");
    mc_cmd->add_option("--threads", mc_threads, "worker threads (0 = auto)");
    mc_cmd->add_option("--models", models,
                       "comma list from {wcp,simple,qc}");
    mc_cmd->add_option("--out", mc_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            app.exit(e);
            return k_exit_ok;
        }
        std::cerr << "error: " << e.what() << "\n";
        return k_exit_bad_args;
    }

    try {
        if (list_cmd->parsed()) {
            if (!list_profile.empty()) {
                const auto* p = qkdrate::find_builtin_profile(list_profile);
                if (!p) {
                    std::cerr << "error: unknown profile '" << list_profile << "'\n";
                    return k_exit_bad_args;
                }
                if (machine) {
                    std::cout << qkdrate::serialize_profile(*p);
                } else {
                    std::cout << human_profile_table(list_profile);
                }
                return k_exit_ok;
            }
            if (machine) {
                for (const auto& p : qkdrate::builtin_profiles()) {
                    std::cout << "# profile: " << p.name << "\n"
                              << qkdrate::serialize_profile(p) << "\n";
                }
            } else {
                std::cout << human_profile_table();
            }
            return k_exit_ok;
        }

        if (sweep_cmd->parsed()) return run_sweep(sa);

        if (mc_cmd->parsed()) {
            qkdrate::mc_model_mask mask{false, false, false};
            std::string tok;
            std::istringstream ms(models);
            while (std::getline(ms, tok, ',')) {
                if (tok == "wcp") mask.wcp = true;
                else if (tok == "simple") mask.simple = true;
                else if (tok == "qc") mask.qc = true;
                else {
                    std::cerr << "error: bad --models entry '" << tok << "'\n";
                    return k_exit_bad_args;
                }
            }
            if (!mask.wcp && !mask.simple && !mask.qc) {
                std::cerr << "error: --models selects nothing\n";
                return k_exit_bad_args;
            }
            qkdrate::mc_validation_report rep;
            try {
                rep = qkdrate::run_mc_validation(pulses, seed, mc_threads, mask);
            } catch (const std::invalid_argument& e) {
                std::cerr << "error: " << e.what() << "\n";
                return k_exit_bad_args;
            }
            const int rc =
                write_output(qkdrate::render_mc_validation_report(rep), mc_out);
            if (rc != k_exit_ok) return rc;
            return rep.ok ? k_exit_ok : k_exit_validation;
        }
    } catch (const qkdrate::insufficient_statistics_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return k_exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return k_exit_bad_args;
    }
    return k_exit_ok;
}

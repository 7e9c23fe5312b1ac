#include "qkdrate/rates.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "qkdrate/errors.hpp"
#include "qkdrate/optimize.hpp"
#include "qkdrate/sources.hpp"

namespace qkdrate {

namespace {

constexpr double k_neg_inf = -std::numeric_limits<double>::infinity();

rate_point make_point(double L, double eta_t, double qber, double raw,
                      std::optional<double> mu, std::optional<double> chi,
                      double pulse_rate) {
    rate_point pt;
    pt.L_km = L;
    pt.transmittance = eta_t;
    pt.qber = qber;
    pt.mu = mu;
    pt.chi = chi;
    pt.rate_per_pulse_raw = raw;
    pt.rate_per_pulse = std::max(0.0, raw);
    pt.rate_bps = pulse_rate * pt.rate_per_pulse;
    pt.status = point_status::ok;
    return pt;
}

void require_positive_mu(double mu, const char* who) {
    if (!(mu > 0.0)) throw std::invalid_argument(std::string(who) + ": mu must be > 0");
}

} // namespace

const char* protocol_name(protocol_id id) {
    switch (id) {
    case protocol_id::simple: return "simple";
    case protocol_id::qc: return "qc";
    case protocol_id::bb84_wcp: return "bb84-wcp";
    case protocol_id::bb84_spdc: return "bb84-spdc";
    case protocol_id::bbm92_ideal: return "bbm92-ideal";
    case protocol_id::bbm92_spdc: return "bbm92-spdc";
    case protocol_id::bbm92_arbitrary: return "bbm92-arbitrary";
    case protocol_id::dpsk: return "dpsk";
    case protocol_id::sarg04_4: return "sarg04-4";
    case protocol_id::sarg04_6: return "sarg04-6";
    case protocol_id::mdi_sarg04_t1: return "mdi-sarg04-t1";
    case protocol_id::mdi_sarg04_t2: return "mdi-sarg04-t2";
    }
    throw std::logic_error("protocol_name: unreachable");
}

std::optional<protocol_id> parse_protocol(const std::string& name) {
    static const protocol_id all[] = {
        protocol_id::simple,        protocol_id::qc,
        protocol_id::bb84_wcp,      protocol_id::bb84_spdc,
        protocol_id::bbm92_ideal,   protocol_id::bbm92_spdc,
        protocol_id::bbm92_arbitrary, protocol_id::dpsk,
        protocol_id::sarg04_4,      protocol_id::sarg04_6,
        protocol_id::mdi_sarg04_t1, protocol_id::mdi_sarg04_t2,
    };
    for (auto id : all)
        if (name == protocol_name(id)) return id;
    return std::nullopt;
}

bool protocol_uses_mu(protocol_id id) {
    switch (id) {
    case protocol_id::simple:
    case protocol_id::qc:
    case protocol_id::bb84_wcp:
    case protocol_id::dpsk:
    case protocol_id::sarg04_4:
    case protocol_id::sarg04_6:
    case protocol_id::mdi_sarg04_t1:
    case protocol_id::mdi_sarg04_t2:
        return true;
    default:
        return false;
    }
}

bool protocol_uses_chi(protocol_id id) {
    return id == protocol_id::bb84_spdc || id == protocol_id::bbm92_spdc;
}

// ---- simple --------------------------------------------------------------

double simple_qber(const experiment_profile& p, double mu, double L_km) {
    require_positive_mu(mu, "simple_qber");
    const double eta_te = transmittance(p.channel, L_km) * p.detector.efficiency;
    const double p_signal = mu * eta_te;
    const double p_noise = (1.0 - eta_te) * p.detector.dark_count;
    const double denom = p_signal + p_noise;
    if (denom <= 0.0)
        throw degenerate_channel_error("simple_qber: no detection probability");
    return p_noise / denom;
}

rate_point simple_rate(const experiment_profile& p, double mu, double q_threshold,
                       double L_km) {
    require_positive_mu(mu, "simple_rate");
    if (!(q_threshold > 0.0 && q_threshold <= 0.5))
        throw std::invalid_argument("simple_rate: q_threshold outside (0,0.5]");
    const double eta_t = transmittance(p.channel, L_km);
    const double eta_te = eta_t * p.detector.efficiency;
    const double p_signal = mu * eta_te;
    const double p_noise = (1.0 - eta_te) * p.detector.dark_count;
    const double denom = p_signal + p_noise;
    if (denom <= 0.0)
        throw degenerate_channel_error("simple_rate: no detection probability");
    const double qber = p_noise / denom;
    const double raw = denom * (1.0 - qber / q_threshold);
    return make_point(L_km, eta_t, qber, raw, mu, std::nullopt, p.pulse_rate_hz);
}

// ---- qc -------------------------------------------------------------------

qc_ec_pa_model default_qc_ec_pa() {
    qc_ec_pa_model m;
    m.ec_fraction = [](double q) {
        if (q <= 0.0) return 0.0; // Q log2 Q -> 0
        return 3.5 * q - q * std::log2(q);
    };
    m.pa_fraction = [](double q) {
        return 1.0 + std::log2((1.0 + 4.0 * q - 4.0 * q * q) / 2.0);
    };
    return m;
}

rate_point qc_rate(const experiment_profile& p, double mu, double L_km,
                   const qc_ec_pa_model& model, const qc_options& opts) {
    require_positive_mu(mu, "qc_rate");
    const double eta_t = transmittance(p.channel, L_km, true);
    const double eta = p.detector.efficiency;
    const double d = p.detector.dark_count;
    const double p_signal = mu * eta_t * eta;
    const double p_noise = (1.0 - eta_t * eta) * d;
    const double denom = p_signal + p.detector.num_detectors * d;
    if (denom <= 0.0)
        throw degenerate_channel_error("qc_rate: no detection probability");
    const double qb = (p_noise * p_signal + d) / denom;
    const double ec = model.ec_fraction(qb);
    const double pa = model.pa_fraction(qb);
    const double prefactor = opts.include_qber_prefactor ? qb : 1.0;
    const double raw = prefactor * eta_t * mu * eta * (1.0 - ec) * (1.0 - pa);
    return make_point(L_km, eta_t, qb, raw, mu, std::nullopt, p.pulse_rate_hz);
}

rate_point qc_rate(const experiment_profile& p, double mu, double L_km) {
    return qc_rate(p, mu, L_km, default_qc_ec_pa(), {});
}

// ---- bb84 wcp --------------------------------------------------------------

double bb84_wcp_raw_rate(const experiment_profile& p, double mu, double L_km) {
    require_positive_mu(mu, "bb84_wcp_raw_rate");
    const double eta_te =
        transmittance(p.channel, L_km, true) * p.detector.efficiency;
    return at_least_one_click(wcp_source{mu}, eta_te);
}

rate_point bb84_wcp_rate(const experiment_profile& p, double mu,
                         const ec_model& ec, double L_km) {
    require_positive_mu(mu, "bb84_wcp_rate");
    const double eta_t = transmittance(p.channel, L_km, true);
    const double eta_te = eta_t * p.detector.efficiency;
    const double pd = p.detector.p_dark();
    const double p_signal = -std::expm1(-mu * eta_te); // 1 - e^(-mu eta_t eta)
    const double p_click = p_signal + pd * std::exp(-mu * eta_te);
    const double q = 0.5 * p_click;
    if (q <= 0.0)
        throw degenerate_channel_error("bb84_wcp_rate: zero gain");
    const double e_b =
        (p.detector.intrinsic_error * p_signal + 0.5 * pd) / (2.0 * q);
    const double raw = asymptotic_key_rate(q, e_b, q, e_b, ec);
    return make_point(L_km, eta_t, e_b, raw, mu, std::nullopt, p.pulse_rate_hz);
}

// ---- bb84 spdc --------------------------------------------------------------

rate_point bb84_spdc_rate(const experiment_profile& p, double chi,
                          const ec_model& ec, double L_km) {
    if (!(chi >= 0.0)) throw std::invalid_argument("bb84_spdc_rate: chi must be >= 0");
    const double eta_t = transmittance(p.channel, L_km, true);
    const double eta_a = p.detector.efficiency; // heralding arm stays local
    const double eta_b = p.detector.efficiency * eta_t;
    const double pd = p.detector.p_dark();

    const auto pmf = truncated_spdc_pmf(chi);
    double p_coinc = 0.0;
    double p_true = 0.0;
    for (std::size_t n = 1; n < pmf.size(); ++n) {
        const double nn = static_cast<double>(n);
        const double herald = 1.0 - std::pow(1.0 - eta_a, nn);
        const double bob = 1.0 - (1.0 - pd) * std::pow(1.0 - eta_b, nn);
        p_coinc += pmf[n] * herald * bob;
        if (n == 1) p_true = pmf[1] * eta_a * eta_b;
    }
    // vacuum term: Bob may dark-click but Alice never heralds
    if (p_coinc <= 0.0) {
        // e.g. chi = 0: no pairs, no heralded key
        return make_point(L_km, eta_t, 0.0, 0.0, std::nullopt, chi, p.pulse_rate_hz);
    }
    const double p_false = p_coinc - p_true;
    const double e_b =
        (p.detector.intrinsic_error * p_true + 0.5 * p_false) / p_coinc;
    const double q = 0.5 * p_coinc;
    const double raw = asymptotic_key_rate(q, e_b, q, e_b, ec);
    return make_point(L_km, eta_t, e_b, raw, std::nullopt, chi, p.pulse_rate_hz);
}

// ---- bbm92 -------------------------------------------------------------------

rate_point bbm92_rate(const experiment_profile& p, const bbm92_source& src,
                      const ec_model& ec, double L_km, const bbm92_options& opts) {
    double eta_arm_fiber = mid_station_transmittance(p.channel, L_km);
    if (opts.include_receiver_loss)
        eta_arm_fiber *= std::pow(10.0, -p.channel.receiver_loss_db / 2.0 / 10.0);
    const double eta_arm = p.detector.efficiency * eta_arm_fiber;
    const double pd = p.detector.p_dark();

    std::vector<double> pmf;
    std::optional<double> mu_used;
    std::optional<double> chi_used;
    switch (src.which) {
    case bbm92_source::kind::ideal_pair:
        pmf = {0.0, 1.0};
        break;
    case bbm92_source::kind::spdc:
        if (!(src.chi >= 0.0))
            throw std::invalid_argument("bbm92_rate: chi must be >= 0");
        pmf = truncated_spdc_pmf(src.chi);
        chi_used = src.chi;
        break;
    case bbm92_source::kind::arbitrary_mu: {
        const double mu_L =
            0.3 * std::pow(10.0, -0.7 * p.channel.alpha_db_per_km * L_km / 10.0);
        pmf = truncated_poisson_pmf(mu_L);
        mu_used = mu_L;
        break;
    }
    }

    double p_coinc = 0.0, p_true = 0.0;
    for (std::size_t n = 0; n < pmf.size(); ++n) {
        const double nn = static_cast<double>(n);
        const double click = 1.0 - (1.0 - pd) * std::pow(1.0 - eta_arm, nn);
        p_coinc += pmf[n] * click * click;
        if (n == 1) p_true = pmf[1] * eta_arm * eta_arm;
    }
    if (p_coinc <= 0.0)
        throw degenerate_channel_error("bbm92_rate: no coincidences");
    const double p_false = p_coinc - p_true;
    const double e =
        (p.detector.intrinsic_error * p_true + 0.5 * p_false) / p_coinc;
    const double q = 0.5 * p_coinc;
    const double raw = asymptotic_key_rate(q, e, q, e, ec);
    return make_point(L_km, eta_arm_fiber, e, raw, mu_used, chi_used,
                      p.pulse_rate_hz);
}

// ---- dpsk --------------------------------------------------------------------

double dpsk_secure_fraction(double e) {
    if (!(e >= 0.0 && e <= 0.5))
        throw std::invalid_argument("dpsk_secure_fraction: e outside [0,0.5]");
    const double one_minus_6e = 1.0 - 6.0 * e;
    const double g = 1.0 - e * e - 0.5 * one_minus_6e * one_minus_6e;
    if (g <= 0.0) return 0.0; // collision bound undefined; no secure bits
    return -std::log2(g);
}

rate_point dpsk_rate(const experiment_profile& p, double mu, const ec_model& ec,
                     double L_km) {
    require_positive_mu(mu, "dpsk_rate");
    const double eta_t = transmittance(p.channel, L_km, true);
    const double eta_te = eta_t * p.detector.efficiency;
    const double pd = p.detector.p_dark();
    const double p_signal = -std::expm1(-mu * eta_te);
    const double p_click = p_signal + pd * std::exp(-mu * eta_te);
    if (p_click <= 0.0)
        throw degenerate_channel_error("dpsk_rate: no clicks");
    const double e =
        (p.detector.intrinsic_error * p_signal + 0.5 * pd) / p_click;

    const double one_minus_6e = 1.0 - 6.0 * e;
    const double g = 1.0 - e * e - 0.5 * one_minus_6e * one_minus_6e;
    double raw = 0.0;
    if (g > 0.0)
        raw = p_click * (-std::log2(g) - ec_cost(ec, e) * binary_entropy(e));
    return make_point(L_km, eta_t, e, raw, mu, std::nullopt, p.pulse_rate_hz);
}

// ---- sarg04 --------------------------------------------------------------------

sarg04_strategies default_sarg04_strategies() {
    sarg04_strategies s;
    s.phase_error_map = [](double e_b) { return e_b; };
    s.joint_flip_probability = [](double e_b, double e_p) { return e_b * e_p; };
    return s;
}

rate_point sarg04_rate(sarg_variant variant, const experiment_profile& p,
                       double mu, const ec_model& ec, double L_km,
                       const sarg04_strategies& strategies) {
    require_positive_mu(mu, "sarg04_rate");
    const auto est = sarg04_decoy(variant, p.detector, p.channel, mu, L_km);

    double k = est.gains[0]; // vacuum contributes its full gain
    for (std::size_t n = 1; n <= 2 && n < est.gains.size(); ++n) {
        const double e_b = est.bit_errors[n];
        const double e_p = strategies.phase_error_map(e_b);
        const double a = strategies.joint_flip_probability(e_b, e_p);
        k += est.gains[n] * (1.0 - conditional_entropy({e_b, e_p, a}));
    }
    k -= est.total_gain * ec_cost(ec, est.total_error) *
         binary_entropy(est.total_error);

    const double eta_t = transmittance(p.channel, L_km);
    return make_point(L_km, eta_t, est.total_error, k, mu, std::nullopt,
                      p.pulse_rate_hz);
}

rate_point sarg04_rate(sarg_variant variant, const experiment_profile& p,
                       double mu, const ec_model& ec, double L_km) {
    return sarg04_rate(variant, p, mu, ec, L_km, default_sarg04_strategies());
}

// ---- mdi sarg04 ------------------------------------------------------------------

mdi_gains default_mdi_gain_model(mdi_event_type type, const experiment_profile& p,
                                 double mu, double L_km) {
    require_positive_mu(mu, "default_mdi_gain_model");
    const double eta_arm =
        p.detector.efficiency * mid_station_transmittance(p.channel, L_km);
    const double d = p.mid_station_dark_count.value_or(p.detector.dark_count);
    const double e0 = p.detector.intrinsic_error;

    const wcp_source src{mu};
    double pn[3] = {0.0, poisson_pmf(src, 1), poisson_pmf(src, 2)};

    mdi_gains g{};
    g.event_type = type;
    double weighted_err = 0.0;
    for (int m = 1; m <= 2; ++m) {
        for (int n = 1; n <= 2; ++n) {
            const double a = 1.0 - std::pow(1.0 - eta_arm, m);
            const double b = 1.0 - std::pow(1.0 - eta_arm, n);
            const double click_a = 1.0 - (1.0 - a) * (1.0 - d);
            const double click_b = 1.0 - (1.0 - b) * (1.0 - d);
            const double coinc = click_a * click_b;
            const double q = 0.5 * pn[m] * pn[n] * coinc;
            // Fraction of coincidences where at least one side fired on dark
            // counts rather than signal.
            const double dark_frac = coinc > 0.0 ? 1.0 - (a * b) / coinc : 1.0;
            const double e = e0 + 0.5 * dark_frac;
            g.joint_gains[m - 1][n - 1] = q;
            g.bit_errors[m - 1][n - 1] = e;
            g.phase_errors[m - 1][n - 1] = e;
            g.total_gain += q;
            weighted_err += q * e;
        }
    }
    if (g.total_gain <= 0.0)
        throw degenerate_channel_error("default_mdi_gain_model: zero total gain");
    g.total_error = weighted_err / g.total_gain;
    return g;
}

rate_point mdi_sarg04_rate(mdi_event_type type, const experiment_profile& p,
                           double mu, const ec_model& ec, double L_km,
                           const mdi_gain_model& gain_model,
                           const mdi_options& opts) {
    const mdi_gains g = gain_model(type, p, mu, L_km);
    if (g.total_gain <= 0.0)
        throw degenerate_channel_error("mdi_sarg04_rate: zero total gain");
    if (g.total_error > 0.5)
        throw degenerate_channel_error(
            "mdi_sarg04_rate: total error beyond the EC model domain");

    double k = 0.0;
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) {
            if (m == 1 && n == 1 && !opts.include_22_in_pa)
                continue; // highest-order gain term omitted from the PA sum
            k += g.joint_gains[m][n] * (1.0 - binary_entropy(g.phase_errors[m][n]));
        }
    k -= g.total_gain * ec_cost(ec, g.total_error) * binary_entropy(g.total_error);

    const double eta_t = mid_station_transmittance(p.channel, L_km);
    return make_point(L_km, eta_t, g.total_error, k, mu, std::nullopt,
                      p.pulse_rate_hz);
}

rate_point mdi_sarg04_rate(mdi_event_type type, const experiment_profile& p,
                           double mu, const ec_model& ec, double L_km) {
    return mdi_sarg04_rate(type, p, mu, ec, L_km, default_mdi_gain_model, {});
}

// ---- sweep ------------------------------------------------------------------------

rate_point evaluate_point(const sweep_request& req, double L_km, double mu,
                          double chi) {
    switch (req.protocol) {
    case protocol_id::simple:
        return simple_rate(req.profile, mu, req.q_threshold, L_km);
    case protocol_id::qc:
        return qc_rate(req.profile, mu, L_km);
    case protocol_id::bb84_wcp:
        return bb84_wcp_rate(req.profile, mu, req.ec, L_km);
    case protocol_id::bb84_spdc:
        return bb84_spdc_rate(req.profile, chi, req.ec, L_km);
    case protocol_id::bbm92_ideal:
        return bbm92_rate(req.profile, bbm92_source::ideal(), req.ec, L_km);
    case protocol_id::bbm92_spdc:
        return bbm92_rate(req.profile, bbm92_source::spdc(chi), req.ec, L_km);
    case protocol_id::bbm92_arbitrary:
        return bbm92_rate(req.profile, bbm92_source::arbitrary(), req.ec, L_km);
    case protocol_id::dpsk:
        return dpsk_rate(req.profile, mu, req.ec, L_km);
    case protocol_id::sarg04_4:
        return sarg04_rate(sarg_variant::four_state, req.profile, mu, req.ec, L_km);
    case protocol_id::sarg04_6:
        return sarg04_rate(sarg_variant::six_state, req.profile, mu, req.ec, L_km);
    case protocol_id::mdi_sarg04_t1:
        return mdi_sarg04_rate(mdi_event_type::type1, req.profile, mu, req.ec, L_km);
    case protocol_id::mdi_sarg04_t2:
        return mdi_sarg04_rate(mdi_event_type::type2, req.profile, mu, req.ec, L_km);
    }
    throw std::logic_error("evaluate_point: unreachable");
}

namespace {

rate_point degenerate_point(const sweep_request& req, double L_km) {
    rate_point pt;
    pt.L_km = L_km;
    // Transmittance is still well defined; report the engine convention.
    switch (req.protocol) {
    case protocol_id::simple:
    case protocol_id::sarg04_4:
    case protocol_id::sarg04_6:
        pt.transmittance = transmittance(req.profile.channel, L_km);
        break;
    case protocol_id::bbm92_ideal:
    case protocol_id::bbm92_spdc:
    case protocol_id::bbm92_arbitrary:
    case protocol_id::mdi_sarg04_t1:
    case protocol_id::mdi_sarg04_t2:
        pt.transmittance = mid_station_transmittance(req.profile.channel, L_km);
        break;
    default:
        pt.transmittance = transmittance(req.profile.channel, L_km, true);
        break;
    }
    pt.qber = std::numeric_limits<double>::quiet_NaN();
    pt.rate_per_pulse_raw = std::numeric_limits<double>::quiet_NaN();
    pt.rate_per_pulse = std::numeric_limits<double>::quiet_NaN();
    pt.rate_bps = std::numeric_limits<double>::quiet_NaN();
    pt.status = point_status::degenerate;
    return pt;
}

enum class opt_plan { fixed, scalar_mu, scalar_chi, bivariate };

opt_plan resolve_plan(const sweep_request& req) {
    const bool has_mu = protocol_uses_mu(req.protocol);
    const bool has_chi = protocol_uses_chi(req.protocol);
    bool want_mu = false, want_chi = false;
    switch (req.optimize) {
    case optimize_vars::none: return opt_plan::fixed;
    case optimize_vars::mu: want_mu = true; break;
    case optimize_vars::chi: want_chi = true; break;
    case optimize_vars::mu_chi: want_mu = want_chi = true; break;
    }
    const bool do_mu = want_mu && has_mu;
    const bool do_chi = want_chi && has_chi;
    if (!do_mu && !do_chi)
        throw std::invalid_argument(
            std::string("sweep: protocol '") + protocol_name(req.protocol) +
            "' has no optimizable parameter matching the directive");
    if (do_mu && do_chi) return opt_plan::bivariate;
    return do_mu ? opt_plan::scalar_mu : opt_plan::scalar_chi;
}

optimize_directive mu_directive(double seed) {
    optimize_directive d;
    d.bounds = {1e-6, 2.0};
    d.seeds = {seed};
    return d;
}

optimize_directive chi_directive(double seed) {
    optimize_directive d;
    d.bounds = {1e-6, 1.5};
    d.seeds = {seed};
    return d;
}

rate_point sweep_one(const sweep_request& req, opt_plan plan, double L_km) {
    // Raw (unclamped) rate as the optimization objective; degenerate
    // evaluations count as -inf so flat degenerate regions stay degenerate.
    auto raw_at = [&](double mu, double chi) {
        try {
            return evaluate_point(req, L_km, mu, chi).rate_per_pulse_raw;
        } catch (const degenerate_channel_error&) {
            return k_neg_inf;
        }
    };

    try {
        switch (plan) {
        case opt_plan::fixed:
            return evaluate_point(req, L_km, req.mu, req.chi);
        case opt_plan::scalar_mu: {
            auto r = maximize_scalar([&](double m) { return raw_at(m, req.chi); },
                                     mu_directive(req.mu));
            if (r.value == k_neg_inf)
                return degenerate_point(req, L_km);
            return evaluate_point(req, L_km, r.arg, req.chi);
        }
        case opt_plan::scalar_chi: {
            auto r = maximize_scalar([&](double c) { return raw_at(req.mu, c); },
                                     chi_directive(req.chi));
            if (r.value == k_neg_inf)
                return degenerate_point(req, L_km);
            return evaluate_point(req, L_km, req.mu, r.arg);
        }
        case opt_plan::bivariate: {
            auto r = maximize_bivariate(raw_at, mu_directive(req.mu),
                                        chi_directive(req.chi));
            if (r.value == k_neg_inf)
                return degenerate_point(req, L_km);
            return evaluate_point(req, L_km, r.arg_x, r.arg_y);
        }
        }
        throw std::logic_error("sweep_one: unreachable");
    } catch (const degenerate_channel_error&) {
        return degenerate_point(req, L_km);
    }
}

} // namespace

std::vector<rate_point> sweep(const sweep_request& req) {
    for (std::size_t i = 1; i < req.grid.size(); ++i)
        if (!(req.grid[i - 1] < req.grid[i]))
            throw std::invalid_argument("sweep: L grid must be strictly increasing");
    const opt_plan plan = resolve_plan(req);

    std::vector<rate_point> out(req.grid.size());
    if (req.grid.empty()) return out;

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    int threads = req.threads > 0 ? req.threads : std::max(1, hw);
    threads = std::min<int>(threads, static_cast<int>(req.grid.size()));

    if (threads <= 1) {
        for (std::size_t i = 0; i < req.grid.size(); ++i)
            out[i] = sweep_one(req, plan, req.grid[i]);
        return out;
    }

    // Points are independent; results land at their grid index, so the
    // output is identical for any thread count.
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= req.grid.size()) return;
            try {
                out[i] = sweep_one(req, plan, req.grid[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

} // namespace qkdrate

#include "qkdrate/mcoracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "numfmt.hpp"
#include "qkdrate/errors.hpp"

namespace qkdrate {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// Counter-based stream: every pulse gets its own generator derived from
// (seed, pulse index), so any partition of the pulse range produces the
// same per-pulse draws and the same integer totals.
struct pulse_rng {
    std::uint64_t state;
    pulse_rng(std::uint64_t seed, std::uint64_t pulse)
        : state(mix64(mix64(seed ^ 0x9E3779B97F4A7C15ULL) + pulse)) {}
    std::uint64_t next_u64() {
        state += 0x9E3779B97F4A7C15ULL;
        return mix64(state);
    }
    double next_uniform() { // [0, 1), 53-bit
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }
    bool bernoulli(double p) { return next_uniform() < p; }
};

unsigned sample_poisson(pulse_rng& rng, double mu) {
    const double u = rng.next_uniform();
    double p = std::exp(-mu), c = p;
    unsigned k = 0;
    while (u >= c && k < 500) {
        ++k;
        p *= mu / static_cast<double>(k);
        c += p;
    }
    return k;
}

struct tallies {
    std::uint64_t num = 0; // error events
    std::uint64_t den = 0; // click / denominator events
    void operator+=(const tallies& o) {
        num += o.num;
        den += o.den;
    }
};

template <typename PerPulse>
tallies run_pulses(std::uint64_t pulses, int threads, PerPulse&& per_pulse) {
    threads = threads > 0 ? threads
                          : std::max(1u, std::thread::hardware_concurrency());
    if (pulses < 4096) threads = 1;
    if (threads <= 1) {
        tallies t;
        for (std::uint64_t i = 0; i < pulses; ++i) per_pulse(i, t);
        return t;
    }
    std::vector<tallies> partial(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    const std::uint64_t chunk = pulses / static_cast<std::uint64_t>(threads);
    for (int t = 0; t < threads; ++t) {
        const std::uint64_t lo = chunk * static_cast<std::uint64_t>(t);
        const std::uint64_t hi =
            t + 1 == threads ? pulses : chunk * static_cast<std::uint64_t>(t + 1);
        pool.emplace_back([&, t, lo, hi] {
            tallies local;
            for (std::uint64_t i = lo; i < hi; ++i) per_pulse(i, local);
            partial[static_cast<std::size_t>(t)] = local;
        });
    }
    for (auto& th : pool) th.join();
    tallies total; // integer addition: order-independent, exact
    for (const auto& p : partial) total += p;
    return total;
}

double binomial_se(double p, std::uint64_t n) {
    if (n == 0) return 0.0;
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

mc_estimate make_estimate(const tallies& t, std::uint64_t pulses) {
    mc_estimate e;
    e.pulses = pulses;
    e.clicks = t.den;
    e.errors = t.num;
    e.click_rate = static_cast<double>(t.den) / static_cast<double>(pulses);
    e.click_se = binomial_se(e.click_rate, pulses);
    if (t.den > 0) {
        e.error_rate = static_cast<double>(t.num) / static_cast<double>(t.den);
        e.error_se = binomial_se(e.error_rate, t.den);
    }
    return e;
}

void check_config(const mc_config& c) {
    if (c.pulses < 1) throw std::invalid_argument("mc: pulses must be >= 1");
    if (!(c.mu > 0.0)) throw std::invalid_argument("mc: mu must be > 0");
    if (c.L_km < 0.0) throw std::invalid_argument("mc: L < 0");
}

} // namespace

mc_estimate simulate_wcp_channel(const mc_config& config) {
    check_config(config);
    const auto& p = config.profile;
    const double eta =
        transmittance(p.channel, config.L_km, true) * p.detector.efficiency;
    const double pd = p.detector.p_dark();
    const double e0 = p.detector.intrinsic_error;
    const double mu = config.mu;
    const std::uint64_t seed = config.seed;

    tallies t = run_pulses(config.pulses, config.threads,
                           [=](std::uint64_t i, tallies& acc) {
        pulse_rng rng(seed, i);
        const unsigned n = sample_poisson(rng, mu);
        unsigned survivors = 0;
        for (unsigned k = 0; k < n; ++k)
            if (rng.bernoulli(eta)) ++survivors;
        const bool dark = rng.bernoulli(pd);
        if (survivors > 0) {
            acc.den += 1;
            if (rng.bernoulli(e0)) acc.num += 1;
        } else if (dark) {
            acc.den += 1;
            if (rng.bernoulli(0.5)) acc.num += 1; // dark-only: random bit
        }
    });
    return make_estimate(t, config.pulses);
}

mc_analytic analytic_wcp_channel(const experiment_profile& p, double mu,
                                 double L_km) {
    const double eta = transmittance(p.channel, L_km, true) * p.detector.efficiency;
    const double pd = p.detector.p_dark();
    const double p_sig = -std::expm1(-mu * eta);
    const double p_click = p_sig + pd * (1.0 - p_sig);
    mc_analytic a;
    a.click_rate = p_click;
    a.error_rate = p_click > 0.0
        ? (p.detector.intrinsic_error * p_sig + 0.5 * pd * (1.0 - p_sig)) / p_click
        : 0.0;
    return a;
}

mc_estimate estimate_qber(const mc_config& config, mc_model model) {
    check_config(config);
    const auto& p = config.profile;
    const std::uint64_t seed = config.seed;
    tallies t;

    if (model == mc_model::simple) {
        const double ete =
            transmittance(p.channel, config.L_km) * p.detector.efficiency;
        const double p_signal = config.mu * ete;
        const double d = p.detector.dark_count;
        if (p_signal > 1.0)
            throw std::invalid_argument("estimate_qber: mu eta_t eta exceeds 1");
        t = run_pulses(config.pulses, config.threads,
                       [=](std::uint64_t i, tallies& acc) {
            pulse_rng rng(seed, i);
            const bool s = rng.bernoulli(p_signal);
            const bool transmitted = rng.bernoulli(ete);
            const bool dark = rng.bernoulli(d);
            const bool noise = !transmitted && dark;
            acc.den += static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(noise);
            acc.num += static_cast<std::uint64_t>(noise);
        });
    } else {
        const double ete =
            transmittance(p.channel, config.L_km, true) * p.detector.efficiency;
        const double p_signal = config.mu * ete;
        const double p_noise = (1.0 - ete) * p.detector.dark_count;
        const double d = p.detector.dark_count;
        const int n_d = p.detector.num_detectors;
        if (p_signal > 1.0)
            throw std::invalid_argument("estimate_qber: mu eta_t eta exceeds 1");
        t = run_pulses(config.pulses, config.threads,
                       [=](std::uint64_t i, tallies& acc) {
            pulse_rng rng(seed, i);
            const bool s = rng.bernoulli(p_signal);
            const bool ns = rng.bernoulli(p_noise);
            std::uint64_t darks = 0;
            bool first_dark = false;
            for (int j = 0; j < n_d; ++j) {
                const bool dj = rng.bernoulli(d);
                darks += static_cast<std::uint64_t>(dj);
                if (j == 0) first_dark = dj;
            }
            acc.den += static_cast<std::uint64_t>(s) + darks;
            acc.num += static_cast<std::uint64_t>(ns && s) +
                       static_cast<std::uint64_t>(first_dark);
        });
    }

    if (t.den == 0)
        throw insufficient_statistics_error(
            "estimate_qber: no detection events after all pulses");
    return make_estimate(t, config.pulses);
}

mc_analytic analytic_qber(const experiment_profile& p, double mu, double L_km,
                          mc_model model) {
    mc_analytic a;
    if (model == mc_model::simple) {
        const double ete = transmittance(p.channel, L_km) * p.detector.efficiency;
        const double p_signal = mu * ete;
        const double p_noise = (1.0 - ete) * p.detector.dark_count;
        a.click_rate = p_signal + p_noise;
        a.error_rate = p_noise / (p_signal + p_noise);
    } else {
        const double ete =
            transmittance(p.channel, L_km, true) * p.detector.efficiency;
        const double p_signal = mu * ete;
        const double p_noise = (1.0 - ete) * p.detector.dark_count;
        const double d = p.detector.dark_count;
        const double n_d = static_cast<double>(p.detector.num_detectors);
        a.click_rate = p_signal + n_d * d;
        a.error_rate = (p_noise * p_signal + d) / (p_signal + n_d * d);
    }
    return a;
}

// ---- validation harness -----------------------------------------------------

namespace {

double sigma_distance(double empirical, double analytic, std::uint64_t den) {
    // Standard error from the analytic probability, so near-zero empirical
    // counts do not produce a zero-width interval.
    const double se = binomial_se(analytic, den);
    if (se == 0.0) return empirical == analytic ? 0.0 : 1e9;
    return std::abs(empirical - analytic) / se;
}

mc_validation_case run_case(const experiment_profile& prof, double mu, double L,
                            std::uint64_t pulses, std::uint64_t seed,
                            int threads, const mc_model_mask& models) {
    mc_validation_case c;
    c.profile = prof;
    c.mu = mu;
    c.L_km = L;
    const double skipped = std::numeric_limits<double>::quiet_NaN();
    c.wcp_click_sigma = c.wcp_error_sigma = skipped;
    c.simple_qber_sigma = c.qc_qber_sigma = skipped;

    mc_config cfg;
    cfg.pulses = pulses;
    cfg.profile = prof;
    cfg.mu = mu;
    cfg.L_km = L;
    cfg.threads = threads;

    if (models.wcp) {
        cfg.seed = seed;
        const auto wcp = simulate_wcp_channel(cfg);
        const auto wcp_a = analytic_wcp_channel(prof, mu, L);
        c.wcp_click_sigma =
            sigma_distance(wcp.click_rate, wcp_a.click_rate, wcp.pulses);
        c.wcp_error_sigma =
            sigma_distance(wcp.error_rate, wcp_a.error_rate, wcp.clicks);
    }

    if (models.simple) {
        cfg.seed = seed + 1;
        const auto simple = estimate_qber(cfg, mc_model::simple);
        const auto simple_a = analytic_qber(prof, mu, L, mc_model::simple);
        c.simple_qber_sigma =
            sigma_distance(simple.error_rate, simple_a.error_rate, simple.clicks);
    }

    if (models.qc) {
        cfg.seed = seed + 2;
        const auto qc = estimate_qber(cfg, mc_model::qc);
        const auto qc_a = analytic_qber(prof, mu, L, mc_model::qc);
        c.qc_qber_sigma = sigma_distance(qc.error_rate, qc_a.error_rate, qc.clicks);
    }

    auto sigma_ok = [](double s) { return std::isnan(s) || s <= 3.0; };
    c.passed = sigma_ok(c.wcp_click_sigma) && sigma_ok(c.wcp_error_sigma) &&
               sigma_ok(c.simple_qber_sigma) && sigma_ok(c.qc_qber_sigma);
    return c;
}

} // namespace

mc_validation_report run_mc_validation(std::uint64_t pulses, std::uint64_t seed,
                                       int threads, mc_model_mask models) {
    if (pulses < 10000)
        throw std::invalid_argument("run_mc_validation: need at least 1e4 pulses");
    if (!models.wcp && !models.simple && !models.qc)
        throw std::invalid_argument("run_mc_validation: no models selected");
    mc_validation_report rep;
    rep.pulses = pulses;
    rep.seed = seed;

    constexpr int k_cases = 20;
    for (int i = 0; i < k_cases; ++i) {
        // Deterministic parameter draws spanning the tabulated ranges.
        pulse_rng draw(seed ^ 0xC0FFEE0DDBA11ULL, static_cast<std::uint64_t>(i));
        experiment_profile prof;
        prof.name = "mc-draw-" + std::to_string(i);
        prof.channel.alpha_db_per_km = 0.2 + 2.3 * draw.next_uniform();
        prof.channel.receiver_loss_db = 5.0 * draw.next_uniform();
        prof.detector.efficiency = 0.03 + 0.47 * draw.next_uniform();
        prof.detector.dark_count =
            std::exp(std::log(5e-8) +
                     draw.next_uniform() * (std::log(2e-4) - std::log(5e-8)));
        prof.detector.num_detectors = 2;
        prof.detector.intrinsic_error = 0.005 + 0.083 * draw.next_uniform();
        const double mu = 0.05 + 0.45 * draw.next_uniform();
        // Keep total fiber loss under ~12 dB so every estimate has statistics.
        const double L =
            draw.next_uniform() * (12.0 / prof.channel.alpha_db_per_km);

        const std::uint64_t case_seed = seed + 1000003ULL * static_cast<std::uint64_t>(i + 1);
        auto c = run_case(prof, mu, L, pulses, case_seed, threads, models);
        if (!c.passed) {
            // One salted rerun: ~80 three-sigma comparisons make an
            // occasional statistical miss expected.
            auto retry = run_case(prof, mu, L, pulses,
                                  case_seed ^ 0x5EEDFEED5EEDFEEDULL, threads,
                                  models);
            retry.passed_after_rerun = retry.passed;
            retry.passed = c.passed;
            c = retry;
        } else {
            c.passed_after_rerun = true;
        }
        rep.cases.push_back(std::move(c));
    }

    for (const auto& c : rep.cases)
        if (!c.passed_after_rerun) ++rep.failures;
    rep.ok = rep.failures <= 1;
    return rep;
}

std::string render_mc_validation_report(const mc_validation_report& rep) {
    using detail::format_double;
    std::string out;
    out += "mc-validate pulses=" + std::to_string(rep.pulses) +
           " seed=" + std::to_string(rep.seed) + "\n";
    out += "case alpha receiver_loss efficiency dark_count intrinsic_error mu L_km "
           "wcp_click_sigma wcp_error_sigma simple_qber_sigma qc_qber_sigma verdict\n";
    int idx = 0;
    for (const auto& c : rep.cases) {
        out += std::to_string(idx++);
        out += " " + format_double(c.profile.channel.alpha_db_per_km);
        out += " " + format_double(c.profile.channel.receiver_loss_db);
        out += " " + format_double(c.profile.detector.efficiency);
        out += " " + format_double(c.profile.detector.dark_count);
        out += " " + format_double(c.profile.detector.intrinsic_error);
        out += " " + format_double(c.mu);
        out += " " + format_double(c.L_km);
        auto sigma_cell = [](double s) {
            return std::isnan(s) ? std::string("-") : format_double(s);
        };
        out += " " + sigma_cell(c.wcp_click_sigma);
        out += " " + sigma_cell(c.wcp_error_sigma);
        out += " " + sigma_cell(c.simple_qber_sigma);
        out += " " + sigma_cell(c.qc_qber_sigma);
        if (c.passed_after_rerun)
            out += c.passed ? " pass" : " pass-after-rerun";
        else
            out += " FAIL";
        out += "\n";
    }
    out += "failures=" + std::to_string(rep.failures) +
           " policy=at-most-1-after-rerun\n";
    out += rep.ok ? "RESULT: PASS\n" : "RESULT: FAIL\n";
    return out;
}

} // namespace qkdrate

#include "qkdrate/decoy.hpp"

#include <cmath>
#include <stdexcept>

#include "qkdrate/errors.hpp"
#include "qkdrate/sources.hpp"

namespace qkdrate {

decoy_estimates sarg04_yields(sarg_variant variant, const detector_params& det,
                              const channel_params& ch, double L_km,
                              std::size_t n_max) {
    if (n_max < 2) throw std::invalid_argument("sarg04_yields: n_max must be >= 2");
    if (L_km < 0.0) throw std::invalid_argument("sarg04_yields: L < 0");

    const double s = variant == sarg_variant::four_state ? 2.0 : 3.0;
    const double eta = det.efficiency * transmittance(ch, L_km);
    const double pd = det.dark_count;
    const double ed = det.intrinsic_error;

    decoy_estimates est;
    est.yields.resize(n_max + 1);
    est.bit_errors.resize(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        const double eta_n = 1.0 - std::pow(1.0 - eta, static_cast<double>(n));
        const double y = (eta_n * (ed + 0.5) + (1.0 - eta_n) * pd) / s;
        const double num = eta_n * ed + 0.5 * (1.0 - eta_n) * pd;
        est.yields[n] = y;
        if (y > 0.0) {
            est.bit_errors[n] = num / (s * y);
        } else if (num == 0.0) {
            est.bit_errors[n] = 0.0; // no clicks at all; gain is zero too
        } else {
            throw degenerate_channel_error("sarg04_yields: zero yield with nonzero error mass");
        }
    }
    return est;
}

decoy_estimates decoy_totals(double mu, decoy_estimates est) {
    if (!(mu > 0.0)) throw std::invalid_argument("decoy_totals: mu must be > 0");
    const std::size_t n_count = est.yields.size();
    est.gains.resize(n_count);
    double q_mu = 0.0, err_mass = 0.0;
    double p = std::exp(-mu); // Poisson weight, updated multiplicatively
    for (std::size_t n = 0; n < n_count; ++n) {
        if (n > 0) p *= mu / static_cast<double>(n);
        est.gains[n] = p * est.yields[n];
        q_mu += est.gains[n];
        err_mass += est.gains[n] * est.bit_errors[n];
    }
    if (q_mu <= 0.0)
        throw degenerate_channel_error("decoy_totals: total gain is zero");
    est.total_gain = q_mu;
    est.total_error = err_mass / q_mu;
    return est;
}

decoy_estimates sarg04_decoy(sarg_variant variant, const detector_params& det,
                             const channel_params& ch, double mu, double L_km) {
    const std::size_t n_max = truncated_poisson_pmf(mu).size() - 1;
    return decoy_totals(mu, sarg04_yields(variant, det, ch, L_km,
                                          n_max < 2 ? 2 : n_max));
}

} // namespace qkdrate

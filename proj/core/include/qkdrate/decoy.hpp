#pragma once

#include <cstddef>
#include <vector>

#include "qkdrate/profiles.hpp"

namespace qkdrate {

enum class sarg_variant { four_state, six_state };

// Infinite-decoy-state estimates for the SARG04 family.
struct decoy_estimates {
    std::vector<double> yields;     // Y_n, n = 0..n_max
    std::vector<double> bit_errors; // e_b_n
    std::vector<double> gains;      // Q_n = e^(-mu) mu^n/n! * Y_n
    double total_gain = 0.0;        // Q_mu
    double total_error = 0.0;       // E_mu
};

// Per-photon-number yields and bit errors:
//   Y_n = (1/s)[eta_n (e_d + 1/2) + (1 - eta_n) p_dark],  s = 2 (four-state) or 3 (six-state)
//   e_b_n = [eta_n e_d + (1/2)(1 - eta_n) p_dark] / (s Y_n)
// with eta_n = 1 - (1 - eta)^n and eta = efficiency * 10^(-alpha L/10).
// Receiver loss is not part of this parameterization; p_dark is the
// per-gate dark-count probability as quoted (not aggregated over detectors).
decoy_estimates sarg04_yields(sarg_variant variant, const detector_params& det,
                              const channel_params& ch, double L_km,
                              std::size_t n_max);

// Fill gains and Poisson-weighted totals Q_mu, E_mu on top of the yields.
decoy_estimates decoy_totals(double mu, decoy_estimates estimates);

// Both steps with n_max from the source-series truncation rule.
decoy_estimates sarg04_decoy(sarg_variant variant, const detector_params& det,
                             const channel_params& ch, double mu, double L_km);

} // namespace qkdrate

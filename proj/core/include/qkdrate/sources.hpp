#pragma once

#include <cstddef>
#include <vector>

namespace qkdrate {

struct wcp_source {
    double mu; // mean photon number per pulse, > 0
};

struct spdc_source {
    double chi; // squeezing parameter, >= 0
};

struct ideal_pair_source {}; // exactly one entangled pair per pulse

// P(n) = e^(-mu) mu^n / n!, evaluated in log space for large n.
double poisson_pmf(const wcp_source& src, std::size_t n);

// 1 - e^(-mu eta): probability of at least one detected photon when each
// of the Poissonian photons survives with probability eta_total. The
// small-mu linearization mu*eta_total overshoots by at most (mu eta)^2/2.
double at_least_one_click(const wcp_source& src, double eta_total);

// Pair-number distribution of the two-mode squeezed state:
// P(n) = tanh^(2n)(chi) / cosh^2(chi).
double spdc_pair_pmf(const spdc_source& src, std::size_t n);

// Closed form of sum n P(n) = sinh^2(chi).
double spdc_mean_pairs(const spdc_source& src);

// Truncated pmf vector: terms included until cumulative mass reaches
// 1 - 1e-14, hard-capped at 10^4 entries. Index = photon/pair count.
std::vector<double> truncated_poisson_pmf(double mu);
std::vector<double> truncated_spdc_pmf(double chi);

} // namespace qkdrate

#include "qkdrate/sources.hpp"

#include <cmath>
#include <stdexcept>

namespace qkdrate {

namespace {
constexpr double k_mass_target = 1.0 - 1e-14;
constexpr std::size_t k_max_terms = 10000;
} // namespace

double poisson_pmf(const wcp_source& src, std::size_t n) {
    if (!(src.mu > 0.0)) throw std::invalid_argument("poisson_pmf: mu must be > 0");
    if (n < 30) {
        double p = std::exp(-src.mu);
        for (std::size_t k = 1; k <= n; ++k) p *= src.mu / static_cast<double>(k);
        return p;
    }
    double logp = -src.mu + static_cast<double>(n) * std::log(src.mu) -
                  std::lgamma(static_cast<double>(n) + 1.0);
    return std::exp(logp);
}

double at_least_one_click(const wcp_source& src, double eta_total) {
    if (!(src.mu > 0.0)) throw std::invalid_argument("at_least_one_click: mu must be > 0");
    if (!(eta_total >= 0.0 && eta_total <= 1.0))
        throw std::invalid_argument("at_least_one_click: eta_total outside [0,1]");
    return -std::expm1(-src.mu * eta_total);
}

double spdc_pair_pmf(const spdc_source& src, std::size_t n) {
    if (!(src.chi >= 0.0)) throw std::invalid_argument("spdc_pair_pmf: chi must be >= 0");
    if (src.chi == 0.0) return n == 0 ? 1.0 : 0.0;
    double c = std::cosh(src.chi);
    double r = std::tanh(src.chi);
    return std::pow(r, 2.0 * static_cast<double>(n)) / (c * c);
}

double spdc_mean_pairs(const spdc_source& src) {
    if (!(src.chi >= 0.0)) throw std::invalid_argument("spdc_mean_pairs: chi must be >= 0");
    double s = std::sinh(src.chi);
    return s * s;
}

std::vector<double> truncated_poisson_pmf(double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("truncated_poisson_pmf: mu must be > 0");
    std::vector<double> pmf;
    double p = std::exp(-mu);
    double mass = p;
    pmf.push_back(p);
    while (mass < k_mass_target && pmf.size() < k_max_terms) {
        p *= mu / static_cast<double>(pmf.size());
        pmf.push_back(p);
        mass += p;
    }
    return pmf;
}

std::vector<double> truncated_spdc_pmf(double chi) {
    if (!(chi >= 0.0)) throw std::invalid_argument("truncated_spdc_pmf: chi must be >= 0");
    if (chi == 0.0) return {1.0};
    double c = std::cosh(chi);
    double r = std::tanh(chi);
    double r2 = r * r;
    std::vector<double> pmf;
    double p = 1.0 / (c * c);
    double mass = p;
    pmf.push_back(p);
    while (mass < k_mass_target && pmf.size() < k_max_terms) {
        p *= r2;
        pmf.push_back(p);
        mass += p;
    }
    return pmf;
}

} // namespace qkdrate

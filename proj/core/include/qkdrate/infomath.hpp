#pragma once

#include <utility>
#include <vector>

namespace qkdrate {

// Error-correction inefficiency f_e(x) >= 1 relative to the Shannon limit.
struct ec_model {
    enum class kind { shannon_limit, constant, cascade_cubic, custom };

    kind which = kind::cascade_cubic;
    double constant_value = 1.33;
    // Sorted (error rate, f_e) knots for the custom piecewise-linear model.
    std::vector<std::pair<double, double>> table;

    static ec_model shannon() { return {kind::shannon_limit, 1.0, {}}; }
    static ec_model constant(double v = 1.33) { return {kind::constant, v, {}}; }
    static ec_model cascade() { return {kind::cascade_cubic, 0.0, {}}; }
    static ec_model custom(std::vector<std::pair<double, double>> knots);
};

struct entropy_args {
    double e_b; // bit error probability
    double e_p; // phase error probability
    double a;   // joint bit-flip-and-phase-shift probability
};

// h2(x) = -x log2 x - (1-x) log2(1-x); endpoints via the 0*log0 = 0
// convention. x outside [0,1] rejected.
double binary_entropy(double x);

// Evaluate f_e at bit error rate x in [0, 0.5].
double ec_cost(const ec_model& model, double x);

// Conditional entropy H(e_p|e_b) of the joint (bit, phase) error
// distribution {1-e_b-e_p+a, e_p-a, e_b-a, a}. Terms with zero mass
// contribute exactly 0; arguments must satisfy
// max(0, e_b+e_p-1) <= a <= min(e_b, e_p).
double conditional_entropy(const entropy_args& args);

// K = Q[1 - h2(e_b)] - Q_mu f_e(E_mu) h2(E_mu). May be negative; callers
// clamp for reporting.
double asymptotic_key_rate(double Q, double e_b, double Q_mu, double E_mu,
                           const ec_model& model);

} // namespace qkdrate

#include "qkdrate/infomath.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkdrate {

ec_model ec_model::custom(std::vector<std::pair<double, double>> knots) {
    if (knots.empty())
        throw std::invalid_argument("ec_model::custom: empty table");
    std::sort(knots.begin(), knots.end());
    for (const auto& [x, fe] : knots) {
        if (x < 0.0 || x > 0.5)
            throw std::invalid_argument("ec_model::custom: knot x outside [0,0.5]");
        if (fe < 1.0)
            throw std::invalid_argument("ec_model::custom: f_e below Shannon limit");
    }
    ec_model m;
    m.which = kind::custom;
    m.table = std::move(knots);
    return m;
}

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("binary_entropy: x outside [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double ec_cost(const ec_model& model, double x) {
    if (!(x >= 0.0 && x <= 0.5))
        throw std::invalid_argument("ec_cost: x outside [0,0.5]");
    switch (model.which) {
    case ec_model::kind::shannon_limit:
        return 1.0;
    case ec_model::kind::constant:
        return model.constant_value;
    case ec_model::kind::cascade_cubic:
        return 1.1581 + 57.200 * x * x * x;
    case ec_model::kind::custom:
        break;
    }
    const auto& t = model.table;
    if (t.empty()) throw std::invalid_argument("ec_cost: empty custom table");
    if (x <= t.front().first) return t.front().second;
    if (x >= t.back().first) return t.back().second;
    auto hi = std::upper_bound(t.begin(), t.end(), std::make_pair(x, 0.0));
    auto lo = hi - 1;
    double w = (x - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

namespace {

// x * log2(x / y) with the limit convention: 0 when x == 0.
inline double xlog_ratio(double x, double y) {
    if (x == 0.0) return 0.0;
    if (y <= 0.0)
        throw std::invalid_argument("conditional_entropy: zero marginal with nonzero joint mass");
    if (x < 0.0)
        throw std::invalid_argument("conditional_entropy: negative joint probability");
    return x * std::log2(x / y);
}

} // namespace

double conditional_entropy(const entropy_args& args) {
    const double eb = args.e_b, ep = args.e_p, a = args.a;
    if (!(eb >= 0.0 && eb <= 1.0))
        throw std::invalid_argument("conditional_entropy: e_b outside [0,1]");
    if (!(ep >= 0.0 && ep <= 1.0))
        throw std::invalid_argument("conditional_entropy: e_p outside [0,1]");
    if (a > std::min(eb, ep))
        throw std::invalid_argument("conditional_entropy: a exceeds min(e_b, e_p)");
    if (a < std::max(0.0, eb + ep - 1.0))
        throw std::invalid_argument("conditional_entropy: a below max(0, e_b+e_p-1)");

    // Joint masses: grouping x1 as (1-e_b) - (e_p-a) keeps the fully
    // correlated case (e_b = e_p = a) at exactly zero.
    const double x2 = ep - a;          // phase flip only
    const double x1 = (1.0 - eb) - x2; // no error
    const double x3 = eb - a;          // bit flip only
    const double x4 = a;               // both

    double h = 0.0;
    h -= xlog_ratio(x1, 1.0 - eb);
    h -= xlog_ratio(x2, 1.0 - eb);
    h -= xlog_ratio(x3, eb);
    h -= xlog_ratio(x4, eb);
    return h;
}

double asymptotic_key_rate(double Q, double e_b, double Q_mu, double E_mu,
                           const ec_model& model) {
    if (!(Q >= 0.0 && Q <= 1.0) || !(Q_mu >= 0.0 && Q_mu <= 1.0))
        throw std::invalid_argument("asymptotic_key_rate: gain outside [0,1]");
    if (!(e_b >= 0.0 && e_b <= 1.0) || !(E_mu >= 0.0 && E_mu <= 1.0))
        throw std::invalid_argument("asymptotic_key_rate: error rate outside [0,1]");
    return Q * (1.0 - binary_entropy(e_b)) -
           Q_mu * ec_cost(model, E_mu) * binary_entropy(E_mu);
}

} // namespace qkdrate

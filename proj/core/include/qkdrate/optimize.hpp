#pragma once

#include <functional>
#include <vector>

namespace qkdrate {

struct interval {
    double lo;
    double hi;
};

struct optimize_directive {
    interval bounds{1e-6, 2.0};
    double tolerance = 1e-7; // absolute argument tolerance
    int max_evals = 500;     // objective evaluation budget
    // Evaluated up front alongside the pre-scan grid; the returned point is
    // never worse than any seed. Used by sweeps to warm-start from the
    // fixed parameter value so an optimized run dominates a fixed run.
    std::vector<double> seeds;
};

struct scalar_max_result {
    double arg = 0.0;
    double value = 0.0;
    int evals = 0;
    bool budget_exhausted = false;
};

struct bivariate_max_result {
    double arg_x = 0.0;
    double arg_y = 0.0;
    double value = 0.0;
    int evals = 0;
    bool budget_exhausted = false;
    bool used_simplex_fallback = false;
};

// Golden-section maximization with a 32-point pre-scan bracket and a final
// parabolic refinement. Returns the best point among everything evaluated;
// exact ties prefer the smaller argument. NaN objective values are treated
// as -inf. Deterministic for identical inputs.
scalar_max_result maximize_scalar(const std::function<double(double)>& f,
                                  const optimize_directive& directive);

// Coordinate descent over maximize_scalar with a deterministic Nelder-Mead
// fallback when the coordinate passes cycle without converging.
bivariate_max_result maximize_bivariate(
    const std::function<double(double, double)>& f,
    const optimize_directive& x_directive, const optimize_directive& y_directive);

} // namespace qkdrate

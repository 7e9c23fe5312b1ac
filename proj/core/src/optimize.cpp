#include "qkdrate/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qkdrate {

namespace {

constexpr double k_neg_inf = -std::numeric_limits<double>::infinity();
const double k_invphi = (std::sqrt(5.0) - 1.0) / 2.0; // 0.618...

void validate(const optimize_directive& d, const char* who) {
    if (!(d.bounds.lo < d.bounds.hi))
        throw std::invalid_argument(std::string(who) + ": bounds must satisfy lo < hi");
    if (!(d.tolerance > 0.0))
        throw std::invalid_argument(std::string(who) + ": tolerance must be > 0");
    if (d.max_evals < 8)
        throw std::invalid_argument(std::string(who) + ": max_evals too small");
}

// Budget-tracking wrapper; keeps the best point ever seen (ties prefer the
// smaller argument) so the result is never worse than any evaluated seed.
struct tracked_objective {
    const std::function<double(double)>& f;
    int budget;
    int evals = 0;
    bool exhausted = false;
    double best_arg = std::numeric_limits<double>::quiet_NaN();
    double best_val = k_neg_inf;

    bool can_eval() {
        if (evals >= budget) { exhausted = true; return false; }
        return true;
    }
    double eval(double x) {
        ++evals;
        double v = f(x);
        if (std::isnan(v)) v = k_neg_inf;
        if (v > best_val || (v == best_val && (std::isnan(best_arg) || x < best_arg))) {
            best_val = v;
            best_arg = x;
        }
        return v;
    }
};

} // namespace

scalar_max_result maximize_scalar(const std::function<double(double)>& f,
                                  const optimize_directive& directive) {
    validate(directive, "maximize_scalar");
    const double lo = directive.bounds.lo, hi = directive.bounds.hi;
    const double tol = directive.tolerance;
    tracked_objective obj{f, directive.max_evals};

    for (double s : directive.seeds)
        if (obj.can_eval()) obj.eval(std::clamp(s, lo, hi));

    // Coarse pre-scan picks the starting bracket; clamped rates produce flat
    // zero plateaus at long distance, so a plain bracket search can stall.
    constexpr int k_scan = 32;
    double scan_val[k_scan];
    int best_i = 0;
    for (int i = 0; i < k_scan; ++i) {
        double x = lo + (hi - lo) * static_cast<double>(i) / (k_scan - 1);
        scan_val[i] = obj.can_eval() ? obj.eval(x) : k_neg_inf;
        if (scan_val[i] > scan_val[best_i]) best_i = i;
    }

    double a = lo + (hi - lo) * static_cast<double>(std::max(0, best_i - 1)) / (k_scan - 1);
    double b = lo + (hi - lo) * static_cast<double>(std::min(k_scan - 1, best_i + 1)) / (k_scan - 1);

    // Golden-section: one evaluation per iteration, bracket shrinks by the
    // golden ratio each time.
    double c = b - k_invphi * (b - a);
    double d = a + k_invphi * (b - a);
    double fc = obj.can_eval() ? obj.eval(c) : k_neg_inf;
    double fd = obj.can_eval() ? obj.eval(d) : k_neg_inf;
    double prev_c = c, prev_fc = fc; // most recently discarded interior point
    while (b - a > tol && obj.can_eval()) {
        if (fc >= fd) {
            prev_c = d; prev_fc = fd;
            b = d;
            d = c; fd = fc;
            c = b - k_invphi * (b - a);
            fc = obj.eval(c);
        } else {
            prev_c = c; prev_fc = fc;
            a = c;
            c = d; fc = fd;
            d = a + k_invphi * (b - a);
            fd = obj.eval(d);
        }
    }

    // One parabolic (Brent-style) refinement through the three most recent
    // interior points; cheap and occasionally shaves the last bracket error.
    {
        double x1 = c, f1 = fc, x2 = d, f2 = fd, x3 = prev_c, f3 = prev_fc;
        double d21 = x2 - x1, d23 = x2 - x3;
        double num = d21 * d21 * (f2 - f3) - d23 * d23 * (f2 - f1);
        double den = d21 * (f2 - f3) - d23 * (f2 - f1);
        if (std::isfinite(num) && std::isfinite(den) && std::abs(den) > 1e-300) {
            double xv = x2 - 0.5 * num / den;
            if (xv > lo && xv < hi && std::isfinite(xv) && obj.can_eval())
                obj.eval(xv);
        }
    }

    scalar_max_result r;
    r.arg = obj.best_arg;
    r.value = obj.best_val;
    r.evals = obj.evals;
    r.budget_exhausted = obj.exhausted;
    return r;
}

bivariate_max_result maximize_bivariate(
    const std::function<double(double, double)>& f,
    const optimize_directive& x_directive, const optimize_directive& y_directive) {
    validate(x_directive, "maximize_bivariate");
    validate(y_directive, "maximize_bivariate");

    const interval bx = x_directive.bounds, by = y_directive.bounds;
    double x = !x_directive.seeds.empty()
                   ? std::clamp(x_directive.seeds.front(), bx.lo, bx.hi)
                   : 0.5 * (bx.lo + bx.hi);
    double y = !y_directive.seeds.empty()
                   ? std::clamp(y_directive.seeds.front(), by.lo, by.hi)
                   : 0.5 * (by.lo + by.hi);

    bivariate_max_result r;
    r.value = k_neg_inf;
    auto note = [&](double px, double py, double v) {
        if (std::isnan(v)) v = k_neg_inf;
        if (v > r.value ||
            (v == r.value && (px < r.arg_x || (px == r.arg_x && py < r.arg_y)))) {
            r.value = v;
            r.arg_x = px;
            r.arg_y = py;
        }
        return v;
    };

    note(x, y, f(x, y));
    ++r.evals;

    constexpr int k_max_passes = 8;
    double prev_val = r.value;
    bool converged = false;
    for (int pass = 0; pass < k_max_passes && !converged; ++pass) {
        double x_before = x, y_before = y;

        optimize_directive dx = x_directive;
        dx.seeds.push_back(x);
        auto rx = maximize_scalar([&](double t) { return f(t, y); }, dx);
        r.evals += rx.evals;
        r.budget_exhausted |= rx.budget_exhausted;
        x = rx.arg;
        note(x, y, rx.value);

        optimize_directive dy = y_directive;
        dy.seeds.push_back(y);
        auto ry = maximize_scalar([&](double t) { return f(x, t); }, dy);
        r.evals += ry.evals;
        r.budget_exhausted |= ry.budget_exhausted;
        y = ry.arg;
        note(x, y, ry.value);

        double improvement = r.value - prev_val;
        prev_val = r.value;
        bool small_move = std::abs(x - x_before) <= x_directive.tolerance &&
                          std::abs(y - y_before) <= y_directive.tolerance;
        bool flat = improvement <= 1e-15 * (1.0 + std::abs(r.value));
        converged = small_move || flat;
    }

    if (!converged) {
        // Coordinate passes are cycling (typically a ridge not aligned with
        // either axis); fall back to a deterministic Nelder-Mead.
        r.used_simplex_fallback = true;
        struct vertex { double x, y, v; };
        auto eval = [&](double px, double py) {
            px = std::clamp(px, bx.lo, bx.hi);
            py = std::clamp(py, by.lo, by.hi);
            double v = f(px, py);
            ++r.evals;
            return vertex{px, py, note(px, py, v)};
        };
        double hx = 0.1 * (bx.hi - bx.lo), hy = 0.1 * (by.hi - by.lo);
        vertex s[3] = {eval(r.arg_x, r.arg_y),
                       eval(r.arg_x + (r.arg_x + hx <= bx.hi ? hx : -hx), r.arg_y),
                       eval(r.arg_x, r.arg_y + (r.arg_y + hy <= by.hi ? hy : -hy))};
        const int budget = x_directive.max_evals + y_directive.max_evals;
        for (int it = 0; it < 200 && r.evals < budget; ++it) {
            std::sort(std::begin(s), std::end(s),
                      [](const vertex& p, const vertex& q) { return p.v > q.v; });
            double diam = std::max(std::abs(s[0].x - s[2].x) + std::abs(s[0].y - s[2].y),
                                   std::abs(s[0].x - s[1].x) + std::abs(s[0].y - s[1].y));
            if (diam < std::min(x_directive.tolerance, y_directive.tolerance)) break;
            double cx = 0.5 * (s[0].x + s[1].x), cy = 0.5 * (s[0].y + s[1].y);
            vertex refl = eval(cx + (cx - s[2].x), cy + (cy - s[2].y));
            if (refl.v > s[0].v) {
                vertex exp_ = eval(cx + 2.0 * (cx - s[2].x), cy + 2.0 * (cy - s[2].y));
                s[2] = exp_.v > refl.v ? exp_ : refl;
            } else if (refl.v > s[1].v) {
                s[2] = refl;
            } else {
                vertex con = eval(cx + 0.5 * (s[2].x - cx), cy + 0.5 * (s[2].y - cy));
                if (con.v > s[2].v) {
                    s[2] = con;
                } else {
                    s[1] = eval(s[0].x + 0.5 * (s[1].x - s[0].x),
                                s[0].y + 0.5 * (s[1].y - s[0].y));
                    s[2] = eval(s[0].x + 0.5 * (s[2].x - s[0].x),
                                s[0].y + 0.5 * (s[2].y - s[0].y));
                }
            }
        }
    }

    return r;
}

} // namespace qkdrate

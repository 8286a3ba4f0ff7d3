#include "rabi/gfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rabi {

namespace {

// Denominator x - n omega + sign * epsilon shared by f_n and the R̄ terms.
inline double pole_denom(const ModelParams& p, int sign, int n, double x) {
    return x - n * p.omega + sign * p.epsilon;
}

inline void check_sign(int sign) {
    if (sign != 1 && sign != -1) throw InvalidParams("sign must be +1 or -1");
}

}  // namespace

double f_coeff(const ModelParams& params, int sign, int n, double x, double pole_guard) {
    check_sign(sign);
    if (params.g == 0.0)
        throw DegenerateCoupling("f_coeff: g = 0 has no series representation");
    const double denom = pole_denom(params, sign, n, x);
    if (std::abs(denom) < pole_guard * params.omega)
        throw PoleProximity("f_coeff: x within pole guard of n*omega -/+ epsilon, n=" +
                            std::to_string(n));
    const double d2 = params.delta * params.delta;
    return 2.0 * params.g / params.omega +
           (n * params.omega - x + sign * params.epsilon + d2 / denom) / (2.0 * params.g);
}

namespace {

// Runs the K recurrence for one sign family, accumulating R and R̄ and
// applying the truncation criterion to both weightings. Optionally records
// the coefficients themselves.
SeriesSums run_series(const ModelParams& params, int sign, double x, const SeriesConfig& cfg,
                      std::vector<double>* coeffs) {
    check_sign(sign);
    cfg.validate();
    if (params.g == 0.0)
        throw DegenerateCoupling("series: g = 0 has no series representation");

    const double t = params.g / params.omega;
    SeriesSums out;

    double k_prev2 = 0.0;  // K_{n-2}
    double k_prev = 1.0;   // K_{n-1}, starts as K_0
    double t_pow = 1.0;
    double runmax_r = 0.0;
    double runmax_rbar = 0.0;
    int small_streak = 0;

    for (int n = 0; n < cfg.max_terms; ++n) {
        const double kn = k_prev;  // K_n
        const double denom = pole_denom(params, sign, n, x);
        if (std::abs(denom) < cfg.pole_guard * params.omega)
            throw PoleProximity("series: x within pole guard, n=" + std::to_string(n));
        if (coeffs) coeffs->push_back(kn);

        const double term_r = kn * t_pow;
        const double term_rbar = term_r / denom;
        out.r += term_r;
        out.r_bar += term_rbar;
        out.terms = n + 1;
        runmax_r = std::max(runmax_r, std::abs(out.r));
        runmax_rbar = std::max(runmax_rbar, std::abs(out.r_bar));

        const bool small = std::abs(term_r) <= cfg.rel_tol * runmax_r &&
                           std::abs(term_rbar) <= cfg.rel_tol * runmax_rbar;
        small_streak = small ? small_streak + 1 : 0;
        if (small_streak >= cfg.consecutive_small) {
            out.converged = true;
            return out;
        }

        // advance K_{n} -> K_{n+1}: (n+1) K_{n+1} = f_n K_n - K_{n-1}
        const double f_n = f_coeff(params, sign, n, x, cfg.pole_guard);
        const double k_next = (f_n * kn - k_prev2) / (n + 1);
        k_prev2 = kn;
        k_prev = k_next;
        t_pow *= t;
    }
    throw NonConvergence("series: truncation criterion not met within max_terms");
}

}  // namespace

std::vector<double> k_coefficients(const ModelParams& params, int sign, double x,
                                   const SeriesConfig& cfg) {
    std::vector<double> coeffs;
    run_series(params, sign, x, cfg, &coeffs);
    return coeffs;
}

SeriesSums series_sums(const ModelParams& params, int sign, double x, const SeriesConfig& cfg) {
    return run_series(params, sign, x, cfg, nullptr);
}

GEvaluation evaluate_G(const ModelParams& params, double x, const SeriesConfig& cfg) {
    params.validate();
    const SeriesSums plus = series_sums(params, +1, x, cfg);
    const SeriesSums minus = series_sums(params, -1, x, cfg);

    GEvaluation ev;
    ev.x = x;
    // grouping keeps the value exactly invariant under the ε ↔ -ε family swap
    ev.value = params.delta * params.delta * (plus.r_bar * minus.r_bar) - plus.r * minus.r;
    ev.terms_used_plus = plus.terms;
    ev.terms_used_minus = minus.terms;
    ev.converged = plus.converged && minus.converged;

    double nearest = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= cfg.max_terms; ++n)
        for (int sign : {+1, -1})
            nearest = std::min(nearest, std::abs(pole_denom(params, sign, n, x)));
    ev.nearest_pole_distance = nearest;
    return ev;
}

std::vector<double> pole_positions(const ModelParams& params, double x_max) {
    return pole_positions(params, default_x_min(params), x_max);
}

std::vector<double> pole_positions(const ModelParams& params, double x_min, double x_max) {
    params.validate();
    if (!std::isfinite(x_max) || !std::isfinite(x_min))
        throw InvalidParams("pole_positions: bounds must be finite");

    std::vector<double> poles;
    for (double eps : {params.epsilon, -params.epsilon}) {
        // n omega - eps in [x_min, x_max]
        const int n_lo = static_cast<int>(std::ceil((x_min + eps) / params.omega - 1e-12));
        const int n_hi = static_cast<int>(std::floor((x_max + eps) / params.omega + 1e-12));
        for (int n = std::max(0, n_lo); n <= n_hi; ++n) {
            const double p = n * params.omega - eps;
            if (p >= x_min - 1e-12 * params.omega && p <= x_max + 1e-12 * params.omega)
                poles.push_back(p);
        }
    }
    std::sort(poles.begin(), poles.end());
    const double coincide_tol = 1e-12 * params.omega;
    std::vector<double> dedup;
    for (double p : poles)
        if (dedup.empty() || p - dedup.back() > coincide_tol) dedup.push_back(p);
    return dedup;
}

}  // namespace rabi

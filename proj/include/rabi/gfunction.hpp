// gfunction.hpp — series coefficients and the transcendental G-function
//
// The spectrum of the driven Rabi model is encoded in
//   G(x) = Δ² R̄⁺(x) R̄⁻(x) − R⁺(x) R⁻(x),
// where R± and R̄± are power series in g/omega whose coefficients K_n±
// obey a three-term recurrence. Eigenvalues are E_N = x_N − g²/omega with
// x_N the zeros of G. The R̄ series carry simple poles at x = n omega ∓ ε;
// evaluation inside a guard radius of any pole is rejected.

#pragma once

#include <vector>

#include "rabi/params.hpp"

namespace rabi {

// Value of G at a point x plus numerical diagnostics.
struct GEvaluation {
    double x{0.0};
    double value{0.0};
    int terms_used_plus{0};
    int terms_used_minus{0};
    double nearest_pole_distance{0.0};
    bool converged{false};
};

// Partial sums of one sign family, as used inside evaluate_G.
struct SeriesSums {
    double r{0.0};      // R±(x)
    double r_bar{0.0};  // R̄±(x)
    int terms{0};
    bool converged{false};
};

// f_n±(x) of the K recurrence; sign = +1 or -1 selects the series family.
double f_coeff(const ModelParams& params, int sign, int n, double x,
               double pole_guard = SeriesConfig{}.pole_guard);

// K_0±, K_1±, ... truncated by the weighted-term criterion.
std::vector<double> k_coefficients(const ModelParams& params, int sign, double x,
                                   const SeriesConfig& cfg = {});

// R± and R̄± for one sign family, truncated together.
SeriesSums series_sums(const ModelParams& params, int sign, double x,
                       const SeriesConfig& cfg = {});

// G(x) with diagnostics.
GEvaluation evaluate_G(const ModelParams& params, double x, const SeriesConfig& cfg = {});

// Default lower edge of the spectral scan window; keeps the ground state
// (which can sit below 0) inside every scan.
inline double default_x_min(const ModelParams& params) {
    return -std::abs(params.epsilon) - params.delta - params.omega;
}

// All R̄ pole locations n omega ± ε inside [default_x_min, x_max], sorted
// ascending and deduplicated (coincidences occur when ε is a multiple of ω/2).
std::vector<double> pole_positions(const ModelParams& params, double x_max);
std::vector<double> pole_positions(const ModelParams& params, double x_min, double x_max);

}  // namespace rabi

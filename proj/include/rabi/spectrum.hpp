// spectrum.hpp — zeros of G, energies E_N = x_N - g²/omega, level ordering
// and crossing-count laws.

#pragma once

#include <utility>
#include <vector>

#include "rabi/gfunction.hpp"
#include "rabi/params.hpp"

namespace rabi {

enum class LevelSource { g_function, closed_form_g0 };

struct EnergyLevel {
    int index{0};       // ascending-energy position, 0-based
    double energy{0.0};  // E_N
    double root_x{0.0};  // x_N (equals energy when g = 0)
    LevelSource source{LevelSource::g_function};
};

struct SolverMeta {
    double xtol{0.0};
    double scan_step{0.0};
    SeriesConfig series;
};

struct Spectrum {
    ModelParams params;
    std::vector<EnergyLevel> levels;  // ascending by energy
    std::pair<double, double> scan_window{0.0, 0.0};
    SolverMeta solver_meta;
};

using Bracket = std::pair<double, double>;

// Lowest `count` energies at g = 0: E = N omega ± sqrt(Δ² + ε²).
Spectrum closed_form_g0(const ModelParams& params, int count);

// Sign-change brackets of G inside [x_lo, x_hi]. Brackets are strictly inside
// pole-free intervals and never straddle a pole. step must be <= omega/4.
std::vector<Bracket> scan_roots(const ModelParams& params, double x_lo, double x_hi,
                                const SeriesConfig& cfg = {}, double step = 0.125);

// Brent refinement of a sign-change bracket; bisection fallback guarantees
// convergence to bracket width <= xtol.
double refine_root(const ModelParams& params, Bracket bracket, const SeriesConfig& cfg = {},
                   double xtol = 1e-12);

// Lowest `count` levels; g = 0 delegates to the closed form, otherwise the
// scan window auto-expands upward until `count` roots are found.
Spectrum compute_spectrum(const ModelParams& params, int count, const SeriesConfig& cfg = {});

// Number of level crossings on sheet N: N - k, where k is the band index of
// sqrt(k² + 2k|ε|/ω) < Δ/ω < sqrt((k+1)² + 2(k+1)|ε|/ω). Zero if k >= N.
int count_crossings(double delta, double omega, double epsilon, int N);

}  // namespace rabi

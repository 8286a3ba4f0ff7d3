// landscape.hpp — (g, ε) energy-surface sweeps, conical-intersection search
// and off-plane gap floors.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rabi/params.hpp"
#include "rabi/spectrum.hpp"

namespace rabi {

// Rectangular (g, ε) grid holding the lowest L energy sheets per node,
// stored g-major then ε then sheet.
struct LandscapeGrid {
    double omega{1.0};
    double delta{0.0};
    std::vector<double> g_axis;    // ascending, >= 0
    std::vector<double> eps_axis;  // ascending
    int L{1};
    bool shifted{false};  // stored values are E + g²/omega when set
    std::vector<double> sheets;
    std::vector<std::uint8_t> error_mask;  // per node, nonzero if the solver failed
    SolverMeta solver_meta;

    std::size_t node(std::size_t gi, std::size_t ei) const {
        return gi * eps_axis.size() + ei;
    }
    double& sheet(std::size_t gi, std::size_t ei, int l) {
        return sheets[node(gi, ei) * L + l];
    }
    double sheet(std::size_t gi, std::size_t ei, int l) const {
        return sheets[node(gi, ei) * L + l];
    }
};

// A degenerate Juddian point: the tip of a cone in the plane ε = plane_n ω/2.
struct ConicalPoint {
    int plane_n{0};      // sign included
    double g_star{0.0};
    double energy{0.0};  // E*
    int sheet_n1{0};     // N1 - N2 = |plane_n|
    int sheet_n2{0};
    double gap_residual{0.0};

    double nbar() const { return 0.5 * (sheet_n1 + sheet_n2); }
    // integer sheet label carrying the crossing count; equals N̄ in the ε=0
    // plane and N2 in general (the baseline with label N holds N - k cones)
    int sheet_label() const { return sheet_n2; }
};

struct ConeSearchConfig {
    double degeneracy_tol{1e-8};
    double baseline_tol{1e-6};
    double g_tol{1e-10};      // refinement tolerance in g
    double g_scan_step{0.01};
};

struct ConeSearchResult {
    std::vector<ConicalPoint> cones;
    std::vector<ConicalPoint> anomalies;  // passed the gap test, failed the baseline test
};

// Spectrum at every grid node; g = 0 columns use the closed form.
LandscapeGrid sweep(const ModelParams& params_template, std::vector<double> g_axis,
                    std::vector<double> eps_axis, int L, bool shifted,
                    const SeriesConfig& cfg = {}, int threads = 1);

// Gap between the two G-roots adjacent to the fixed pole x_c (tracked with a
// tiny guard so the gap resolves below the default pole guard). Infinity when
// a flanking root is missing.
double pole_adjacent_gap(const ModelParams& params, double x_c, const SeriesConfig& cfg = {});

// Degeneracy search in the plane ε = plane_n ω/2 over g ∈ (0, g_max].
ConeSearchResult find_cones(const ModelParams& params_template, int plane_n, double g_max,
                            int sheet_max, const SeriesConfig& cfg = {},
                            const ConeSearchConfig& cone_cfg = {});

// Minimum adjacent gap among the lowest `levels` levels over g ∈ (0, g_max],
// one value per ε offset. In-plane offsets resolve through the pole-adjacent
// gap tracker; off-plane offsets stay bounded away from zero.
std::vector<double> off_plane_gap_floor(const ModelParams& params_template,
                                        const std::vector<double>& eps_offsets, double g_max,
                                        const SeriesConfig& cfg = {}, int levels = 4);

}  // namespace rabi

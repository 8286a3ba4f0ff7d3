#include "rabi/landscape.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "rabi/detail/minimize.hpp"

namespace rabi {

LandscapeGrid sweep(const ModelParams& params_template, std::vector<double> g_axis,
                    std::vector<double> eps_axis, int L, bool shifted, const SeriesConfig& cfg,
                    int threads) {
    if (g_axis.empty() || eps_axis.empty())
        throw InvalidParams("sweep: axes must be nonempty");
    if (!std::is_sorted(g_axis.begin(), g_axis.end()) ||
        !std::is_sorted(eps_axis.begin(), eps_axis.end()))
        throw InvalidParams("sweep: axes must be ascending");
    if (g_axis.front() < 0.0) throw InvalidParams("sweep: g axis must be >= 0");
    if (L < 1) throw InvalidParams("sweep: L must be >= 1");

    LandscapeGrid grid;
    grid.omega = params_template.omega;
    grid.delta = params_template.delta;
    grid.g_axis = std::move(g_axis);
    grid.eps_axis = std::move(eps_axis);
    grid.L = L;
    grid.shifted = shifted;
    const std::size_t nodes = grid.g_axis.size() * grid.eps_axis.size();
    grid.sheets.assign(nodes * L, std::numeric_limits<double>::quiet_NaN());
    grid.error_mask.assign(nodes, 0);
    grid.solver_meta = {1e-12 * grid.omega, grid.omega / 8.0, cfg};

    auto solve_node = [&](std::size_t flat) {
        const std::size_t gi = flat / grid.eps_axis.size();
        const std::size_t ei = flat % grid.eps_axis.size();
        ModelParams p = params_template;
        p.g = grid.g_axis[gi];
        p.epsilon = grid.eps_axis[ei];
        try {
            const Spectrum s = compute_spectrum(p, L, cfg);
            const double shift = shifted ? p.g * p.g / p.omega : 0.0;
            for (int l = 0; l < L; ++l)
                grid.sheets[flat * L + l] = s.levels[l].energy + shift;
        } catch (const SolverError&) {
            grid.error_mask[flat] = 1;
        }
    };

    if (threads <= 1) {
        for (std::size_t i = 0; i < nodes; ++i) solve_node(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&]() {
                for (std::size_t i = next++; i < nodes; i = next++) solve_node(i);
            });
        for (auto& th : pool) th.join();
    }
    return grid;
}

namespace {

// Nearest G-root strictly on one side of the pole x_c; side = -1 searches
// below, +1 above. The sampling ladder starts a hair off the pole so roots
// squeezed against it (arbitrarily close near a Juddian point) are found.
std::optional<double> root_beside_pole(const ModelParams& params, double x_c, int side,
                                       const SeriesConfig& cfg) {
    const double w = params.omega;
    const SeriesConfig tiny = cfg.with_pole_guard(1e-13);

    // stop at the neighbouring pole (in-plane spacing is omega)
    double limit = x_c + side * 0.999 * w;
    std::vector<double> xs;
    for (double d = 2e-13 * w; d < 0.05 * w; d *= 4.0) xs.push_back(x_c + side * d);
    for (double d = 0.05 * w; side * (x_c + side * d) < side * limit; d += w / 16.0)
        xs.push_back(x_c + side * d);

    auto G = [&](double x) { return evaluate_G(params, x, tiny).value; };
    double x_prev = 0.0, f_prev = 0.0;
    bool have_prev = false;
    for (double x : xs) {
        double f;
        try {
            f = G(x);
        } catch (const SolverError&) {
            continue;
        }
        if (have_prev && (f < 0.0) != (f_prev < 0.0)) {
            const Bracket br = side < 0 ? Bracket{x, x_prev} : Bracket{x_prev, x};
            return refine_root(params, br, tiny, 1e-13 * w);
        }
        x_prev = x;
        f_prev = f;
        have_prev = true;
    }
    return std::nullopt;
}

}  // namespace

double pole_adjacent_gap(const ModelParams& params, double x_c, const SeriesConfig& cfg) {
    const auto left = root_beside_pole(params, x_c, -1, cfg);
    const auto right = root_beside_pole(params, x_c, +1, cfg);
    if (!left || !right) return std::numeric_limits<double>::infinity();
    return *right - *left;
}

ConeSearchResult find_cones(const ModelParams& params_template, int plane_n, double g_max,
                            int sheet_max, const SeriesConfig& cfg,
                            const ConeSearchConfig& cone_cfg) {
    if (!(g_max > 0.0)) throw InvalidParams("find_cones: g_max must be > 0");
    if (sheet_max < 1) throw InvalidParams("find_cones: sheet_max must be >= 1");

    const int n_abs = std::abs(plane_n);
    const double w = params_template.omega;
    ModelParams base = params_template;
    base.epsilon = n_abs * w / 2.0;  // negative planes follow by ε-reflection

    ConeSearchResult result;

    // candidate baselines: N2 = 1, ..., sheet_max with N1 = N2 + n; the tip
    // pole sits at x = N̄ω (a coincident pole pair of the two sign families)
    for (int n2 = 1; n2 <= sheet_max; ++n2) {
        const int n1 = n2 + n_abs;
        const double x_c = 0.5 * (n1 + n2) * w;
        if (x_c <= 0.0) continue;

        auto gap = [&](double g) { return pole_adjacent_gap(base.with_g(g), x_c, cfg); };

        const double step = cone_cfg.g_scan_step;
        std::vector<double> gs, gaps;
        for (double g = step; g <= g_max + 1e-12; g += step) {
            gs.push_back(std::min(g, g_max));
            gaps.push_back(gap(gs.back()));
        }

        std::vector<double> seeds;
        for (std::size_t i = 0; i < gs.size(); ++i) {
            const double prev = i > 0 ? gaps[i - 1] : std::numeric_limits<double>::infinity();
            const double next =
                i + 1 < gs.size() ? gaps[i + 1] : std::numeric_limits<double>::infinity();
            if (std::isfinite(gaps[i]) && gaps[i] < prev && gaps[i] <= next)
                seeds.push_back(gs[i]);
        }

        for (double seed : seeds) {
            const double a = std::max(seed - step, step / 2.0);
            const double b = std::min(seed + step, g_max);
            auto [g_star, min_gap] = detail::golden_min(gap, a, b, cone_cfg.g_tol);
            if (min_gap > cone_cfg.degeneracy_tol) continue;

            const auto left = root_beside_pole(base.with_g(g_star), x_c, -1, cfg);
            const auto right = root_beside_pole(base.with_g(g_star), x_c, +1, cfg);
            if (!left || !right) continue;
            const double x_star = 0.5 * (*left + *right);
            const double e_star = x_star - g_star * g_star / w;

            ConicalPoint cone{plane_n, g_star, e_star, n1, n2, min_gap};
            const double baseline = cone.nbar() * w - g_star * g_star / w;
            const bool duplicate =
                std::any_of(result.cones.begin(), result.cones.end(), [&](const auto& c) {
                    return c.sheet_n1 == n1 && c.sheet_n2 == n2 &&
                           std::abs(c.g_star - g_star) < 1e-6;
                });
            if (duplicate) continue;
            if (std::abs(e_star - baseline) <= cone_cfg.baseline_tol)
                result.cones.push_back(cone);
            else
                result.anomalies.push_back(cone);
        }
    }

    std::sort(result.cones.begin(), result.cones.end(), [](const auto& a, const auto& b) {
        return a.nbar() != b.nbar() ? a.nbar() < b.nbar() : a.g_star < b.g_star;
    });
    return result;
}

std::vector<double> off_plane_gap_floor(const ModelParams& params_template,
                                        const std::vector<double>& eps_offsets, double g_max,
                                        const SeriesConfig& cfg, int levels) {
    if (levels < 2) throw InvalidParams("off_plane_gap_floor: levels must be >= 2");
    const double w = params_template.omega;

    std::vector<double> floors;
    for (double eps : eps_offsets) {
        ModelParams base = params_template;
        base.epsilon = eps;

        auto spectrum_gap = [&](double g) {
            const Spectrum s = compute_spectrum(base.with_g(g), levels, cfg);
            double m = std::numeric_limits<double>::infinity();
            for (int i = 0; i + 1 < levels; ++i)
                m = std::min(m, s.levels[i + 1].energy - s.levels[i].energy);
            return m;
        };

        const double step = 0.02 * std::max(g_max, 1.0);
        double floor = std::numeric_limits<double>::infinity();
        std::vector<double> gs, gaps;
        for (double g = step; g <= g_max + 1e-12; g += step) {
            gs.push_back(std::min(g, g_max));
            try {
                gaps.push_back(spectrum_gap(gs.back()));
            } catch (const SolverError&) {
                gaps.push_back(std::numeric_limits<double>::infinity());
            }
            floor = std::min(floor, gaps.back());
        }
        for (std::size_t i = 1; i + 1 < gs.size(); ++i) {
            if (gaps[i] < gaps[i - 1] && gaps[i] <= gaps[i + 1]) {
                auto [gm, fm] = detail::golden_min(spectrum_gap, gs[i - 1], gs[i + 1], 1e-6);
                floor = std::min(floor, fm);
            }
        }

        // in-plane offsets: resolve the dip through the pole-adjacent tracker,
        // which sees gaps far below the pole guard
        const double plane_dist = std::abs(eps / (w / 2.0) - std::round(eps / (w / 2.0)));
        if (plane_dist < 1e-9) {
            const int plane_n = static_cast<int>(std::round(eps / (w / 2.0)));
            const auto found = find_cones(params_template, plane_n, g_max, levels, cfg);
            for (const auto& c : found.cones) floor = std::min(floor, c.gap_residual);
            for (const auto& c : found.anomalies) floor = std::min(floor, c.gap_residual);
        }
        floors.push_back(floor);
    }
    return floors;
}

}  // namespace rabi

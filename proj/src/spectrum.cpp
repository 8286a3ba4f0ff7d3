#include "rabi/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "rabi/detail/minimize.hpp"

namespace rabi {

Spectrum closed_form_g0(const ModelParams& params, int count) {
    params.validate();
    if (params.g != 0.0) throw InvalidParams("closed_form_g0: requires g = 0");
    if (count < 1) throw InvalidParams("closed_form_g0: count must be >= 1");

    const double r = std::hypot(params.delta, params.epsilon);
    const int n_max = count + static_cast<int>(std::ceil(r / params.omega)) + 2;
    std::vector<double> energies;
    for (int n = 0; n <= n_max; ++n) {
        energies.push_back(n * params.omega - r);
        energies.push_back(n * params.omega + r);
    }
    std::sort(energies.begin(), energies.end());
    energies.resize(count);

    Spectrum s;
    s.params = params;
    s.scan_window = {energies.front(), energies.back()};
    for (int i = 0; i < count; ++i)
        s.levels.push_back({i, energies[i], energies[i], LevelSource::closed_form_g0});
    return s;
}

namespace {

struct IntervalSamples {
    double lo, hi;  // open pole-free interval boundaries (clipped to the window)
    std::vector<std::pair<double, double>> pts;  // (x, G(x)), ascending in x
};

// Sample G over each pole-free interval of [x_lo, x_hi]. Near pole edges the
// sampling ladder is geometric so roots pushed against a pole are still seen.
std::vector<IntervalSamples> sample_intervals(const ModelParams& params, double x_lo,
                                              double x_hi, const SeriesConfig& cfg,
                                              double step) {
    const double w = params.omega;
    const double edge = std::max(2.0 * cfg.pole_guard, 1e-13) * w;
    std::vector<double> poles = pole_positions(params, x_lo - w, x_hi + w);

    std::vector<double> cuts;
    cuts.push_back(x_lo);
    for (double p : poles)
        if (p > x_lo && p < x_hi) cuts.push_back(p);
    cuts.push_back(x_hi);

    auto is_pole = [&](double x) {
        for (double p : poles)
            if (std::abs(x - p) < 1e-11 * w) return true;
        return false;
    };

    std::vector<IntervalSamples> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        const bool a_pole = is_pole(a);
        const bool b_pole = is_pole(b);
        double lo = a_pole ? a + edge : a;
        double hi = b_pole ? b - edge : b;
        if (hi <= lo) continue;

        std::vector<double> xs;
        xs.push_back(lo);
        if (a_pole)
            for (double d = edge * 10.0; d < 0.05 * w && a + d < hi; d *= 10.0)
                xs.push_back(a + d);
        for (double x = std::ceil(lo / step) * step; x < hi; x += step)
            if (x > lo && x < hi) xs.push_back(x);
        if (b_pole)
            for (double d = edge * 10.0; d < 0.05 * w && b - d > lo; d *= 10.0)
                xs.push_back(b - d);
        xs.push_back(hi);
        std::sort(xs.begin(), xs.end());

        IntervalSamples iv{lo, hi, {}};
        for (double x : xs) {
            try {
                iv.pts.emplace_back(x, evaluate_G(params, x, cfg).value);
            } catch (const PoleProximity&) {
            } catch (const NonConvergence&) {
            }
        }
        if (!iv.pts.empty()) out.push_back(std::move(iv));
    }
    return out;
}

std::vector<Bracket> brackets_from_samples(const std::vector<IntervalSamples>& intervals) {
    std::vector<Bracket> brackets;
    for (const auto& iv : intervals)
        for (std::size_t i = 0; i + 1 < iv.pts.size(); ++i) {
            const auto& [xa, fa] = iv.pts[i];
            const auto& [xb, fb] = iv.pts[i + 1];
            if (fa == 0.0) continue;
            if ((fa < 0.0) != (fb < 0.0) || fb == 0.0) brackets.emplace_back(xa, xb);
        }
    return brackets;
}

}  // namespace

std::vector<Bracket> scan_roots(const ModelParams& params, double x_lo, double x_hi,
                                const SeriesConfig& cfg, double step) {
    params.validate();
    cfg.validate();
    if (params.g == 0.0) throw DegenerateCoupling("scan_roots: g = 0 has no G-function");
    if (!(x_lo < x_hi)) throw InvalidParams("scan_roots: x_lo must be < x_hi");
    if (!(step > 0.0) || step > params.omega / 4.0)
        throw InvalidParams("scan_roots: step must be in (0, omega/4]");
    return brackets_from_samples(sample_intervals(params, x_lo, x_hi, cfg, step));
}

double refine_root(const ModelParams& params, Bracket bracket, const SeriesConfig& cfg,
                   double xtol) {
    auto [a, b] = bracket;
    if (a == b) return a;
    if (a > b) std::swap(a, b);
    auto G = [&](double x) { return evaluate_G(params, x, cfg).value; };

    double fa = G(a);
    double fb = G(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) == (fb < 0.0))
        throw BracketInvalid("refine_root: G has equal signs at bracket endpoints");

    // Brent: inverse-quadratic / secant acceleration with a bisection fallback.
    double c = a, fc = fa;
    double d = b - a, e = d;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int iter = 0; iter < 200; ++iter) {
        if ((fb < 0.0) == (fc < 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
        fb = G(b);
    }
    return b;
}

Spectrum compute_spectrum(const ModelParams& params, int count, const SeriesConfig& cfg) {
    params.validate();
    if (count < 1) throw InvalidParams("compute_spectrum: count must be >= 1");
    if (params.g == 0.0) return closed_form_g0(params, count);

    const double w = params.omega;
    const double xtol = 1e-12 * w;
    const double step = w / 8.0;
    const double x_lo = default_x_min(params);
    const double x_cap =
        (count + 10 + 2.0 * std::abs(params.epsilon) / w + params.delta / w) * w;
    double x_hi = x_lo + (count / 2 + 2) * w;

    Spectrum s;
    s.params = params;
    s.solver_meta = {xtol, step, cfg};

    while (true) {
        x_hi = std::min(x_hi, x_cap);
        const auto intervals = sample_intervals(params, x_lo, x_hi, cfg, step);

        std::vector<double> roots;
        for (const auto& br : brackets_from_samples(intervals))
            roots.push_back(refine_root(params, br, cfg, xtol));

        // near-tangency hunt: a pole-free interval with a deep local minimum
        // of |G| but no sign change can hide a Juddian double root
        for (const auto& iv : intervals) {
            double scale = 0.0;
            for (const auto& [x, f] : iv.pts) scale = std::max(scale, std::abs(f));
            if (scale == 0.0) continue;
            for (std::size_t i = 1; i + 1 < iv.pts.size(); ++i) {
                const auto& [xp, fp] = iv.pts[i - 1];
                const auto& [x, f] = iv.pts[i];
                const auto& [xn, fn] = iv.pts[i + 1];
                const bool local_min = std::abs(f) < std::abs(fp) && std::abs(f) <= std::abs(fn);
                const bool same_sign = (fp < 0.0) == (f < 0.0) && (f < 0.0) == (fn < 0.0);
                if (!local_min || !same_sign || std::abs(f) > 1e-6 * scale) continue;
                auto absG = [&](double xx) {
                    return std::abs(evaluate_G(params, xx, cfg).value);
                };
                auto [xm, fm] = detail::golden_min(absG, xp, xn, xtol);
                if (fm < 1e-9 * scale) {
                    roots.push_back(xm);
                    roots.push_back(xm);  // double root: two coinciding levels
                }
            }
        }

        std::sort(roots.begin(), roots.end());
        if (static_cast<int>(roots.size()) >= count || x_hi >= x_cap) {
            if (static_cast<int>(roots.size()) < count)
                throw NonConvergence("compute_spectrum: window cap reached with too few roots");
            s.levels.clear();
            for (int i = 0; i < count; ++i)
                s.levels.push_back({i, roots[i] - params.g * params.g / w, roots[i],
                                    LevelSource::g_function});
            s.scan_window = {x_lo, x_hi};
            return s;
        }
        x_hi += w;
    }
}

int count_crossings(double delta, double omega, double epsilon, int N) {
    if (!(omega > 0.0)) throw InvalidParams("count_crossings: omega must be > 0");
    if (N < 1) throw InvalidParams("count_crossings: N must be >= 1");
    const double d = delta / omega;
    const double e = std::abs(epsilon) / omega;
    if (!(d > 0.0)) throw InvalidParams("count_crossings: requires delta > 0");

    int k = 0;
    while (true) {
        const double edge = std::sqrt(static_cast<double>(k + 1) * (k + 1) + 2.0 * (k + 1) * e);
        if (std::abs(d - edge) < 1e-12)
            throw BoundaryValue("count_crossings: Delta/omega on a band boundary");
        if (d < edge) break;
        ++k;
    }
    return std::max(N - k, 0);
}

}  // namespace rabi

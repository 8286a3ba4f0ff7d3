// rabi — command-line spectrum and landscape explorer for the driven Rabi
// model. Subcommands: gfun, spectrum, cones, landscape. Deterministic,
// scriptable output: CSV with `#` metadata comments, or JSON.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rabi/grid_io.hpp"
#include "rabi/landscape.hpp"
#include "rabi/oracle.hpp"
#include "rabi/spectrum.hpp"

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// inclusive a:b:step range; the final point clamps to b when the overshoot
// is below step/2
std::vector<double> parse_range(const std::string& text) {
    double a, b, step;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3)
        throw CLI::ValidationError("range", "expected a:b:step, got '" + text + "'");
    if (!(step > 0.0)) throw CLI::ValidationError("range", "step must be > 0");
    std::vector<double> out;
    if (b < a) return out;
    for (double x = a; x <= b + step / 2.0; x += step) out.push_back(std::min(x, b));
    if (!out.empty() && out.back() < b - step / 2.0) out.push_back(b);
    return out;
}

struct CommonOpts {
    rabi::ModelParams params;
    rabi::SeriesConfig series;
    std::string out_path;
    std::string config_path;

    void attach(CLI::App* cmd, bool with_g = true, bool with_epsilon = true) {
        cmd->add_option("--omega", params.omega, "mode frequency")->capture_default_str();
        if (with_g) cmd->add_option("--g", params.g, "coupling strength");
        cmd->add_option("--delta", params.delta, "level splitting");
        if (with_epsilon) cmd->add_option("--epsilon", params.epsilon, "bias");
        cmd->add_option("--max-terms", series.max_terms, "series term cap")
            ->capture_default_str();
        cmd->add_option("--rel-tol", series.rel_tol, "series truncation tolerance")
            ->capture_default_str();
        cmd->add_option("--pole-guard", series.pole_guard, "pole exclusion radius (units of omega)")
            ->capture_default_str();
        cmd->add_option("--out", out_path, "output file (default: stdout)");
        cmd->add_option("--config", config_path, "key=value config file; flags win on conflict");
    }

    // applies key=value lines from --config to any option the command line
    // left untouched, then re-runs validation via the option callbacks
    void apply_config(CLI::App* cmd) const {
        if (config_path.empty()) return;
        std::ifstream f(config_path);
        if (!f) throw CLI::ValidationError("--config", "cannot read " + config_path);
        std::string line;
        int lineno = 0;
        while (std::getline(f, line)) {
            ++lineno;
            const auto start = line.find_first_not_of(" \t");
            if (start == std::string::npos || line[start] == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError(
                    "--config", "line " + std::to_string(lineno) + ": expected key=value");
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t");
                const auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
            };
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            auto* opt = cmd->get_option_no_throw("--" + key);
            if (!opt)
                throw CLI::ValidationError("--config", "unknown key '" + key + "'");
            if (opt->count() > 0) continue;  // command line wins
            opt->add_result(value);
            opt->run_callback();
        }
    }

    // resolves --out, writes via fn
    int emit(const std::function<void(std::ostream&)>& fn) const {
        if (out_path.empty()) {
            fn(std::cout);
            return 0;
        }
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "error: cannot open " << out_path << "\n";
            return 2;
        }
        fn(f);
        return f ? 0 : 2;
    }

    void print_meta(std::ostream& os) const {
        os << "# omega=" << fmt17(params.omega) << " g=" << fmt17(params.g)
           << " delta=" << fmt17(params.delta) << " epsilon=" << fmt17(params.epsilon)
           << "\n# max_terms=" << series.max_terms << " rel_tol=" << fmt17(series.rel_tol)
           << " pole_guard=" << fmt17(series.pole_guard) << "\n";
    }
};

const char* source_name(rabi::LevelSource s) {
    return s == rabi::LevelSource::g_function ? "g_function" : "closed_form_g0";
}

int run_gfun(const CommonOpts& opts, const std::string& x_range) {
    const auto xs = parse_range(x_range);
    const auto poles = xs.empty()
                           ? std::vector<double>{}
                           : rabi::pole_positions(opts.params, xs.front() - opts.params.omega,
                                                  xs.back() + opts.params.omega);
    return opts.emit([&](std::ostream& os) {
        opts.print_meta(os);
        os << "# poles:";
        for (double p : poles) os << ' ' << fmt17(p);
        os << "\nx,G\n";
        for (double x : xs) {
            bool guarded = false;
            for (double p : poles)
                guarded |= std::abs(x - p) < opts.series.pole_guard * opts.params.omega;
            if (guarded) {
                os << "# gap near pole x=" << fmt17(x) << "\n";
                continue;
            }
            try {
                os << fmt17(x) << ',' << fmt17(rabi::evaluate_G(opts.params, x, opts.series).value)
                   << '\n';
            } catch (const rabi::SolverError&) {
                os << "# evaluation failed x=" << fmt17(x) << "\n";
            }
        }
    });
}

int run_spectrum(const CommonOpts& opts, int count, const std::string& sweep_spec,
                 bool verify_oracle, int oracle_m) {
    if (verify_oracle) {
        const auto s = rabi::compute_spectrum(opts.params, count, opts.series);
        const auto ev = rabi::oracle::lowest_eigenvalues(opts.params, count, oracle_m);
        double max_diff = 0.0;
        for (int i = 0; i < count; ++i)
            max_diff = std::max(max_diff, std::abs(s.levels[i].energy - ev[i]));
        std::cout << "max|dE| = " << fmt17(max_diff) << " (M=" << oracle_m << ")\n";
        return max_diff < 1e-8 ? 0 : 2;
    }

    if (!sweep_spec.empty()) {
        std::string spec = sweep_spec;
        if (spec.rfind("g=", 0) == 0) spec = spec.substr(2);
        const auto gs = parse_range(spec);
        int failures = 0;
        return opts.emit([&](std::ostream& os) {
            opts.print_meta(os);
            os << "g,level,energy,root_x\n";
            for (double g : gs) {
                try {
                    const auto s =
                        rabi::compute_spectrum(opts.params.with_g(g), count, opts.series);
                    for (const auto& lvl : s.levels)
                        os << fmt17(g) << ',' << lvl.index << ',' << fmt17(lvl.energy) << ','
                           << fmt17(lvl.root_x) << '\n';
                } catch (const rabi::SolverError& e) {
                    os << "# failed g=" << fmt17(g) << ": " << e.what() << "\n";
                    ++failures;
                }
            }
            if (failures == static_cast<int>(gs.size()) && !gs.empty())
                throw rabi::SolverError("spectrum sweep: all points failed");
        });
    }

    const auto s = rabi::compute_spectrum(opts.params, count, opts.series);
    return opts.emit([&](std::ostream& os) {
        opts.print_meta(os);
        os << "level,energy,root_x,source\n";
        for (const auto& lvl : s.levels)
            os << lvl.index << ',' << fmt17(lvl.energy) << ',' << fmt17(lvl.root_x) << ','
               << source_name(lvl.source) << '\n';
    });
}

nlohmann::json cone_to_json(const rabi::ConicalPoint& c) {
    return {{"plane_n", c.plane_n},   {"g_star", c.g_star},
            {"energy", c.energy},     {"sheet_n1", c.sheet_n1},
            {"sheet_n2", c.sheet_n2}, {"sheet_label", c.sheet_label()},
            {"gap_residual", c.gap_residual}};
}

int run_cones(const CommonOpts& opts, int plane, double g_max, int sheets,
              std::optional<int> all_planes) {
    std::vector<int> planes;
    if (all_planes)
        for (int n = 0; n <= *all_planes; ++n) planes.push_back(n);
    else
        planes.push_back(plane);

    nlohmann::json out = nlohmann::json::array();
    for (int n : planes) {
        const auto res = rabi::find_cones(opts.params, n, g_max, sheets, opts.series);
        nlohmann::json planej;
        planej["plane_n"] = n;
        planej["epsilon"] = n * opts.params.omega / 2.0;
        planej["cones"] = nlohmann::json::array();
        planej["anomalies"] = nlohmann::json::array();
        std::map<int, int> counts;
        for (const auto& c : res.cones) {
            planej["cones"].push_back(cone_to_json(c));
            ++counts[c.sheet_label()];
        }
        for (const auto& c : res.anomalies) planej["anomalies"].push_back(cone_to_json(c));
        planej["counts_per_sheet"] = nlohmann::json::object();
        for (const auto& [sheet, cnt] : counts)
            planej["counts_per_sheet"][std::to_string(sheet)] = cnt;
        out.push_back(planej);
    }

    nlohmann::json doc;
    doc["omega"] = opts.params.omega;
    doc["delta"] = opts.params.delta;
    doc["g_max"] = g_max;
    doc["sheets"] = sheets;
    doc["planes"] = out;
    return opts.emit([&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

int run_landscape(const CommonOpts& opts, const std::string& g_range,
                  const std::string& eps_range, int sheets, bool shifted,
                  const std::string& format, int threads) {
    const auto gs = parse_range(g_range);
    const auto es = parse_range(eps_range);
    const auto grid =
        rabi::sweep(opts.params, gs, es, sheets, shifted, opts.series,
                    threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency()));
    const auto fmt = format == "json" ? rabi::GridFormat::json : rabi::GridFormat::csv;
    return opts.emit([&](std::ostream& os) { rabi::export_grid(grid, fmt, os); });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"driven Rabi model spectrum and energy-landscape solver"};
    app.require_subcommand(1);

    CommonOpts gfun_opts, spec_opts, cone_opts, land_opts;

    auto* gfun = app.add_subcommand("gfun", "tabulate G(x) over an x range");
    gfun_opts.attach(gfun);
    std::string x_range;
    gfun->add_option("--x", x_range, "x range a:b:step")->required();

    auto* spectrum = app.add_subcommand("spectrum", "energy levels at fixed parameters");
    spec_opts.attach(spectrum);
    int count = 6;
    std::string sweep_spec;
    bool verify_oracle = false;
    int oracle_m = 60;
    spectrum->add_option("--count", count, "number of levels")->capture_default_str();
    spectrum->add_option("--sweep", sweep_spec, "sweep the coupling, g=a:b:step");
    spectrum->add_flag("--verify-oracle", verify_oracle,
                       "compare against the truncated diagonalization");
    spectrum->add_option("--M", oracle_m, "oracle boson truncation")->capture_default_str();

    auto* cones = app.add_subcommand("cones", "conical intersections in a bias plane");
    cone_opts.attach(cones, /*with_g=*/false);
    int plane = 0, sheets = 3;
    double g_max = 1.5;
    std::optional<int> all_planes;
    cones->add_option("--plane", plane, "plane index n (epsilon = n omega/2)")
        ->capture_default_str();
    cones->add_option("--gmax", g_max, "upper end of the g scan")->capture_default_str();
    cones->add_option("--sheets", sheets, "highest sheet label to search")
        ->capture_default_str();
    cones->add_option("--all-planes", all_planes, "search planes 0..n_max");

    auto* landscape = app.add_subcommand("landscape", "sweep a (g, epsilon) grid");
    land_opts.attach(landscape, /*with_g=*/false, /*with_epsilon=*/false);
    std::string g_range, eps_range, format = "csv";
    int land_sheets = 6, threads = 0;
    bool shifted = false;
    landscape->add_option("--g", g_range, "g axis a:b:step")->required();
    landscape->add_option("--epsilon", eps_range, "epsilon axis a:b:step")->required();
    landscape->add_option("--sheets", land_sheets, "sheets per node")->capture_default_str();
    landscape->add_flag("--shifted", shifted, "store E + g^2/omega");
    landscape->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    landscape->add_option("--threads", threads, "worker threads (0 = machine-determined)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
        if (gfun->parsed()) gfun_opts.apply_config(gfun);
        if (spectrum->parsed()) spec_opts.apply_config(spectrum);
        if (cones->parsed()) cone_opts.apply_config(cones);
        if (landscape->parsed()) land_opts.apply_config(landscape);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (gfun->parsed()) return run_gfun(gfun_opts, x_range);
        if (spectrum->parsed())
            return run_spectrum(spec_opts, count, sweep_spec, verify_oracle, oracle_m);
        if (cones->parsed()) return run_cones(cone_opts, plane, g_max, sheets, all_planes);
        if (landscape->parsed())
            return run_landscape(land_opts, g_range, eps_range, land_sheets, shifted, format,
                                 threads);
    } catch (const rabi::SolverError& e) {
        std::cerr << "computation failed: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

#include "rabi/grid_io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include <json.hpp>

namespace rabi {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void export_csv(const LandscapeGrid& grid, std::ostream& out) {
    out << "# omega=" << fmt17(grid.omega) << " delta=" << fmt17(grid.delta)
        << " L=" << grid.L << " shifted=" << (grid.shifted ? 1 : 0) << "\n";
    out << "# xtol=" << fmt17(grid.solver_meta.xtol)
        << " scan_step=" << fmt17(grid.solver_meta.scan_step)
        << " max_terms=" << grid.solver_meta.series.max_terms
        << " rel_tol=" << fmt17(grid.solver_meta.series.rel_tol)
        << " pole_guard=" << fmt17(grid.solver_meta.series.pole_guard) << "\n";
    out << "g,epsilon,sheet,energy,shifted\n";
    for (std::size_t gi = 0; gi < grid.g_axis.size(); ++gi)
        for (std::size_t ei = 0; ei < grid.eps_axis.size(); ++ei)
            for (int l = 0; l < grid.L; ++l)
                out << fmt17(grid.g_axis[gi]) << ',' << fmt17(grid.eps_axis[ei]) << ',' << l
                    << ',' << fmt17(grid.sheet(gi, ei, l)) << ',' << (grid.shifted ? 1 : 0)
                    << '\n';
}

nlohmann::json to_json(const LandscapeGrid& grid) {
    return nlohmann::json{
        {"omega", grid.omega},
        {"delta", grid.delta},
        {"g_axis", grid.g_axis},
        {"eps_axis", grid.eps_axis},
        {"L", grid.L},
        {"shifted", grid.shifted},
        {"sheets", grid.sheets},
        {"error_mask", grid.error_mask},
        {"solver_meta",
         {{"xtol", grid.solver_meta.xtol},
          {"scan_step", grid.solver_meta.scan_step},
          {"max_terms", grid.solver_meta.series.max_terms},
          {"rel_tol", grid.solver_meta.series.rel_tol},
          {"consecutive_small", grid.solver_meta.series.consecutive_small},
          {"pole_guard", grid.solver_meta.series.pole_guard}}}};
}

}  // namespace

void export_grid(const LandscapeGrid& grid, GridFormat format, std::ostream& out) {
    if (format == GridFormat::csv)
        export_csv(grid, out);
    else
        out << to_json(grid).dump(2) << '\n';
}

void export_grid(const LandscapeGrid& grid, GridFormat format, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SolverError("export_grid: cannot open " + path);
    export_grid(grid, format, out);
    if (!out) throw SolverError("export_grid: write failed for " + path);
}

LandscapeGrid import_grid_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SolverError("import_grid_json: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SolverError("import_grid_json: parse error in " + path + ": " + e.what());
    }

    LandscapeGrid grid;
    grid.omega = j.at("omega").get<double>();
    grid.delta = j.at("delta").get<double>();
    grid.g_axis = j.at("g_axis").get<std::vector<double>>();
    grid.eps_axis = j.at("eps_axis").get<std::vector<double>>();
    grid.L = j.at("L").get<int>();
    grid.shifted = j.at("shifted").get<bool>();
    // failed nodes carry NaN, which JSON stores as null
    grid.sheets.reserve(j.at("sheets").size());
    for (const auto& v : j.at("sheets"))
        grid.sheets.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                          : v.get<double>());
    grid.error_mask = j.at("error_mask").get<std::vector<std::uint8_t>>();
    const auto& m = j.at("solver_meta");
    grid.solver_meta.xtol = m.at("xtol").get<double>();
    grid.solver_meta.scan_step = m.at("scan_step").get<double>();
    grid.solver_meta.series.max_terms = m.at("max_terms").get<int>();
    grid.solver_meta.series.rel_tol = m.at("rel_tol").get<double>();
    grid.solver_meta.series.consecutive_small = m.at("consecutive_small").get<int>();
    grid.solver_meta.series.pole_guard = m.at("pole_guard").get<double>();
    return grid;
}

}  // namespace rabi

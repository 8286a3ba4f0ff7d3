// grid_io.hpp — landscape grid serialization (CSV for plotting, JSON for
// lossless round trips).

#pragma once

#include <iosfwd>
#include <string>

#include "rabi/landscape.hpp"

namespace rabi {

enum class GridFormat { csv, json };

// CSV: `#`-prefixed metadata, header g,epsilon,sheet,energy,shifted, one row
// per (node, sheet) in g-major order, 17 significant digits. JSON mirrors the
// LandscapeGrid fields verbatim with a metadata object.
void export_grid(const LandscapeGrid& grid, GridFormat format, const std::string& path);
void export_grid(const LandscapeGrid& grid, GridFormat format, std::ostream& out);

// Reads a grid previously exported as JSON; bit-exact for doubles.
LandscapeGrid import_grid_json(const std::string& path);

}  // namespace rabi

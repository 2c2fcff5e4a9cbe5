#pragma once

// Import/export: CSV point lists, JSON snapshots of diagrams and
// triangulations (format tag "bvd-1"), SVG rendering, and PPM dumps of
// raster labelings. JSON/SVG payloads are returned as strings so callers
// decide where they land; write_text_file is the trivial sink.

#include <array>
#include <string>
#include <vector>

#include "bvd/core.hpp"
#include "bvd/diagram.hpp"
#include "bvd/generator.hpp"
#include "bvd/triangulation.hpp"

namespace bvd {

inline constexpr const char* kFormatTag = "bvd-1";

// Shared 12-color palette (RGB); SVG fills and PPM pixels draw from the same
// table, cell/label index modulo 12. Raster label -1 renders white.
extern const std::array<std::array<int, 3>, 12> kPalette;

// CSV: one point per line, comma separated; blank lines and lines starting
// with '#' are skipped. Errors carry "path:line:" prefixes.
std::vector<Vec> read_points_csv(const std::string& path);
std::vector<double> read_scalars_csv(const std::string& path);  // single column
void write_points_csv(const std::string& path, const std::vector<Vec>& pts);

std::string diagram_to_json(const PlanarDiagram& dia);
PlanarDiagram diagram_from_json(const std::string& text);

std::string triangulation_to_json(const Triangulation& tri, const std::vector<Vec>& sites);
Triangulation triangulation_from_json(const std::string& text,
                                      std::vector<Vec>* sites = nullptr);

// SVG with 6-decimal coordinates; cells filled from kPalette, sites as dots.
std::string diagram_to_svg(const PlanarDiagram& dia, int width_px = 800);

// Triangulation rendering; pass `gen` to draw edges as sampled dual-straight
// geodesic arcs instead of segments.
std::string triangulation_to_svg(const std::vector<Vec>& sites, const Triangulation& tri,
                                 const Generator* gen = nullptr, int width_px = 800,
                                 int arc_samples = 32);

// Binary PPM (P6). Pixel (0,0) is the top-left corner of the clip window.
void write_ppm(const std::string& path, const RasterLabels& labels);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace bvd

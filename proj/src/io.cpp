#include "bvd/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "bvd/geometry.hpp"

namespace bvd {

using nlohmann::ordered_json;

const std::array<std::array<int, 3>, 12> kPalette = {{{78, 121, 167},
                                                      {242, 142, 43},
                                                      {225, 87, 89},
                                                      {118, 183, 178},
                                                      {89, 161, 79},
                                                      {237, 201, 72},
                                                      {176, 122, 161},
                                                      {255, 157, 167},
                                                      {156, 117, 95},
                                                      {186, 176, 172},
                                                      {134, 188, 182},
                                                      {211, 114, 149}}};

namespace {

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(strip(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(strip(cur));
  return out;
}

double parse_double(const std::string& tok, const std::string& where) {
  if (tok.empty()) throw ParseError(where + ": empty field");
  char* end = nullptr;
  double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size())
    throw ParseError(where + ": bad number '" + tok + "'");
  if (!std::isfinite(v)) throw ParseError(where + ": non-finite value '" + tok + "'");
  return v;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string hex_color(int idx) {
  const auto& c = kPalette[static_cast<size_t>(idx) % kPalette.size()];
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

const char* kind_name(PlanarDiagram::Kind k) {
  switch (k) {
    case PlanarDiagram::Kind::first: return "first";
    case PlanarDiagram::Kind::second: return "second";
    case PlanarDiagram::Kind::weighted: return "weighted";
    case PlanarDiagram::Kind::k_order: return "k_order";
  }
  return "first";
}

PlanarDiagram::Kind kind_from_name(const std::string& s) {
  if (s == "first") return PlanarDiagram::Kind::first;
  if (s == "second") return PlanarDiagram::Kind::second;
  if (s == "weighted") return PlanarDiagram::Kind::weighted;
  if (s == "k_order") return PlanarDiagram::Kind::k_order;
  throw ParseError("unknown diagram kind '" + s + "'");
}

ordered_json points_json(const std::vector<Vec>& pts) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : pts) arr.push_back(p);
  return arr;
}

std::vector<Vec> points_from_json(const ordered_json& arr) {
  std::vector<Vec> out;
  for (const auto& p : arr) out.push_back(p.get<Vec>());
  return out;
}

ordered_json parse_tagged(const std::string& text, const char* expect_type) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kFormatTag)
    throw ParseError(std::string("missing or unsupported format tag (expected ") + kFormatTag +
                     ")");
  if (j.value("type", "") != expect_type)
    throw ParseError(std::string("expected a ") + expect_type + " payload");
  return j;
}

}  // namespace

std::vector<Vec> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  std::vector<Vec> rows;
  std::string line;
  int lineno = 0;
  size_t dim = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    std::string where = path + ":" + std::to_string(lineno);
    auto toks = split_csv(s);
    Vec row;
    row.reserve(toks.size());
    for (const auto& t : toks) row.push_back(parse_double(t, where));
    if (dim == 0)
      dim = row.size();
    else if (row.size() != dim)
      throw ParseError(where + ": expected " + std::to_string(dim) + " columns, got " +
                       std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": no data rows");
  return rows;
}

std::vector<double> read_scalars_csv(const std::string& path) {
  std::vector<double> out;
  for (const auto& row : read_points_csv(path)) {
    if (row.size() != 1) throw ParseError(path + ": expected a single column");
    out.push_back(row[0]);
  }
  return out;
}

void write_points_csv(const std::string& path, const std::vector<Vec>& pts) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  char buf[64];
  for (const auto& p : pts) {
    for (size_t i = 0; i < p.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", p[i]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
}

std::string diagram_to_json(const PlanarDiagram& dia) {
  ordered_json j;
  j["format"] = kFormatTag;
  j["type"] = "diagram";
  j["kind"] = kind_name(dia.kind);
  j["clip"] = {dia.clip.x0, dia.clip.y0, dia.clip.x1, dia.clip.y1};
  j["k"] = dia.k;
  j["sites"] = points_json(dia.sites);
  ordered_json cells = ordered_json::array();
  for (const auto& cell : dia.cells) {
    ordered_json c;
    c["sites"] = cell.sites;
    c["bounded"] = cell.bounded;
    ordered_json poly = ordered_json::array();
    for (const auto& v : cell.poly) poly.push_back({v[0], v[1]});
    c["polygon"] = poly;
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  return j.dump(2) + "\n";
}

PlanarDiagram diagram_from_json(const std::string& text) {
  ordered_json j = parse_tagged(text, "diagram");
  PlanarDiagram dia;
  try {
    dia.kind = kind_from_name(j.at("kind").get<std::string>());
    auto clip = j.at("clip");
    dia.clip = Rect{clip.at(0).get<double>(), clip.at(1).get<double>(),
                    clip.at(2).get<double>(), clip.at(3).get<double>()};
    dia.k = j.value("k", 1);
    dia.sites = points_from_json(j.at("sites"));
    for (const auto& c : j.at("cells")) {
      Cell cell;
      cell.sites = c.at("sites").get<std::vector<int>>();
      cell.bounded = c.at("bounded").get<bool>();
      for (const auto& v : c.at("polygon"))
        cell.poly.push_back(P2{v.at(0).get<double>(), v.at(1).get<double>()});
      dia.cells.push_back(std::move(cell));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed diagram JSON: ") + e.what());
  }
  return dia;
}

std::string triangulation_to_json(const Triangulation& tri, const std::vector<Vec>& sites) {
  ordered_json j;
  j["format"] = kFormatTag;
  j["type"] = "triangulation";
  j["site_count"] = tri.site_count;
  j["sites"] = points_json(sites);
  ordered_json tris = ordered_json::array();
  for (const auto& t : tri.triangles) tris.push_back({t[0], t[1], t[2]});
  j["triangles"] = std::move(tris);
  j["hull"] = tri.hull;
  j["redundant"] = tri.redundant;
  j["general_position_warning"] = tri.general_position_warning;
  return j.dump(2) + "\n";
}

Triangulation triangulation_from_json(const std::string& text, std::vector<Vec>* sites) {
  ordered_json j = parse_tagged(text, "triangulation");
  Triangulation tri;
  try {
    tri.site_count = j.at("site_count").get<int>();
    if (sites) *sites = points_from_json(j.at("sites"));
    for (const auto& t : j.at("triangles"))
      tri.triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    tri.hull = j.at("hull").get<std::vector<int>>();
    tri.redundant = j.at("redundant").get<std::vector<int>>();
    tri.general_position_warning = j.at("general_position_warning").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed triangulation JSON: ") + e.what());
  }
  return tri;
}

// --- SVG ---------------------------------------------------------------------

namespace {

struct SvgMap {
  double x0, y1, scale;
  double width_px, height_px;

  SvgMap(const Rect& world, int width_px_in)
      : x0(world.x0), y1(world.y1), scale(width_px_in / world.width()),
        width_px(width_px_in), height_px(world.height() * scale) {}

  std::string pt(const P2& p) const {
    return fmt6((p[0] - x0) * scale) + "," + fmt6((y1 - p[1]) * scale);
  }
};

void svg_header(std::ostringstream& os, const SvgMap& m) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt6(m.width_px)
     << "\" height=\"" << fmt6(m.height_px) << "\" viewBox=\"0 0 " << fmt6(m.width_px) << " "
     << fmt6(m.height_px) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
}

void svg_sites(std::ostringstream& os, const SvgMap& m, const std::vector<Vec>& sites) {
  for (const auto& s : sites) {
    os << "<circle cx=\"" << fmt6((s[0] - m.x0) * m.scale) << "\" cy=\""
       << fmt6((m.y1 - s[1]) * m.scale) << "\" r=\"3\" fill=\"#000000\"/>\n";
  }
}

Rect site_bbox(const std::vector<Vec>& sites) {
  Rect r{sites[0][0], sites[0][1], sites[0][0], sites[0][1]};
  for (const auto& s : sites) {
    r.x0 = std::min(r.x0, s[0]);
    r.x1 = std::max(r.x1, s[0]);
    r.y0 = std::min(r.y0, s[1]);
    r.y1 = std::max(r.y1, s[1]);
  }
  double mx = 0.05 * std::max(r.width(), 1e-9), my = 0.05 * std::max(r.height(), 1e-9);
  return Rect{r.x0 - mx, r.y0 - my, r.x1 + mx, r.y1 + my};
}

}  // namespace

std::string diagram_to_svg(const PlanarDiagram& dia, int width_px) {
  if (width_px < 16) throw ConfigError("svg width too small");
  SvgMap m(dia.clip, width_px);
  std::ostringstream os;
  svg_header(os, m);
  for (size_t i = 0; i < dia.cells.size(); ++i) {
    const auto& cell = dia.cells[i];
    if (cell.poly.empty()) continue;
    os << "<polygon points=\"";
    for (size_t v = 0; v < cell.poly.size(); ++v)
      os << (v ? " " : "") << m.pt(cell.poly[v]);
    os << "\" fill=\"" << hex_color(static_cast<int>(i))
       << "\" fill-opacity=\"0.45\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  }
  svg_sites(os, m, dia.sites);
  os << "</svg>\n";
  return os.str();
}

std::string triangulation_to_svg(const std::vector<Vec>& sites, const Triangulation& tri,
                                 const Generator* gen, int width_px, int arc_samples) {
  if (sites.empty()) throw ConfigError("no sites to draw");
  if (width_px < 16) throw ConfigError("svg width too small");
  if (arc_samples < 2) throw ConfigError("arc_samples must be >= 2");
  SvgMap m(site_bbox(sites), width_px);
  std::ostringstream os;
  svg_header(os, m);
  for (const auto& [i, j] : tri.edges()) {
    if (gen) {
      GeodesicArc arc{GeodesicArc::Kind::gamma, sites[i], sites[j]};
      os << "<polyline fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"1.5\" points=\"";
      for (int s = 0; s <= arc_samples; ++s) {
        Vec x = geodesic_point(*gen, arc, static_cast<double>(s) / arc_samples);
        os << (s ? " " : "") << m.pt(p2(x));
      }
      os << "\"/>\n";
    } else {
      os << "<line x1=\"" << fmt6((sites[i][0] - m.x0) * m.scale) << "\" y1=\""
         << fmt6((m.y1 - sites[i][1]) * m.scale) << "\" x2=\""
         << fmt6((sites[j][0] - m.x0) * m.scale) << "\" y2=\""
         << fmt6((m.y1 - sites[j][1]) * m.scale)
         << "\" stroke=\"#1f4e79\" stroke-width=\"1.5\"/>\n";
    }
  }
  svg_sites(os, m, sites);
  os << "</svg>\n";
  return os.str();
}

void write_ppm(const std::string& path, const RasterLabels& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << "P6\n" << labels.width << " " << labels.height << "\n255\n";
  std::string row(static_cast<size_t>(labels.width) * 3, '\0');
  for (int r = 0; r < labels.height; ++r) {
    for (int c = 0; c < labels.width; ++c) {
      int lab = labels.at(r, c);
      unsigned char rgb[3] = {255, 255, 255};
      if (lab >= 0) {
        const auto& col = kPalette[static_cast<size_t>(lab) % kPalette.size()];
        rgb[0] = static_cast<unsigned char>(col[0]);
        rgb[1] = static_cast<unsigned char>(col[1]);
        rgb[2] = static_cast<unsigned char>(col[2]);
      }
      row[3 * c + 0] = static_cast<char>(rgb[0]);
      row[3 * c + 1] = static_cast<char>(rgb[1]);
      row[3 * c + 2] = static_cast<char>(rgb[2]);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw ParseError(path + ": write failed");
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << content;
  if (!out) throw ParseError(path + ": write failed");
}

}  // namespace bvd

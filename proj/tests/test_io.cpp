#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "bvd/core.hpp"
#include "bvd/diagram.hpp"
#include "bvd/generator.hpp"
#include "bvd/io.hpp"
#include "bvd/triangulation.hpp"

using namespace bvd;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/bvd_io_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("points csv round trip") {
  TempFile tmp("pts.csv");
  std::vector<Vec> pts = {{1.0, 2.0}, {0.1234567890123456, -7.5}, {3e-15, 4e20}};
  write_points_csv(tmp.path, pts);
  auto back = read_points_csv(tmp.path);
  REQUIRE(back.size() == pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    CHECK(back[i][0] == pts[i][0]);  // %.17g is lossless for doubles
    CHECK(back[i][1] == pts[i][1]);
  }
}

TEST_CASE("csv skips comments and blank lines") {
  TempFile tmp("comments.csv");
  write_text_file(tmp.path, "# heading\n\n1.5,2.5\n\n# more\n3.5,4.5\n");
  auto pts = read_points_csv(tmp.path);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0][0] == 1.5);
  CHECK(pts[1][1] == 4.5);
}

TEST_CASE("csv parse errors carry file and line") {
  TempFile tmp("bad.csv");
  write_text_file(tmp.path, "1.0,2.0\nnot_a_number,3.0\n");
  try {
    read_points_csv(tmp.path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    std::string msg = e.what();
    CHECK(msg.find(tmp.path) != std::string::npos);
    CHECK(msg.find(":2") != std::string::npos);  // offending line number
  }

  TempFile ragged("ragged.csv");
  write_text_file(ragged.path, "1.0,2.0\n3.0\n");
  CHECK_THROWS_AS(read_points_csv(ragged.path), ParseError);

  TempFile empty("empty.csv");
  write_text_file(empty.path, "# nothing\n");
  CHECK_THROWS_AS(read_points_csv(empty.path), ParseError);

  CHECK_THROWS_AS(read_points_csv("/nonexistent/nope.csv"), ParseError);
}

TEST_CASE("scalars csv") {
  TempFile tmp("w.csv");
  write_text_file(tmp.path, "0.25\n-1.5\n# c\n3.0\n");
  auto w = read_scalars_csv(tmp.path);
  REQUIRE(w.size() == 3);
  CHECK(w[0] == 0.25);
  CHECK(w[1] == -1.5);
  CHECK(w[2] == 3.0);
  TempFile multi("multi.csv");
  write_text_file(multi.path, "1.0,2.0\n");
  CHECK_THROWS_AS(read_scalars_csv(multi.path), ParseError);
}

TEST_CASE("diagram json round trip") {
  Generator gen = shannon(2);
  std::vector<Vec> sites = {{0.5, 0.5}, {2.0, 0.7}, {1.0, 2.0}};
  Rect clip{0.2, 0.2, 2.8, 2.8};
  PlanarDiagram dia = first_type_diagram_2d(gen, sites, clip);
  std::string text = diagram_to_json(dia);
  CHECK(text.find("\"bvd-1\"") != std::string::npos);
  CHECK(text.find("\"diagram\"") != std::string::npos);

  PlanarDiagram back = diagram_from_json(text);
  CHECK(back.kind == dia.kind);
  CHECK(back.k == dia.k);
  CHECK(back.clip.x0 == doctest::Approx(clip.x0));
  CHECK(back.clip.y1 == doctest::Approx(clip.y1));
  REQUIRE(back.sites.size() == sites.size());
  REQUIRE(back.cells.size() == dia.cells.size());
  for (size_t i = 0; i < dia.cells.size(); ++i) {
    CHECK(back.cells[i].sites == dia.cells[i].sites);
    CHECK(back.cells[i].bounded == dia.cells[i].bounded);
    REQUIRE(back.cells[i].poly.size() == dia.cells[i].poly.size());
    for (size_t v = 0; v < dia.cells[i].poly.size(); ++v) {
      CHECK(back.cells[i].poly[v][0] == dia.cells[i].poly[v][0]);
      CHECK(back.cells[i].poly[v][1] == dia.cells[i].poly[v][1]);
    }
  }

  // k-order kind survives the trip
  PlanarDiagram kord = k_order_diagram_2d(gen, sites, 2, clip);
  PlanarDiagram kback = diagram_from_json(diagram_to_json(kord));
  CHECK(kback.kind == PlanarDiagram::Kind::k_order);
  CHECK(kback.k == 2);
  REQUIRE(!kback.cells.empty());
  CHECK(kback.cells[0].sites.size() == 2);
}

TEST_CASE("diagram json rejects foreign payloads") {
  CHECK_THROWS_AS(diagram_from_json("{\"format\":\"bvd-2\",\"type\":\"diagram\"}"),
                  ParseError);
  CHECK_THROWS_AS(diagram_from_json("{\"format\":\"bvd-1\",\"type\":\"triangulation\"}"),
                  ParseError);
  CHECK_THROWS_AS(diagram_from_json("not json at all"), ParseError);
  CHECK_THROWS_AS(diagram_from_json("{}"), ParseError);
}

TEST_CASE("triangulation json round trip") {
  Generator gen = squared_half_norm(2);
  std::vector<Vec> sites = {{0, 0}, {2, 0}, {1, 2}, {1, 0.8}};
  Triangulation tri = bregman_delaunay_2d(gen, sites);
  std::string text = triangulation_to_json(tri, sites);
  CHECK(text.find("\"bvd-1\"") != std::string::npos);

  std::vector<Vec> sites_back;
  Triangulation back = triangulation_from_json(text, &sites_back);
  CHECK(back.site_count == tri.site_count);
  CHECK(back.triangles == tri.triangles);
  CHECK(back.hull == tri.hull);
  CHECK(back.redundant == tri.redundant);
  CHECK(back.general_position_warning == tri.general_position_warning);
  REQUIRE(sites_back.size() == sites.size());
  for (size_t i = 0; i < sites.size(); ++i)
    CHECK(sites_back[i] == sites[i]);

  CHECK_THROWS_AS(triangulation_from_json("{\"format\":\"bvd-1\",\"type\":\"diagram\"}",
                                          nullptr),
                  ParseError);
}

TEST_CASE("diagram svg structure") {
  Generator gen = squared_half_norm(2);
  std::vector<Vec> sites = {{0.5, 0.5}, {1.5, 1.5}};
  Rect clip{0, 0, 2, 2};
  PlanarDiagram dia = first_type_diagram_2d(gen, sites, clip);
  std::string svg = diagram_to_svg(dia, 400);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polygon") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  // palette colors as hex fills
  char hex0[8];
  std::snprintf(hex0, sizeof hex0, "#%02x%02x%02x", kPalette[0][0], kPalette[0][1],
                kPalette[0][2]);
  CHECK(svg.find(hex0) != std::string::npos);
  // 6-decimal coordinates
  CHECK(svg.find(".000000") != std::string::npos);
  CHECK(svg.find("width=\"400.000000\"") != std::string::npos);
}

TEST_CASE("triangulation svg draws straight or arced edges") {
  Generator gen = shannon(2);
  std::vector<Vec> sites = {{0.5, 0.5}, {2.5, 0.6}, {1.2, 2.4}, {1.4, 1.1}};
  Triangulation tri = bregman_delaunay_2d(gen, sites);
  std::string flat = triangulation_to_svg(sites, tri);
  CHECK(flat.find("<line") != std::string::npos);
  CHECK(flat.find("<circle") != std::string::npos);

  std::string arcs = triangulation_to_svg(sites, tri, &gen, 800, 24);
  CHECK(arcs.find("<polyline") != std::string::npos);
  // arcs sample strictly more coordinate pairs than segment endpoints
  CHECK(arcs.size() > flat.size());
}

TEST_CASE("ppm output") {
  Generator gen = squared_half_norm(2);
  std::vector<Vec> sites = {{0.5, 1.0}, {1.5, 1.0}};
  Rect clip{0, 0, 2, 2};
  RasterLabels lab = raster_diagram(gen, sites, RasterMode::first, clip, 16);
  TempFile tmp("img.ppm");
  write_ppm(tmp.path, lab);
  std::string data = slurp(tmp.path);
  REQUIRE(data.size() > 15);
  CHECK(data.substr(0, 3) == "P6\n");
  CHECK(data.find("16 16\n255\n") != std::string::npos);
  size_t header = data.find("255\n") + 4;
  CHECK(data.size() - header == 16 * 16 * 3);
  // top-left pixel belongs to site 0 -> palette[0]
  CHECK(int(uint8_t(data[header + 0])) == kPalette[0][0]);
  CHECK(int(uint8_t(data[header + 1])) == kPalette[0][1]);
  CHECK(int(uint8_t(data[header + 2])) == kPalette[0][2]);
  // rightmost pixel of the top row belongs to site 1 -> palette[1]
  size_t right = header + 15 * 3;
  CHECK(int(uint8_t(data[right + 0])) == kPalette[1][0]);

  // masked labels go white: shannon domain excludes x <= 0
  Generator sh = shannon(2);
  std::vector<Vec> s2 = {{1.0, 1.0}};
  Rect wide{-1.0, 0.5, 1.5, 1.5};
  RasterLabels masked = raster_diagram(sh, s2, RasterMode::first, wide, 8);
  TempFile tmp2("mask.ppm");
  write_ppm(tmp2.path, masked);
  std::string d2 = slurp(tmp2.path);
  size_t h2 = d2.find("255\n") + 4;
  // leftmost column sits at x < 0, outside the domain
  CHECK(int(uint8_t(d2[h2 + 0])) == 255);
  CHECK(int(uint8_t(d2[h2 + 1])) == 255);
  CHECK(int(uint8_t(d2[h2 + 2])) == 255);
}

TEST_CASE("write_text_file failures") {
  CHECK_THROWS_AS(write_text_file("/nonexistent_dir/x.txt", "data"), Error);
  CHECK_THROWS_AS(write_points_csv("/nonexistent_dir/x.csv", {{1.0, 2.0}}), Error);
}

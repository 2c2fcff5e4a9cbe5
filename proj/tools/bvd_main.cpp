// bvd: Bregman divergence geometry toolkit CLI.
//
// Exit codes: 0 success, 2 invalid input/config, 3 numeric failure.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bvd/core.hpp"
#include "bvd/diagram.hpp"
#include "bvd/exp_family.hpp"
#include "bvd/generator.hpp"
#include "bvd/io.hpp"
#include "bvd/sampling.hpp"
#include "bvd/triangulation.hpp"

namespace {

using namespace bvd;

Vec parse_vec(const std::string& s, const char* what) {
  Vec out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) throw ConfigError(std::string(what) + ": empty component in '" + s + "'");
    char* end = nullptr;
    double v = std::strtod(cur.c_str(), &end);
    if (end != cur.c_str() + cur.size())
      throw ConfigError(std::string(what) + ": bad number '" + cur + "'");
    out.push_back(v);
    cur.clear();
  };
  for (char ch : s) {
    if (ch == ',')
      flush();
    else if (!std::isspace(static_cast<unsigned char>(ch)))
      cur.push_back(ch);
  }
  flush();
  return out;
}

Rect parse_clip(const std::string& s) {
  Vec v = parse_vec(s, "--clip");
  if (v.size() != 4) throw ConfigError("--clip needs x0,y0,x1,y1");
  Rect r{v[0], v[1], v[2], v[3]};
  if (!r.valid()) throw ConfigError("--clip rectangle is empty");
  return r;
}

struct GenOpts {
  std::string name;
  int alpha = 3;
  std::string qmat;  // row-major, comma separated (mahalanobis)
};

void add_gen_options(CLI::App* sub, GenOpts& g) {
  sub->add_option("--generator", g.name, "generator name (see `bvd selftest` for the list)")
      ->required();
  sub->add_option("--alpha", g.alpha, "norm_like exponent (integer >= 2)");
  sub->add_option("--qmat", g.qmat, "mahalanobis matrix, row-major comma list");
}

Generator build_generator(const GenOpts& g, int dim) {
  GeneratorSpec spec;
  spec.name = g.name;
  spec.dim = dim;
  spec.alpha = g.alpha;
  if (!g.qmat.empty()) {
    Vec entries = parse_vec(g.qmat, "--qmat");
    int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(entries.size()))));
    if (static_cast<size_t>(d) * d != entries.size())
      throw ConfigError("--qmat must contain a square number of entries");
    Mat q(d, d);
    q.a = entries;
    spec.q = q;
  }
  return make_generator(spec);
}

int run_selftest() {
  int failures = 0;
  Rng rng(7);
  for (const auto& name : builtin_generator_names()) {
    GeneratorSpec spec;
    spec.name = name;
    spec.dim = 2;
    spec.alpha = 3;
    if (name == "mahalanobis") {
      Mat q(2, 2);
      q.at(0, 0) = 2.0, q.at(0, 1) = 0.3, q.at(1, 0) = 0.3, q.at(1, 1) = 1.0;
      spec.q = q;
    }
    Generator gen = make_generator(spec);
    auto problems = validate_generator(gen, rng, 32);
    if (problems.empty()) {
      std::printf("ok: generator %s\n", name.c_str());
    } else {
      for (const auto& p : problems) std::printf("FAIL: %s: %s\n", name.c_str(), p.c_str());
      ++failures;
    }
  }
  for (const auto& name : family_names()) {
    ExpFamily fam = make_family(name);
    Rng frng(11);
    bool ok = true;
    for (int t = 0; t < 16 && ok; ++t) {
      Vec sp(fam.source_param_names.size()), sq(sp.size());
      for (auto& v : sp) v = frng.uniform(0.2, 2.0);
      for (auto& v : sq) v = frng.uniform(0.2, 2.0);
      if (name == "bernoulli")
        for (auto* v : {&sp, &sq}) for (auto& x : *v) x = 0.1 + 0.35 * x;
      double closed = fam.closed_form_kl(sp, sq);
      double bridge =
          kl_divergence(fam, fam.source_to_natural(sp), fam.source_to_natural(sq));
      if (std::fabs(closed - bridge) > 1e-9 * (1.0 + std::fabs(closed))) ok = false;
    }
    if (ok) {
      std::printf("ok: family %s\n", name.c_str());
    } else {
      std::printf("FAIL: family %s KL bridge mismatch\n", name.c_str());
      ++failures;
    }
  }
  {
    Generator gen = shannon(2);
    std::vector<Vec> sites{{0.6, 0.8}, {2.0, 1.4}, {1.1, 2.3}};
    Rect clip{0.2, 0.2, 3.0, 3.0};
    PlanarDiagram dia = first_type_diagram_2d(gen, sites, clip);
    RasterLabels oracle = raster_diagram(gen, sites, RasterMode::first, clip, 128);
    double agree = label_agreement(oracle, rasterize_cells(dia, 128));
    if (agree >= 0.995) {
      std::printf("ok: diagram vs raster oracle (agreement %.4f)\n", agree);
    } else {
      std::printf("FAIL: diagram vs raster oracle (agreement %.4f)\n", agree);
      ++failures;
    }
  }
  if (failures) {
    std::printf("%d check(s) failed\n", failures);
    throw NonTermination("selftest failed");
  }
  std::printf("all checks passed\n");
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Bregman divergence geometry toolkit"};
  app.require_subcommand(1);
  int threads = -1;
  app.add_option("--threads", threads,
                 "worker threads for rasterization (overrides BVD_THREADS; 0 = all cores)");

  // --- divergence ---
  auto* c_div = app.add_subcommand("divergence", "evaluate D_F(p || q)");
  GenOpts g_div;
  std::string div_p, div_q;
  add_gen_options(c_div, g_div);
  c_div->add_option("--p", div_p, "first argument, comma separated")->required();
  c_div->add_option("--q", div_q, "second argument, comma separated")->required();

  // --- kl ---
  auto* c_kl = app.add_subcommand("kl", "Kullback-Leibler divergence between family members");
  std::string kl_family, kl_p, kl_q;
  bool kl_natural = false;
  c_kl->add_option("--family", kl_family, "bernoulli|poisson|normal|laplacian")->required();
  c_kl->add_option("--p", kl_p, "source parameters of p")->required();
  c_kl->add_option("--q", kl_q, "source parameters of q")->required();
  c_kl->add_flag("--natural", kl_natural, "treat inputs as natural parameters");

  // --- diagram ---
  auto* c_dia = app.add_subcommand("diagram", "exact planar diagrams");
  GenOpts g_dia;
  std::string dia_type = "first", dia_sites, dia_weights, dia_clip, dia_json, dia_svg;
  int dia_k = 2, dia_edge_samples = 32;
  add_gen_options(c_dia, g_dia);
  c_dia->add_option("--type", dia_type, "first|second|weighted|korder");
  c_dia->add_option("--sites", dia_sites, "CSV of 2D sites")->required();
  c_dia->add_option("--weights", dia_weights, "CSV of per-site weights (weighted type)");
  c_dia->add_option("--clip", dia_clip, "clip window x0,y0,x1,y1")->required();
  c_dia->add_option("--k", dia_k, "subset size for korder");
  c_dia->add_option("--edge-samples", dia_edge_samples, "boundary samples per curved edge");
  c_dia->add_option("--json", dia_json, "write diagram JSON here");
  c_dia->add_option("--svg", dia_svg, "write SVG rendering here");

  // --- triangulate ---
  auto* c_tri = app.add_subcommand("triangulate", "divergence Delaunay / geodesic triangulation");
  GenOpts g_tri;
  std::string tri_mode = "delaunay", tri_sites, tri_json, tri_svg;
  add_gen_options(c_tri, g_tri);
  c_tri->add_option("--mode", tri_mode, "delaunay|geodesic");
  c_tri->add_option("--sites", tri_sites, "CSV of 2D sites")->required();
  c_tri->add_option("--json", tri_json, "write triangulation JSON here");
  c_tri->add_option("--svg", tri_svg, "write SVG rendering here");

  // --- raster ---
  auto* c_ras = app.add_subcommand("raster", "brute-force per-pixel labeling");
  GenOpts g_ras;
  std::string ras_mode = "first", ras_sites, ras_weights, ras_clip, ras_ppm;
  int ras_res = 512;
  add_gen_options(c_ras, g_ras);
  c_ras->add_option("--mode", ras_mode, "first|second|symmetrized");
  c_ras->add_option("--sites", ras_sites, "CSV of 2D sites")->required();
  c_ras->add_option("--weights", ras_weights, "CSV of per-site weights (first mode)");
  c_ras->add_option("--clip", ras_clip, "clip window x0,y0,x1,y1")->required();
  c_ras->add_option("--resolution", ras_res, "pixels per side (max 4096)");
  c_ras->add_option("--ppm", ras_ppm, "write P6 image here")->required();

  // --- lloyd ---
  auto* c_llo = app.add_subcommand("lloyd", "raster Lloyd relaxation");
  GenOpts g_llo;
  std::string llo_sites, llo_clip, llo_out, llo_trace;
  int llo_iters = 100, llo_res = 512;
  add_gen_options(c_llo, g_llo);
  c_llo->add_option("--sites", llo_sites, "CSV of initial 2D sites")->required();
  c_llo->add_option("--clip", llo_clip, "clip window x0,y0,x1,y1")->required();
  c_llo->add_option("--iters", llo_iters, "max iterations");
  c_llo->add_option("--resolution", llo_res, "raster resolution");
  c_llo->add_option("--out", llo_out, "write final sites CSV here");
  c_llo->add_option("--trace", llo_trace, "write objective trace CSV here");

  // --- kmeans ---
  auto* c_km = app.add_subcommand("kmeans", "Bregman k-means clustering");
  GenOpts g_km;
  std::string km_data, km_out;
  int km_k = 2;
  uint64_t km_seed = 0;
  add_gen_options(c_km, g_km);
  c_km->add_option("--data", km_data, "CSV of data points")->required();
  c_km->add_option("--k", km_k, "cluster count")->required();
  c_km->add_option("--seed", km_seed, "RNG seed");
  c_km->add_option("--out", km_out, "write final centers CSV here");

  // --- epsnet ---
  auto* c_eps = app.add_subcommand("epsnet", "greedy divergence eps-net");
  GenOpts g_eps;
  std::string eps_clip, eps_seeds, eps_out;
  double eps_eps = 0.1;
  add_gen_options(c_eps, g_eps);
  c_eps->add_option("--clip", eps_clip, "clip window x0,y0,x1,y1")->required();
  c_eps->add_option("--eps", eps_eps, "target covering error")->required();
  c_eps->add_option("--seeds", eps_seeds, "CSV of seed points");
  c_eps->add_option("--out", eps_out, "write net points CSV here");

  // --- selftest ---
  app.add_subcommand("selftest", "validate built-in generators and families");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (threads >= 0) setenv("BVD_THREADS", std::to_string(threads).c_str(), 1);

  if (c_div->parsed()) {
    Vec p = parse_vec(div_p, "--p"), q = parse_vec(div_q, "--q");
    if (p.size() != q.size()) throw ConfigError("--p and --q disagree on dimension");
    Generator gen = build_generator(g_div, static_cast<int>(p.size()));
    std::printf("%.17g\n", eval_divergence(gen, p, q));
    return 0;
  }
  if (c_kl->parsed()) {
    ExpFamily fam = make_family(kl_family);
    Vec p = parse_vec(kl_p, "--p"), q = parse_vec(kl_q, "--q");
    Vec tp = kl_natural ? p : fam.source_to_natural(p);
    Vec tq = kl_natural ? q : fam.source_to_natural(q);
    std::printf("%.17g\n", kl_divergence(fam, tp, tq));
    return 0;
  }
  if (c_dia->parsed()) {
    Generator gen = build_generator(g_dia, 2);
    std::vector<Vec> sites = read_points_csv(dia_sites);
    Rect clip = parse_clip(dia_clip);
    PlanarDiagram dia;
    if (dia_type == "first") {
      dia = first_type_diagram_2d(gen, sites, clip);
    } else if (dia_type == "second") {
      dia = second_type_diagram_2d(gen, sites, clip, dia_edge_samples);
    } else if (dia_type == "weighted") {
      if (dia_weights.empty()) throw ConfigError("weighted diagrams need --weights");
      dia = weighted_first_type_diagram_2d(gen, sites, read_scalars_csv(dia_weights), clip);
    } else if (dia_type == "korder") {
      dia = k_order_diagram_2d(gen, sites, dia_k, clip);
    } else {
      throw ConfigError("unknown --type '" + dia_type + "'");
    }
    std::string json = diagram_to_json(dia);
    if (dia_json.empty() && dia_svg.empty())
      std::fputs(json.c_str(), stdout);
    if (!dia_json.empty()) write_text_file(dia_json, json);
    if (!dia_svg.empty()) write_text_file(dia_svg, diagram_to_svg(dia));
    return 0;
  }
  if (c_tri->parsed()) {
    Generator gen = build_generator(g_tri, 2);
    std::vector<Vec> sites = read_points_csv(tri_sites);
    Triangulation tri;
    bool geodesic = tri_mode == "geodesic";
    if (geodesic)
      tri = geodesic_triangulation_2d(gen, sites);
    else if (tri_mode == "delaunay")
      tri = bregman_delaunay_2d(gen, sites);
    else
      throw ConfigError("unknown --mode '" + tri_mode + "'");
    std::string json = triangulation_to_json(tri, sites);
    if (tri_json.empty() && tri_svg.empty())
      std::fputs(json.c_str(), stdout);
    if (!tri_json.empty()) write_text_file(tri_json, json);
    if (!tri_svg.empty())
      write_text_file(tri_svg,
                      triangulation_to_svg(sites, tri, geodesic ? &gen : nullptr));
    return 0;
  }
  if (c_ras->parsed()) {
    Generator gen = build_generator(g_ras, 2);
    std::vector<Vec> sites = read_points_csv(ras_sites);
    Rect clip = parse_clip(ras_clip);
    RasterMode mode;
    if (ras_mode == "first")
      mode = RasterMode::first;
    else if (ras_mode == "second")
      mode = RasterMode::second;
    else if (ras_mode == "symmetrized")
      mode = RasterMode::symmetrized;
    else
      throw ConfigError("unknown --mode '" + ras_mode + "'");
    std::vector<double> weights;
    if (!ras_weights.empty()) weights = read_scalars_csv(ras_weights);
    RasterLabels labels = raster_diagram(gen, sites, mode, clip, ras_res,
                                         weights.empty() ? nullptr : &weights);
    write_ppm(ras_ppm, labels);
    return 0;
  }
  if (c_llo->parsed()) {
    Generator gen = build_generator(g_llo, 2);
    LloydResult res = lloyd_quantization(gen, read_points_csv(llo_sites), parse_clip(llo_clip),
                                         {}, llo_iters, llo_res);
    std::printf("iterations %d  objective %.17g  converged %d\n", res.iterations,
                res.objective.back(), res.converged ? 1 : 0);
    if (!llo_out.empty()) write_points_csv(llo_out, res.sites);
    if (!llo_trace.empty()) {
      std::vector<Vec> rows;
      for (double v : res.objective) rows.push_back(Vec{v});
      write_points_csv(llo_trace, rows);
    }
    return 0;
  }
  if (c_km->parsed()) {
    Generator gen = build_generator(g_km, 2);
    std::vector<Vec> data = read_points_csv(km_data);
    if (!data.empty()) gen = build_generator(g_km, static_cast<int>(data[0].size()));
    KMeansResult res = bregman_kmeans(gen, data, km_k, km_seed);
    std::printf("iterations %d  objective %.17g  converged %d\n", res.iterations,
                res.objective.back(), res.converged ? 1 : 0);
    if (!km_out.empty()) write_points_csv(km_out, res.centers);
    return 0;
  }
  if (c_eps->parsed()) {
    Generator gen = build_generator(g_eps, 2);
    std::vector<Vec> seeds;
    if (!eps_seeds.empty()) seeds = read_points_csv(eps_seeds);
    EpsNetResult res = eps_net(gen, parse_clip(eps_clip), eps_eps, seeds);
    std::printf("points %zu  final-error %.17g  certified %d\n", res.points.size(),
                res.errors.back(), res.coverage_certified ? 1 : 0);
    if (!eps_out.empty()) write_points_csv(eps_out, res.points);
    return 0;
  }
  return run_selftest();
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const bvd::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == bvd::ErrorKind::validation ? 2 : 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
}

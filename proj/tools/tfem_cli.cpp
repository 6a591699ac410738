// Command-line front end: configure, run and report the studies, emitting
// CSV tables and log-log SVG plots.
//
// Exit codes: 0 success, 2 solver failure, 3 configuration error.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "tfem/tfem.hpp"

namespace fs = std::filesystem;
using namespace tfem;

namespace {

constexpr int kExitSolver = 2;
constexpr int kExitConfig = 3;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  bool dry_run = false;
  int jobs = 1;
};

fs::path resolve_out_dir(const std::string& from_cli) {
  const char* env = std::getenv("TFEM_OUT");
  fs::path dir = env && *env ? fs::path(env) : fs::path(from_cli);
  fs::create_directories(dir);
  return dir;
}

ManufacturedProblem problem_by_name(const std::string& name) {
  if (name == "standard") return standard_problem_2d();
  if (name == "mirrored") return mirrored_problem_2d();
  if (name == "standard3d") return standard_problem_3d();
  if (name.rfind("periodic:", 0) == 0) return periodic_problem_2d(std::stoi(name.substr(9)));
  throw ConfigError("unknown problem: " + name);
}

// Deterministic fan-out: results land in input order regardless of timing.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, int jobs, F&& fn) {
  std::vector<T> out(count);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        out[i] = fn(i);
      }
    });
  for (auto& t : pool) t.join();
  return out;
}

void emit_convergence_svg(const std::vector<StudyRow>& rows, const fs::path& dir,
                          const std::string& stem) {
  PlotSeries l2{"L2 error", series_color(0), {}, {}};
  PlotSeries h1{"H1 error (outside band)", series_color(1), {}, {}};
  for (const auto& r : rows) {
    l2.x.push_back(r.h);
    l2.y.push_back(r.l2);
    h1.x.push_back(r.h);
    h1.y.push_back(r.h1_out);
  }
  if (!l2.x.empty()) {
    LogLogPlot p(stem, "h", "error");
    p.add_series(l2);
    p.add_series(h1);
    const double x0 = l2.x.back(), x1 = l2.x.front();
    p.add_guide({2.0, x0, l2.y.back(), x1, "slope 2"});
    p.add_guide({1.0, x0, h1.y.back(), x1, "slope 1"});
    p.write((dir / (stem + ".svg")).string());
  }
}

int cmd_run_convergence(const CommonOpts& cli) {
  const Config cfg = Config::parse_file(cli.config_path);
  const int dim = cfg.get_int("dim", 2);
  const int order = cfg.get_int("order", 1);
  const std::string prob_name = cfg.get_string("problem", dim == 3 ? "standard3d" : "standard");
  const ManufacturedProblem prob = problem_by_name(prob_name);
  const std::vector<double> h_list = cfg.get_list("h_list");
  const TemperPolicy policy = cfg.get_policy(dim);
  const bool band = cfg.get_bool("band", true);
  const std::string hbar_rule = cfg.get_string("hbar_rule", "zero");
  const double extent = cfg.get_double("extent", 1.0);
  RunOptions opt;
  opt.solver = cfg.get_solver();
  opt.timing = cfg.get_bool("timing", true);
  cfg.get_string("study", "convergence");
  cfg.reject_unknown_keys();

  MeshFamily fam;
  fam.dim = dim;
  fam.order = order;
  fam.band = band;
  fam.extent = extent;
  if (hbar_rule == "h2")
    fam.hbar_rule = [](double h) { return h * h; };
  else if (hbar_rule != "zero")
    throw ConfigError("unknown hbar_rule: " + hbar_rule);

  if (cli.dry_run) {
    std::cout << "plan: " << h_list.size() << " runs, dim " << dim << ", order " << order
              << ", problem '" << prob.descriptor << "', band " << (band ? "on" : "off") << "\n";
    for (const double h : h_list)
      std::cout << "  h = " << format_g17(h) << " -> n = " << grid_n_for(h) << "\n";
    return 0;
  }

  const auto rows = parallel_map<StudyRow>(h_list.size(), cli.jobs, [&](std::size_t i) {
    const double h = h_list[i];
    const Mesh mesh = make_family_mesh(fam, h);
    const auto out = solve_problem_on(mesh, order, policy, prob, h, opt);
    StudyRow row = measure_row(mesh, order, prob, out.solution, opt);
    row.study = "convergence";
    row.dim = dim;
    row.order = order;
    row.h = h;
    row.hbar = mesh.hbar > 0 ? mesh.hbar : 0.0;
    std::tie(row.C, row.k) = policy_Ck(policy, dim);
    row.Jmin = jmin(policy, h, dim, order);
    row.ndof = out.ndof;
    row.seconds = out.seconds;
    return row;
  });

  std::vector<double> hs, l2s, h1s;
  for (const auto& r : rows) {
    hs.push_back(r.h);
    l2s.push_back(r.l2);
    h1s.push_back(r.h1_out);
  }
  const fs::path dir = resolve_out_dir(cli.out_dir);
  write_csv(rows, (dir / "convergence.csv").string());
  emit_convergence_svg(rows, dir, "convergence");
  std::cout << "wrote " << (dir / "convergence.csv").string() << " (" << rows.size() << " rows)\n";
  std::cout << "fitted L2 slope: " << fitted_slope(hs, l2s) << ", H1 slope: " << fitted_slope(hs, h1s)
            << "\n";
  return 0;
}

int cmd_sweep_c(const CommonOpts& cli, int dim_flag, double h_flag) {
  Config cfg = cli.config_path.empty() ? Config::parse_string("")
                                       : Config::parse_file(cli.config_path);
  const int dim = dim_flag > 0 ? dim_flag : cfg.get_int("dim", 2);
  const double h = h_flag > 0 ? h_flag : cfg.get_double("h", 1.0 / 80);
  std::vector<double> C_list;
  if (cfg.has("C_list")) {
    C_list = cfg.get_list("C_list");
  } else {
    for (int i = 0; i <= 22; ++i) C_list.push_back(std::pow(10.0, -4.0 + 0.25 * i));
  }
  const std::string prob_name = cfg.get_string("problem", dim == 3 ? "standard3d" : "standard");
  RunOptions opt;
  opt.solver = cfg.get_solver();
  opt.timing = cfg.get_bool("timing", true);
  cfg.reject_unknown_keys();

  MeshFamily fam;
  fam.dim = dim;
  fam.band = true;
  if (cli.dry_run) {
    std::cout << "plan: sweep-c, dim " << dim << ", h = " << h << ", " << C_list.size()
              << " C values\n";
    return 0;
  }
  const ManufacturedProblem prob = problem_by_name(prob_name);
  const auto rows = sweep_C(prob, fam, h, C_list, -1.0, opt);
  const fs::path dir = resolve_out_dir(cli.out_dir);
  write_csv(rows, (dir / "sweep_c.csv").string());
  PlotSeries l2{"L2 error", series_color(0), {}, {}}, h1{"H1 error", series_color(1), {}, {}};
  for (const auto& r : rows) {
    l2.x.push_back(r.C);
    l2.y.push_back(r.l2);
    h1.x.push_back(r.C);
    h1.y.push_back(r.h1_out);
  }
  LogLogPlot p("sweep_c", "C", "error");
  p.add_series(l2);
  p.add_series(h1);
  p.write((dir / "sweep_c.svg").string());
  std::cout << "wrote " << (dir / "sweep_c.csv").string() << " (" << rows.size() << " rows)\n";
  return 0;
}

int cmd_band_extent(const CommonOpts& cli) {
  Config cfg = cli.config_path.empty() ? Config::parse_string("")
                                       : Config::parse_file(cli.config_path);
  const int dim = cfg.get_int("dim", 2);
  const double h = cfg.get_double("h", std::sqrt(2.0) / 60);
  const std::vector<double> extents = cfg.get_list("L_list", {0.1, 0.2, 0.4, 0.8, 1.0});
  std::vector<double> C_list;
  if (cfg.has("C_list")) {
    C_list = cfg.get_list("C_list");
  } else {
    for (int i = 0; i <= 16; ++i) C_list.push_back(std::pow(10.0, -4.0 + 0.3125 * i));
  }
  const int periods = cfg.get_int("periods", 10);
  RunOptions opt;
  opt.solver = cfg.get_solver();
  opt.timing = cfg.get_bool("timing", true);
  cfg.reject_unknown_keys();
  if (cli.dry_run) {
    std::cout << "plan: band-extent, dim " << dim << ", " << extents.size() << " extents x "
              << C_list.size() << " C values\n";
    return 0;
  }
  const ManufacturedProblem prob =
      dim == 3 ? standard_problem_3d() : periodic_problem_2d(periods);
  const auto rows = study_band_extent(prob, dim, h, extents, C_list, opt);
  const fs::path dir = resolve_out_dir(cli.out_dir);
  write_csv(rows, (dir / "band_extent.csv").string());
  LogLogPlot p("band_extent", "C", "L2 error");
  int i = 0;
  for (const double L : extents) {
    PlotSeries s{"L=" + format_g17(L), series_color(i++), {}, {}};
    for (const auto& r : rows)
      if (r.extra == L) {
        s.x.push_back(r.C);
        s.y.push_back(r.l2);
      }
    p.add_series(std::move(s));
  }
  p.write((dir / "band_extent.svg").string());
  std::cout << "wrote " << (dir / "band_extent.csv").string() << " (" << rows.size() << " rows)\n";
  return 0;
}

void write_nodal_values(const Eigen::VectorXd& v, const std::string& path) {
  std::ofstream out(path);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << i << ' ' << format_g17(v(i)) << '\n';
}

int cmd_mortar_demo(const CommonOpts& cli, int n_left, int n_right) {
  const fs::path dir = resolve_out_dir(cli.out_dir);
  const ManufacturedProblem prob = standard_problem_2d();
  RunOptions opt;

  if (cli.dry_run) {
    std::cout << "plan: mortar-demo, left n = " << n_left << ", right n = " << n_right << "\n";
    return 0;
  }

  // Convergence of the stitched pair under simultaneous refinement.
  std::vector<StudyRow> rows;
  std::vector<double> hs, l2s;
  for (const int nl : {10, 14, 20, 28, 40}) {
    const int nr = nl * n_right / n_left;
    const Mesh left = build_rect_mesh(0.0, 0.5, 0.0, 1.0, nl / 2, nl);
    const Mesh right = build_rect_mesh(0.5, 1.0, 0.0, 1.0, nr / 2, nr);
    const Mesh mesh = build_mortar_mesh(left, right, 0, 0.5);
    const double h = 1.0 / nl;
    const TemperPolicy policy = PowerLawPolicy{1.0, 3.0};
    const auto out = solve_problem_on(mesh, 1, policy, prob, h, opt);
    StudyRow row = measure_row(mesh, 1, prob, out.solution, opt);
    row.study = "mortar";
    row.h = h;
    std::tie(row.C, row.k) = policy_Ck(policy, 2);
    row.Jmin = jmin(policy, h, 2, 1);
    row.ndof = out.ndof;
    row.seconds = out.seconds;
    rows.push_back(row);
    hs.push_back(h);
    l2s.push_back(row.l2);

    if (nl == n_left) {
      write_mesh(mesh, (dir / "mortar_mesh.msh").string());
      write_nodal_values(out.solution, (dir / "mortar_solution.txt").string());
      const Mesh ref = build_structured_mesh(2, nr);
      const auto rout = solve_problem_on(ref, 1, FixedPolicy{1e-300}, prob, h, opt);
      write_mesh(ref, (dir / "mortar_reference_mesh.msh").string());
      write_nodal_values(rout.solution, (dir / "mortar_reference_solution.txt").string());
    }
  }
  write_csv(rows, (dir / "mortar.csv").string());
  emit_convergence_svg(rows, dir, "mortar");
  std::cout << "wrote " << (dir / "mortar.csv").string() << ", fitted L2 slope "
            << fitted_slope(hs, l2s) << "\n";
  return 0;
}

int cmd_elasticity(const CommonOpts& cli) {
  Config cfg = cli.config_path.empty() ? Config::parse_string("")
                                       : Config::parse_file(cli.config_path);
  const std::vector<double> h_list =
      cfg.get_list("h_list", {1.0 / 10, 1.0 / 14, 1.0 / 20, 1.0 / 28, 1.0 / 40});
  RunOptions opt;
  opt.solver = cfg.get_solver();
  opt.timing = cfg.get_bool("timing", true);
  cfg.reject_unknown_keys();
  if (cli.dry_run) {
    std::cout << "plan: elasticity convergence, " << h_list.size() << " refinements\n";
    return 0;
  }
  const ElasticityProblem ep = make_elasticity_problem();
  ElasticityBC bc;
  bc.is_dirichlet = [](int) { return true; };
  bc.dirichlet_value = ep.exact;

  std::vector<StudyRow> rows;
  std::vector<double> hs, l2s, h1s;
  for (const double h : h_list) {
    const int n = grid_n_for(h);
    BandSpec spec;
    const Mesh mesh = build_band_mesh(2, n, spec);
    const TemperPolicy policy = PowerLawPolicy{1.0, 3.0};
    const auto t0 = std::chrono::steady_clock::now();
    SparseSystem sys = assemble_elasticity(mesh, policy, {ep.material}, bc, ep.body_force, {}, h);
    const Eigen::VectorXd sol = solve(sys, opt.solver);
    const DofMap dofs(mesh, 1);
    StudyRow row;
    row.study = "elasticity";
    row.h = h;
    row.l2 = l2_error_vec(mesh, dofs, sol, ep.exact);
    row.h1_out = h1_error_outside_band_vec(mesh, dofs, sol, ep.exact_grad);
    row.C = 1;
    row.k = 3;
    row.Jmin = std::pow(h, 3);
    row.ndof = long(sys.matrix.rows());
    if (opt.timing)
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(row);
    hs.push_back(h);
    l2s.push_back(row.l2);
    h1s.push_back(row.h1_out);
  }
  const fs::path dir = resolve_out_dir(cli.out_dir);
  write_csv(rows, (dir / "elasticity.csv").string());
  emit_convergence_svg(rows, dir, "elasticity");
  std::cout << "wrote " << (dir / "elasticity.csv").string() << ", L2 slope "
            << fitted_slope(hs, l2s) << ", H1 slope " << fitted_slope(hs, h1s) << "\n";
  return 0;
}

int cmd_advection(const CommonOpts& cli) {
  Config cfg = cli.config_path.empty() ? Config::parse_string("")
                                       : Config::parse_file(cli.config_path);
  const std::vector<double> h_list =
      cfg.get_list("h_list", {1.0 / 10, 1.0 / 14, 1.0 / 20, 1.0 / 28, 1.0 / 40, 1.0 / 56, 1.0 / 80});
  const double r0 = cfg.get_double("r0", 0.5);
  const double width = cfg.get_double("width", 0.2);
  RunOptions opt;
  opt.solver = cfg.get_solver();
  opt.solver.method = SolverMethod::DirectLU;
  opt.timing = cfg.get_bool("timing", true);
  cfg.reject_unknown_keys();
  if (cli.dry_run) {
    std::cout << "plan: advection convergence, " << h_list.size() << " refinements\n";
    return 0;
  }
  const AdvectionProblem ap = make_advection_problem(r0, width);
  std::vector<StudyRow> rows;
  std::vector<double> hs, l2s, h1s;
  for (const double h : h_list) {
    const int n = grid_n_for(h);
    const Mesh mesh = build_band_mesh(2, n, BandSpec{});
    const TemperPolicy policy = PowerLawPolicy{1.0, 3.0};
    const auto t0 = std::chrono::steady_clock::now();
    SparseSystem sys = assemble_advection_supg(mesh, ap.velocity, policy, ap.exact, ap.is_inflow, h);
    const Eigen::VectorXd sol = solve(sys, opt.solver);
    const DofMap dofs(mesh, 1);
    StudyRow row;
    row.study = "advection";
    row.h = h;
    row.l2 = l2_error(mesh, dofs, sol, ap.exact);
    row.h1_out = h1_error_outside_band(mesh, dofs, sol, ap.grad);
    row.C = 1;
    row.k = 3;
    row.Jmin = std::pow(h, 3);
    row.ndof = long(sys.matrix.rows());
    if (opt.timing)
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(row);
    hs.push_back(h);
    l2s.push_back(row.l2);
    h1s.push_back(row.h1_out);
  }
  const fs::path dir = resolve_out_dir(cli.out_dir);
  write_csv(rows, (dir / "advection.csv").string());
  emit_convergence_svg(rows, dir, "advection");
  std::cout << "wrote " << (dir / "advection.csv").string() << ", L2 slope "
            << fitted_slope(hs, l2s) << ", H1 slope " << fitted_slope(hs, h1s) << "\n";
  return 0;
}

int cmd_random_suite(const CommonOpts& cli, int n_tests, std::uint64_t seed) {
  if (cli.dry_run) {
    std::cout << "plan: random-suite, " << n_tests << " tests from seed " << seed << "\n";
    return 0;
  }
  RunOptions opt;
  const RandomSuiteResult res = random_suite(n_tests, seed, 40, opt);
  const fs::path dir = resolve_out_dir(cli.out_dir);
  write_csv(res.rows, (dir / "random_suite.csv").string());

  // paired scatter: per-test relative errors, tests ranked by reference error
  std::vector<std::size_t> order(res.rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return res.rows[a].jump < res.rows[b].jump; });
  PlotSeries tf{"TFEM rel L2", series_color(0), {}, {}}, rf{"reference rel L2", series_color(1), {}, {}};
  for (std::size_t r = 0; r < order.size(); ++r) {
    tf.x.push_back(double(r + 1));
    tf.y.push_back(res.rows[order[r]].l2);
    rf.x.push_back(double(r + 1));
    rf.y.push_back(res.rows[order[r]].jump);
  }
  LogLogPlot p("random_suite", "test rank", "relative L2 error");
  p.add_series(tf);
  p.add_series(rf);
  p.write((dir / "random_suite.svg").string());
  std::cout << "wrote " << (dir / "random_suite.csv").string() << "; H1 within 5% in "
            << res.within_5pct_h1 << "/" << n_tests << " tests, worst L2 ratio "
            << res.worst_l2_ratio << "\n";
  return 0;
}

int cmd_analyze_element(const std::vector<std::string>& vertex_args) {
  if (vertex_args.size() != 3) throw ConfigError("analyze-element needs exactly 3 vertices");
  std::array<std::array<double, 2>, 3> pts{};
  for (int i = 0; i < 3; ++i) {
    const std::string& s = vertex_args[std::size_t(i)];
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw ConfigError("vertex format: x,y");
    pts[std::size_t(i)] = {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  }
  const TriangleShape sh = shape_params(pts);
  std::cout << "flatness f      " << format_g17(sh.f) << "\n";
  std::cout << "symmetry s      " << format_g17(sh.s) << "\n";
  std::cout << "angles          " << format_g17(sh.theta[0]) << " " << format_g17(sh.theta[1])
            << " " << format_g17(sh.theta[2]) << "\n";
  std::cout << "cotangents      " << format_g17(sh.c1) << " " << format_g17(sh.c2) << " "
            << format_g17(sh.c3) << "\n";
  if (sh.f > 0.0) {
    const SpectralData sd = spectral(sh);
    std::cout << "lambda          0 " << format_g17(sd.lambda[1]) << " " << format_g17(sd.lambda[2])
              << "\n";
    std::cout << "energies        0 " << format_g17(sd.e[1]) << " " << format_g17(sd.e[2]) << "\n";
    const double asym2 = 1.5 * sh.f / (1.0 - sh.s + sh.s * sh.s);
    const double asym3 = 2.0 * (1.0 - sh.s + sh.s * sh.s) / sh.f;
    std::cout << "lambda2/asym    " << format_g17(sd.lambda[1] / asym2) << "\n";
    std::cout << "lambda3/asym    " << format_g17(sd.lambda[2] / asym3) << "\n";
    std::cout << "v2              " << sd.v[1].transpose() << "\n";
    std::cout << "v3              " << sd.v[2].transpose() << "\n";
  } else {
    std::cout << "degenerate element (f = 0): spectral closed forms undefined\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tempered finite element studies"};
  app.require_subcommand(1);

  CommonOpts common;
  int dim_flag = 0;
  double h_flag = 0.0;
  int n_left = 10, n_right = 50;
  int n_tests = 100;
  std::uint64_t seed = 7;
  std::vector<std::string> vertex_args;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* copt = sub->add_option("--config", common.config_path, "config file");
    if (needs_config) copt->required();
    sub->add_option("--out", common.out_dir, "output directory (TFEM_OUT overrides)");
    sub->add_flag("--dry-run", common.dry_run, "print the resolved plan without solving");
    sub->add_option("--jobs", common.jobs, "worker pool size");
  };

  auto* conv = app.add_subcommand("run-convergence", "manufactured convergence series");
  add_common(conv, true);
  auto* sweep = app.add_subcommand("sweep-c", "error sensitivity against C");
  add_common(sweep, false);
  sweep->add_option("--dim", dim_flag, "dimension (2 or 3)");
  sweep->add_option("--h", h_flag, "target mesh size (e.g. 0.0125 for 1/80)");
  auto* extent = app.add_subcommand("band-extent", "band length / surface studies");
  add_common(extent, false);
  auto* mortar = app.add_subcommand("mortar-demo", "stitch two non-conforming meshes");
  add_common(mortar, false);
  mortar->add_option("--nl", n_left, "left grid count");
  mortar->add_option("--nr", n_right, "right grid count");
  auto* elas = app.add_subcommand("elasticity", "plane strain convergence");
  add_common(elas, false);
  auto* adv = app.add_subcommand("advection", "SUPG advection convergence");
  add_common(adv, false);
  auto* rnd = app.add_subcommand("random-suite", "seeded random-function regression");
  add_common(rnd, false);
  rnd->add_option("--n", n_tests, "number of tests");
  rnd->add_option("--seed", seed, "base seed");
  auto* ana = app.add_subcommand("analyze-element", "triangle shape and spectrum table");
  ana->add_option("--vertices", vertex_args, "three vertices as x,y")->expected(3);

  CLI11_PARSE(app, argc, argv);

  try {
    if (conv->parsed()) return cmd_run_convergence(common);
    if (sweep->parsed()) return cmd_sweep_c(common, dim_flag, h_flag);
    if (extent->parsed()) return cmd_band_extent(common);
    if (mortar->parsed()) return cmd_mortar_demo(common, n_left, n_right);
    if (elas->parsed()) return cmd_elasticity(common);
    if (adv->parsed()) return cmd_advection(common);
    if (rnd->parsed()) return cmd_random_suite(common, n_tests, seed);
    if (ana->parsed()) return cmd_analyze_element(vertex_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}

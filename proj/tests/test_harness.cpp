#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "tfem/csv.hpp"
#include "tfem/harness.hpp"

using namespace tfem;

TEST_CASE("manufactured problems satisfy -lap u = f (finite differences)") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> uni(0.05, 0.95);
  const double eps = 1e-5;
  for (const auto& prob : {standard_problem_2d(), mirrored_problem_2d(), periodic_problem_2d(4),
                           random_problem(3).problem, random_problem(17).problem}) {
    for (int t = 0; t < 100; ++t) {
      const double x = uni(rng), y = uni(rng);
      const double lap = (prob.exact(x + eps, y, 0) + prob.exact(x - eps, y, 0) +
                          prob.exact(x, y + eps, 0) + prob.exact(x, y - eps, 0) -
                          4.0 * prob.exact(x, y, 0)) /
                         (eps * eps);
      CHECK(-lap == Catch::Approx(prob.source(x, y, 0)).margin(2e-3));
    }
  }
  const auto p3 = standard_problem_3d();
  for (int t = 0; t < 50; ++t) {
    const double x = uni(rng), y = uni(rng), z = uni(rng);
    const double lap =
        (p3.exact(x + eps, y, z) + p3.exact(x - eps, y, z) + p3.exact(x, y + eps, z) +
         p3.exact(x, y - eps, z) + p3.exact(x, y, z + eps) + p3.exact(x, y, z - eps) -
         6.0 * p3.exact(x, y, z)) /
        (eps * eps);
    CHECK(-lap == Catch::Approx(p3.source(x, y, z)).margin(2e-3));
  }
}

TEST_CASE("grid resolution rule") {
  CHECK(grid_n_for(0.1) == 14);
  CHECK(grid_n_for(1.0 / 14) == 20);
  CHECK(grid_n_for(0.05) == 28);
  CHECK(grid_n_for(1.0 / 28) == 40);
  CHECK(grid_n_for(1.0 / 80) == 114);
  CHECK(grid_n_for(1.0 / 160) == 226);
  CHECK(grid_n_for(1.0 / 640) == 906);
}

TEST_CASE("fitted slope recovers exact power laws") {
  std::vector<double> h, e;
  for (const double x : {0.1, 0.05, 0.025, 0.0125, 0.00625}) {
    h.push_back(x);
    e.push_back(3.0 * x * x);
  }
  CHECK(fitted_slope(h, e) == Catch::Approx(2.0).margin(1e-12));
  for (auto& v : e) v = 0.7 * std::pow(h[&v - &e[0]], 1.0);
  CHECK(fitted_slope(h, e) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("l2 error of the exact interpolant of a linear function vanishes") {
  const Mesh m = build_structured_mesh(2, 6);
  const DofMap dofs(m, 1);
  auto lin = [](double x, double y, double) { return 1.0 + 2.0 * x - y; };
  Eigen::VectorXd vals(dofs.num_dofs());
  for (Index i = 0; i < dofs.num_dofs(); ++i) {
    const auto& p = dofs.dof_point(i);
    vals(i) = lin(p[0], p[1], p[2]);
  }
  CHECK(l2_error(m, dofs, vals, lin) < 1e-13);
  auto lin_grad = [](double, double, double, double* g) {
    g[0] = 2.0;
    g[1] = -1.0;
  };
  CHECK(h1_error_outside_band(m, dofs, vals, lin_grad) < 1e-13);
}

TEST_CASE("short tempered convergence run has the right slopes") {
  MeshFamily fam;
  fam.band = true;
  const auto rep = run_convergence(standard_problem_2d(), fam, PowerLawPolicy{1.0, 3.0},
                                   {1.0 / 7, 1.0 / 10, 1.0 / 14, 1.0 / 20, 1.0 / 28});
  CHECK(rep.l2_slope > 1.8);
  CHECK(rep.l2_slope < 2.2);
  CHECK(rep.h1_slope > 0.85);
  CHECK(rep.h1_slope < 1.2);
  // rows carry the policy metadata
  for (const auto& r : rep.rows) {
    CHECK(r.C == 1.0);
    CHECK(r.k == 3.0);
    CHECK(r.Jmin == Catch::Approx(std::pow(r.h, 3.0)));
    CHECK(r.ndof > 0);
  }
}

TEST_CASE("tempered solution on a regular mesh equals standard fem") {
  MeshFamily fam;  // no band
  const auto prob = standard_problem_2d();
  const Mesh mesh = make_family_mesh(fam, 0.1);
  RunOptions opt;
  const auto tempered = solve_problem_on(mesh, 1, PowerLawPolicy{1.0, 3.0}, prob, 0.1, opt);
  const auto plain = solve_problem_on(mesh, 1, FixedPolicy{1e-300}, prob, 0.1, opt);
  CHECK((tempered.solution - plain.solution).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("random suite determinism") {
  const auto a = random_suite(3, 42, 16);
  const auto b = random_suite(3, 42, 16);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].l2 == b.rows[i].l2);
    CHECK(a.rows[i].h1_out == b.rows[i].h1_out);
    CHECK(csv_line(a.rows[i]) == csv_line(b.rows[i]));
  }
  const auto c = random_suite(3, 43, 16);
  CHECK(a.rows[0].l2 != c.rows[0].l2);
}

TEST_CASE("csv formatting round trips full precision") {
  StudyRow r;
  r.study = "t";
  r.h = 1.0 / 3.0;
  r.l2 = 1.2345678901234567e-5;
  const std::string line = csv_line(r);
  CHECK(line.find("0.33333333333333331") != std::string::npos);
  CHECK(line.find("1.2345678901234567e-05") != std::string::npos);
}

TEST_CASE("theorem 3.4 composite error is minimized near the optimal D") {
  // Positive-width band so the D parametrization is meaningful: hbar = h^2/2.
  const auto prob = mirrored_problem_2d();
  for (const double h_t : {1.0 / 20, 1.0 / 28}) {
    const int n = grid_n_for(h_t);
    BandSpec spec;
    spec.width = h_t * h_t / 2.0;
    const Mesh mesh = build_band_mesh(2, n, spec);
    // band J = base * width
    const double Jband = (1.0 / n) * spec.width;
    const double w1 = 2.0 * M_PI, w2 = 4.0 * M_PI * M_PI;
    const double Dopt = optimal_D(spec.width, h_t, w1, w2);
    auto composite = [&](double D) {
      const double Jmin_val = Jband / D;
      RunOptions opt;
      const auto out = solve_problem_on(mesh, 1, FixedPolicy{Jmin_val}, prob, h_t, opt);
      const DofMap dofs(mesh, 1);
      const double out_band = h1_seminorm_error(mesh, dofs, out.solution, prob.grad,
                                                H1Region::OutsideBand);
      const double in_band =
          h1_seminorm_error(mesh, dofs, out.solution, prob.grad, H1Region::BandOnly);
      return out_band * out_band + D * in_band * in_band;
    };
    const double at_opt = composite(Dopt);
    CHECK(at_opt <= composite(std::min(1.0, Dopt * 10.0)) * (1.0 + 1e-9));
    CHECK(at_opt <= composite(Dopt / 10.0) * (1.0 + 1e-9));
  }
}

TEST_CASE("standard fem keeps order on hbar = h^2 bands (no tempering)") {
  MeshFamily fam;
  fam.band = true;
  fam.hbar_rule = [](double h) { return h * h; };
  const auto rep = run_convergence(mirrored_problem_2d(), fam, FixedPolicy{1e-300},
                                   {1.0 / 10, 1.0 / 14, 1.0 / 20, 1.0 / 28, 1.0 / 40});
  CHECK(rep.h1_slope >= 0.9);
}

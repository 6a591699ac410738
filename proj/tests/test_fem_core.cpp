#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "tfem/dofs.hpp"
#include "tfem/mapping.hpp"
#include "tfem/mesh.hpp"
#include "tfem/quadrature.hpp"
#include "tfem/reference.hpp"
#include "tfem/tempering.hpp"

using namespace tfem;

namespace {
// exact integral of x^a y^b over the unit triangle: a! b! / (a+b+2)!
double tri_monomial(int a, int b) {
  auto fact = [](int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  return fact(a) * fact(b) / fact(a + b + 2);
}
double tet_monomial(int a, int b, int c) {
  auto fact = [](int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  return fact(a) * fact(b) * fact(c) / fact(a + b + c + 3);
}
}  // namespace

TEST_CASE("P1 nodal values and barycentric centroid") {
  const auto& re = reference_element(2, 1);
  const double v0[2] = {0.0, 0.0};
  auto s = shape_values(re, v0);
  CHECK(s(0) == Catch::Approx(1.0));
  CHECK(s(1) == Catch::Approx(0.0).margin(1e-14));
  CHECK(s(2) == Catch::Approx(0.0).margin(1e-14));
  const double c[2] = {1.0 / 3, 1.0 / 3};
  s = shape_values(re, c);
  for (int i = 0; i < 3; ++i) CHECK(s(i) == Catch::Approx(1.0 / 3));
}

TEST_CASE("P2 edge midpoint: vertex functions vanish, edge bubble is one") {
  const auto& re = reference_element(2, 2);
  const double mid[2] = {0.5, 0.0};
  const auto s = shape_values(re, mid);
  CHECK(s(0) == Catch::Approx(0.0).margin(1e-13));
  CHECK(s(1) == Catch::Approx(0.0).margin(1e-13));
  CHECK(s(2) == Catch::Approx(0.0).margin(1e-13));
  CHECK(s(3) == Catch::Approx(1.0));  // first node of edge (0,1)
}

TEST_CASE("P1 gradients are the constant rows") {
  const auto& re = reference_element(2, 1);
  const double p[2] = {0.3, 0.2};
  const auto g = shape_gradients(re, p);
  CHECK(g(0, 0) == Catch::Approx(-1.0));
  CHECK(g(0, 1) == Catch::Approx(-1.0));
  CHECK(g(1, 0) == Catch::Approx(1.0));
  CHECK(g(1, 1) == Catch::Approx(0.0).margin(1e-14));
  CHECK(g(2, 0) == Catch::Approx(0.0).margin(1e-14));
  CHECK(g(2, 1) == Catch::Approx(1.0));
}

TEST_CASE("partition of unity and zero gradient row sums, all orders") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int p = 1; p <= 4; ++p) {
    const auto& re = reference_element(2, p);
    for (int t = 0; t < 10; ++t) {
      double a = uni(rng), b = uni(rng);
      if (a + b > 1.0) {
        a = 1.0 - a;
        b = 1.0 - b;
      }
      const double xi[2] = {a, b};
      const auto s = shape_values(re, xi);
      CHECK(s.sum() == Catch::Approx(1.0).margin(1e-12));
      const auto g = shape_gradients(re, xi);
      CHECK(g.colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  const auto& tet = reference_element(3, 1);
  const double xi[3] = {0.2, 0.3, 0.1};
  CHECK(shape_values(tet, xi).sum() == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("P3 gradients match central finite differences") {
  const auto& re = reference_element(2, 3);
  const double pts[3][2] = {{0.21, 0.17}, {0.4, 0.35}, {0.05, 0.6}};
  const double eps = 1e-6;
  for (const auto& p : pts) {
    const auto g = shape_gradients(re, p);
    for (int d = 0; d < 2; ++d) {
      double xp[2] = {p[0], p[1]}, xm[2] = {p[0], p[1]};
      xp[d] += eps;
      xm[d] -= eps;
      const auto vp = shape_values(re, xp), vm = shape_values(re, xm);
      for (int i = 0; i < re.num_nodes(); ++i)
        CHECK(g(i, d) == Catch::Approx((vp(i) - vm(i)) / (2 * eps)).margin(5e-7));
    }
  }
}

TEST_CASE("shape evaluation rejects points outside the simplex") {
  const auto& re = reference_element(2, 1);
  const double bad[2] = {0.7, 0.7};
  CHECK_THROWS_AS(shape_values(re, bad), std::domain_error);
}

TEST_CASE("quadrature monomial exactness oracle") {
  for (const int deg : {1, 2, 4, 5, 6, 8}) {
    const auto& q = quadrature(2, deg);
    REQUIRE(q.exactness_degree >= deg);
    CHECK(q.weights.minCoeff() > 0.0);
    CHECK(q.weights.sum() == Catch::Approx(0.5).epsilon(1e-14));
    for (int a = 0; a + 0 <= q.exactness_degree; ++a)
      for (int b = 0; a + b <= q.exactness_degree; ++b) {
        double acc = 0.0;
        for (int i = 0; i < q.points.rows(); ++i)
          acc += q.weights(i) * std::pow(q.points(i, 0), a) * std::pow(q.points(i, 1), b);
        CHECK(acc == Catch::Approx(tri_monomial(a, b)).epsilon(1e-13));
      }
  }
}

TEST_CASE("quadrature named examples") {
  const auto& centroid = quadrature(2, 1);
  CHECK(centroid.points.rows() == 1);
  CHECK(centroid.weights(0) == Catch::Approx(0.5));

  const auto& q4 = quadrature(2, 4);
  double acc = 0.0;
  for (int i = 0; i < q4.points.rows(); ++i)
    acc += q4.weights(i) * q4.points(i, 0) * q4.points(i, 0) * q4.points(i, 1) * q4.points(i, 1);
  CHECK(acc == Catch::Approx(1.0 / 180).epsilon(1e-14));

  const auto& t2 = quadrature(3, 2);
  double xyz = 0.0;
  for (int i = 0; i < t2.points.rows(); ++i)
    xyz += t2.weights(i) * t2.points(i, 0) * t2.points(i, 1) * t2.points(i, 2);
  CHECK(xyz == Catch::Approx(1.0 / 720).epsilon(1e-13));
  CHECK(t2.weights.sum() == Catch::Approx(1.0 / 6).epsilon(1e-13));

  const auto& t4 = quadrature(3, 4);
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b)
      for (int c = 0; a + b + c <= 4; ++c) {
        double v = 0.0;
        for (int i = 0; i < t4.points.rows(); ++i)
          v += t4.weights(i) * std::pow(t4.points(i, 0), a) * std::pow(t4.points(i, 1), b) *
               std::pow(t4.points(i, 2), c);
        CHECK(v == Catch::Approx(tet_monomial(a, b, c)).margin(1e-15));
      }

  CHECK_THROWS_AS(quadrature(2, 9), std::invalid_argument);
}

TEST_CASE("mapping data: reference cell, collapsed cap, adjugate identity") {
  Mesh m;
  m.dim = 2;
  m.vertices = {{0, {0, 0, 0}}, {1, {1, 0, 0}}, {2, {0, 1, 0}}};
  Cell c;
  c.v = {0, 1, 2, -1};
  auto md = mapping_data(m, c);
  CHECK(md.J == Catch::Approx(1.0));
  CHECK((md.cofactor.topLeftCorner<2, 2>() - Eigen::Matrix2d::Identity()).norm() < 1e-14);

  const double h = 0.25, s = 0.3;
  m.vertices = {{0, {0, 0, 0}}, {1, {h, 0, 0}}, {2, {s * h, 0, 0}}};
  md = mapping_data(m, c);
  CHECK(md.J == 0.0);
  CHECK(md.cofactor(0, 0) == Catch::Approx(0.0).margin(1e-16));
  CHECK(md.cofactor(0, 1) == Catch::Approx(-s * h));
  CHECK(md.cofactor(1, 0) == Catch::Approx(0.0).margin(1e-16));
  CHECK(md.cofactor(1, 1) == Catch::Approx(h));

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    m.vertices = {{0, {uni(rng), uni(rng), 0}}, {1, {uni(rng), uni(rng), 0}}, {2, {uni(rng), uni(rng), 0}}};
    md = mapping_data(m, c);
    const Eigen::Matrix2d F = md.F.topLeftCorner<2, 2>();
    const Eigen::Matrix2d C = md.cofactor.topLeftCorner<2, 2>();
    CHECK((C * F - md.J * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("mapping data never produces NaN on degenerate 3d cells") {
  Mesh m;
  m.dim = 3;
  m.vertices = {{0, {0, 0, 0}}, {1, {1, 0, 0}}, {2, {0, 1, 0}}, {3, {0.5, 0.5, 0}}};
  Cell c;
  c.v = {0, 1, 2, 3};
  const auto md = mapping_data(m, c);
  CHECK(md.J == 0.0);
  CHECK(md.cofactor.allFinite());
}

namespace {
// W^{1,inf} / W^{2,inf} seminorms approximated on a 20x20 per-cell grid.
template <class F, class G>
double cap_interp_w1inf_error(double base, double hbar, double s, F&& u, G&& grad) {
  // cap: (0,0), (base,0), apex (s*base, hbar)
  const double x0[2] = {0, 0}, x1[2] = {base, 0}, x2[2] = {s * base, hbar};
  const double u0 = u(x0[0], x0[1]), u1 = u(x1[0], x1[1]), u2 = u(x2[0], x2[1]);
  // interpolant gradient (constant): solve 2x2
  Eigen::Matrix2d A;
  A << x1[0] - x0[0], x1[1] - x0[1], x2[0] - x0[0], x2[1] - x0[1];
  const Eigen::Vector2d rhs(u1 - u0, u2 - u0);
  const Eigen::Vector2d gi = A.fullPivLu().solve(rhs);
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20 - i; ++j) {
      const double a = i / 20.0, b = j / 20.0;
      const double x = x0[0] + a * (x1[0] - x0[0]) + b * (x2[0] - x0[0]);
      const double y = x0[1] + a * (x1[1] - x0[1]) + b * (x2[1] - x0[1]);
      double ge[2];
      grad(x, y, ge);
      worst = std::max(worst, std::hypot(ge[0] - gi(0), ge[1] - gi(1)));
    }
  return worst;
}
}  // namespace

TEST_CASE("circumradius interpolation bound on cap families") {
  // quadratic u: second derivatives bounded by |u|_{W2inf} = 2
  auto u = [](double x, double y) { return x * x + 0.5 * x * y; };
  auto grad = [](double x, double y, double* g) {
    g[0] = 2 * x + 0.5 * y;
    g[1] = 0.5 * x;
  };
  const double w2 = 2.0;  // max |D^2 u|
  const double h = 0.1;
  for (const double f : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    const double hbar = f * h;
    for (const double s : {0.5, 0.3, 0.8}) {
      const double err = cap_interp_w1inf_error(h, hbar, s, u, grad);
      CHECK(err <= kCircumradiusConstant * (h * h / hbar) * w2 * (1 + 1e-9));
    }
  }
  // u(x,y) = x^2 on one cap, per the stated bound with w2 = 2
  auto u2f = [](double x, double) { return x * x; };
  auto g2f = [](double x, double, double* g) {
    g[0] = 2 * x;
    g[1] = 0.0;
  };
  const double err = cap_interp_w1inf_error(0.1, 1e-3, 0.5, u2f, g2f);
  CHECK(err <= kCircumradiusConstant * (0.01 / 1e-3) * 2.0);
}

TEST_CASE("3d altitude interpolation bound on slab tetrahedra") {
  // tets from the extruded collapsed pattern with small altitude hbar
  auto u = [](double x, double y, double z) { return x * x + y * z; };
  auto grad = [](double x, double y, double z, double* g) {
    g[0] = 2 * x;
    g[1] = z;
    g[2] = y;
  };
  const double w2 = 2.0;
  BandSpec spec;
  spec.width = 1e-3;
  const Mesh m = build_band_mesh(3, 4, spec);
  const double h = std::sqrt(2.0) / 4.0;  // longest edge bound
  double worst_ratio = 0.0;
  for (const auto& c : m.cells) {
    if (c.tag != CellTag::Band) continue;
    // nodal interpolant gradient
    Eigen::Matrix3d A;
    Eigen::Vector3d rhs;
    const auto& p0 = m.point(c.v[0]);
    for (int k = 0; k < 3; ++k) {
      const auto& pk = m.point(c.v[std::size_t(k + 1)]);
      for (int d = 0; d < 3; ++d) A(k, d) = pk[std::size_t(d)] - p0[std::size_t(d)];
      rhs(k) = u(pk[0], pk[1], pk[2]) - u(p0[0], p0[1], p0[2]);
    }
    const Eigen::Vector3d gi = A.fullPivLu().solve(rhs);
    double worst = 0.0;
    for (int i = 0; i <= 8; ++i)
      for (int j = 0; j <= 8 - i; ++j)
        for (int k = 0; k <= 8 - i - j; ++k) {
          const double a = i / 8.0, b = j / 8.0, cc = k / 8.0;
          double x[3];
          for (int d = 0; d < 3; ++d)
            x[d] = p0[std::size_t(d)] + a * A(0, d) + b * A(1, d) + cc * A(2, d);
          double ge[3];
          grad(x[0], x[1], x[2], ge);
          worst = std::max(worst, std::sqrt((ge[0] - gi(0)) * (ge[0] - gi(0)) +
                                            (ge[1] - gi(1)) * (ge[1] - gi(1)) +
                                            (ge[2] - gi(2)) * (ge[2] - gi(2))));
        }
    worst_ratio = std::max(worst_ratio, worst / ((h * h / spec.width) * w2));
  }
  CHECK(worst_ratio <= kCircumradiusConstant);
}

TEST_CASE("interpolate reproduces linears and nodal values") {
  const Mesh m = build_structured_mesh(2, 10);
  const DofMap dofs(m, 1);
  auto lin = [](double x, double y, double) { return 2.0 * x - 3.0 * y + 0.25; };
  const auto vals = interpolate(dofs, lin);
  for (Index i = 0; i < dofs.num_dofs(); ++i) {
    const auto& p = dofs.dof_point(i);
    CHECK(vals[std::size_t(i)] == Catch::Approx(lin(p[0], p[1], p[2])).margin(1e-13));
  }
  auto wavy = [](double x, double y, double) { return std::sin(2 * M_PI * x) * std::cos(2 * M_PI * y); };
  const auto wv = interpolate(dofs, wavy);
  for (Index i = 0; i < dofs.num_dofs(); ++i) {
    const auto& p = dofs.dof_point(i);
    CHECK(wv[std::size_t(i)] == Catch::Approx(wavy(p[0], p[1], p[2])).margin(1e-13));
  }
}

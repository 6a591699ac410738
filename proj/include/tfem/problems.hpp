#pragma once

// Manufactured problems: the standard 2D/3D sine/cosine cases, the
// band-oscillatory variants used by the band-extent and locking studies,
// elasticity and advection setups, and the seeded random-function family
// whose source terms come from hand-coded Laplacians.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tfem/assembly.hpp"
#include "tfem/norms.hpp"

namespace tfem {

struct ManufacturedProblem {
  int dim = 2;
  ScalarField exact;
  GradField grad;
  ScalarField source;
  ScalarField dirichlet;  // trace of exact on the boundary
  std::string descriptor;
};

// u = sin(2 pi x) cos(2 pi y); vanishes on the x = 1/2 line.
inline ManufacturedProblem standard_problem_2d() {
  ManufacturedProblem p;
  p.dim = 2;
  const double c = 2.0 * M_PI;
  p.exact = [c](double x, double y, double) { return std::sin(c * x) * std::cos(c * y); };
  p.grad = [c](double x, double y, double, double* g) {
    g[0] = c * std::cos(c * x) * std::cos(c * y);
    g[1] = -c * std::sin(c * x) * std::sin(c * y);
  };
  p.source = [c](double x, double y, double) {
    return 2.0 * c * c * std::sin(c * x) * std::cos(c * y);
  };
  p.dirichlet = p.exact;
  p.descriptor = "poisson2d sin(2pi x) cos(2pi y)";
  return p;
}

// Mirrored problem: u = cos(2 pi x) sin(2 pi y), whose trace on x = 1/2 is
// -sin(2 pi y). This is the variant the vertical band actually feels.
inline ManufacturedProblem mirrored_problem_2d() {
  ManufacturedProblem p;
  p.dim = 2;
  const double c = 2.0 * M_PI;
  p.exact = [c](double x, double y, double) { return std::cos(c * x) * std::sin(c * y); };
  p.grad = [c](double x, double y, double, double* g) {
    g[0] = -c * std::sin(c * x) * std::sin(c * y);
    g[1] = c * std::cos(c * x) * std::cos(c * y);
  };
  p.source = [c](double x, double y, double) {
    return 2.0 * c * c * std::cos(c * x) * std::sin(c * y);
  };
  p.dirichlet = p.exact;
  p.descriptor = "poisson2d cos(2pi x) sin(2pi y)";
  return p;
}

// Band-periodic problem for the extent studies: u = cos(2 pi x) sin(2 pi m y)
// repeats every 1/m along the band so every extent multiple sees the same data.
inline ManufacturedProblem periodic_problem_2d(int m) {
  ManufacturedProblem p;
  p.dim = 2;
  const double c = 2.0 * M_PI, cm = 2.0 * M_PI * m;
  p.exact = [=](double x, double y, double) { return std::cos(c * x) * std::sin(cm * y); };
  p.grad = [=](double x, double y, double, double* g) {
    g[0] = -c * std::sin(c * x) * std::sin(cm * y);
    g[1] = cm * std::cos(c * x) * std::cos(cm * y);
  };
  p.source = [=](double x, double y, double) {
    return (c * c + cm * cm) * std::cos(c * x) * std::sin(cm * y);
  };
  p.dirichlet = p.exact;
  p.descriptor = "poisson2d cos(2pi x) sin(2pi " + std::to_string(m) + " y)";
  return p;
}

// u = cos(2 pi x) sin(2 pi y) cos(2 pi z), f = 12 pi^2 u.
inline ManufacturedProblem standard_problem_3d() {
  ManufacturedProblem p;
  p.dim = 3;
  const double c = 2.0 * M_PI;
  p.exact = [c](double x, double y, double z) {
    return std::cos(c * x) * std::sin(c * y) * std::cos(c * z);
  };
  p.grad = [c](double x, double y, double z, double* g) {
    g[0] = -c * std::sin(c * x) * std::sin(c * y) * std::cos(c * z);
    g[1] = c * std::cos(c * x) * std::cos(c * y) * std::cos(c * z);
    g[2] = -c * std::cos(c * x) * std::sin(c * y) * std::sin(c * z);
  };
  p.source = [c](double x, double y, double z) {
    return 3.0 * c * c * std::cos(c * x) * std::sin(c * y) * std::cos(c * z);
  };
  p.dirichlet = p.exact;
  p.descriptor = "poisson3d cos(2pi x) sin(2pi y) cos(2pi z)";
  return p;
}

// --- elasticity --------------------------------------------------------------

struct ElasticityProblem {
  std::function<Eigen::Vector2d(double, double)> exact;
  std::function<Eigen::Matrix2d(double, double)> exact_grad;  // rows: grad u_x, grad u_y
  std::function<Eigen::Vector2d(double, double)> body_force;
  MaterialPlaneStrain material;
  std::string descriptor;
};

// u = (sin 2pix sin 2piy, cos 2pix cos 2piy) is divergence free, so the
// plane strain body force reduces to f = mu * 8 pi^2 * u.
inline ElasticityProblem make_elasticity_problem(double E = 1.0, double nu = 0.3) {
  ElasticityProblem p;
  const double c = 2.0 * M_PI;
  const double mu = E / (2.0 * (1.0 + nu));
  p.exact = [c](double x, double y) {
    return Eigen::Vector2d(std::sin(c * x) * std::sin(c * y), std::cos(c * x) * std::cos(c * y));
  };
  p.exact_grad = [c](double x, double y) {
    Eigen::Matrix2d g;
    g << c * std::cos(c * x) * std::sin(c * y), c * std::sin(c * x) * std::cos(c * y),
        -c * std::sin(c * x) * std::cos(c * y), -c * std::cos(c * x) * std::sin(c * y);
    return g;
  };
  p.body_force = [c, mu](double x, double y) {
    return Eigen::Vector2d(2.0 * mu * c * c * std::sin(c * x) * std::sin(c * y),
                           2.0 * mu * c * c * std::cos(c * x) * std::cos(c * y));
  };
  p.material = {E, nu, CellTag::Interior};
  p.descriptor = "plane-strain manufactured (div-free)";
  return p;
}

// --- advection ---------------------------------------------------------------

struct AdvectionProblem {
  VectorField velocity;           // v = (y, -x): circular streamlines
  ScalarField exact;              // constant along streamlines
  GradField grad;
  std::function<bool(int side)> is_inflow;
  double r0 = 0.5, width = 0.2;   // smoothstep profile parameters
  std::string descriptor;
};

inline double smoothstep01(double t) {
  const double u = std::clamp(t, 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

inline AdvectionProblem make_advection_problem(double r0 = 0.5, double width = 0.2) {
  AdvectionProblem p;
  p.r0 = r0;
  p.width = width;
  p.velocity = [](double x, double y) { return Eigen::Vector2d(y, -x); };
  p.exact = [r0, width](double x, double y, double) {
    const double r = std::hypot(x, y);
    return smoothstep01((r - (r0 - width / 2.0)) / width);
  };
  p.grad = [r0, width](double x, double y, double, double* g) {
    const double r = std::hypot(x, y);
    const double t = (r - (r0 - width / 2.0)) / width;
    double ds = 0.0;
    if (t > 0.0 && t < 1.0) ds = (6.0 * t - 6.0 * t * t) / width;
    const double rx = r > 1e-300 ? x / r : 0.0;
    const double ry = r > 1e-300 ? y / r : 0.0;
    g[0] = ds * rx;
    g[1] = ds * ry;
  };
  // v = (y, -x): inflow where v . n < 0, i.e. the left (x=0) and top (y=1) sides
  p.is_inflow = [](int side) { return side == 0 || side == 3; };
  p.descriptor = "advection v=(y,-x), smoothstep inflow";
  return p;
}

// --- random-function family ---------------------------------------------------

struct RandomProblemSpec {
  std::uint64_t seed = 0;
  double Lx = 1.0, Ly = 1.0;       // rectangle extents
  double band_fraction = 1.0;      // band length as a fraction of Ly
  ManufacturedProblem problem;     // closed-form u with hand-coded Laplacian
};

// u = linear + quadratic + A_s sin(k1 x + k2 y + p) + A_c cos(k3 x + k4 y + q)
//     + A_g exp(-((x-cx)^2 + (y-cy)^2) / (2 sg^2))
inline RandomProblemSpec random_problem(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 6364136223846793005ULL + 1442695040888963407ULL);
  auto uni = [&](double a, double b) {
    return a + (b - a) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  };
  RandomProblemSpec spec;
  spec.seed = seed;
  spec.Lx = uni(0.6, 1.4);
  spec.Ly = uni(0.6, 1.4);
  spec.band_fraction = uni(0.3, 1.0);

  const double a0 = uni(-1, 1), ax = uni(-1, 1), ay = uni(-1, 1);
  const double qxx = uni(-1, 1), qxy = uni(-1, 1), qyy = uni(-1, 1);
  const double As = uni(0.2, 1.0), k1 = uni(1.0, 6.0), k2 = uni(1.0, 6.0), ph = uni(0, 6.28);
  const double Ac = uni(0.2, 1.0), k3 = uni(1.0, 6.0), k4 = uni(1.0, 6.0), qh = uni(0, 6.28);
  const double Ag = uni(0.3, 1.5), cx = uni(0.2, 0.8) * spec.Lx, cy = uni(0.2, 0.8) * spec.Ly;
  const double sg = uni(0.08, 0.3);

  ManufacturedProblem p;
  p.dim = 2;
  p.exact = [=](double x, double y, double) {
    const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
    return a0 + ax * x + ay * y + qxx * x * x + qxy * x * y + qyy * y * y +
           As * std::sin(k1 * x + k2 * y + ph) + Ac * std::cos(k3 * x + k4 * y + qh) +
           Ag * std::exp(-r2 / (2 * sg * sg));
  };
  p.grad = [=](double x, double y, double, double* g) {
    const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
    const double e = Ag * std::exp(-r2 / (2 * sg * sg));
    g[0] = ax + 2 * qxx * x + qxy * y + As * k1 * std::cos(k1 * x + k2 * y + ph) -
           Ac * k3 * std::sin(k3 * x + k4 * y + qh) - e * (x - cx) / (sg * sg);
    g[1] = ay + qxy * x + 2 * qyy * y + As * k2 * std::cos(k1 * x + k2 * y + ph) -
           Ac * k4 * std::sin(k3 * x + k4 * y + qh) - e * (y - cy) / (sg * sg);
  };
  // source f = -lap u, each term differentiated by hand
  p.source = [=](double x, double y, double) {
    const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
    const double e = Ag * std::exp(-r2 / (2 * sg * sg));
    const double lap_quad = 2 * qxx + 2 * qyy;
    const double lap_sin = -(k1 * k1 + k2 * k2) * As * std::sin(k1 * x + k2 * y + ph);
    const double lap_cos = -(k3 * k3 + k4 * k4) * Ac * std::cos(k3 * x + k4 * y + qh);
    const double lap_gauss = e * (r2 / (sg * sg * sg * sg) - 2.0 / (sg * sg));
    return -(lap_quad + lap_sin + lap_cos + lap_gauss);
  };
  p.dirichlet = p.exact;
  p.descriptor = "random seed " + std::to_string(seed);
  spec.problem = std::move(p);
  return spec;
}

}  // namespace tfem

#pragma once

// Closed-form spectral analysis of the P1 Laplace stiffness matrix on a
// triangle: cotangent matrix, flatness/symmetry shape parameters, eigenpairs
// and modal energies, and the zero-measure kinematic limit.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>

namespace tfem {

struct TriangleShape {
  double f = 0.0;                    // flatness = altitude / longest edge
  double s = 0.0;                    // foot-of-altitude split fraction
  std::array<double, 3> theta{};     // angles at x1, x2, x3 (x3 = apex)
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double c = 0.0;                    // c1 + c2 + c3
};

struct SpectralData {
  std::array<double, 3> lambda{};              // 0 <= lambda2 <= lambda3
  std::array<Eigen::Vector3d, 3> v{};          // unit eigenvectors
  std::array<double, 3> e{};                   // modal energies lambda_i |v_i|^2 / 2
};

inline TriangleShape shape_params(const std::array<std::array<double, 2>, 3>& pts) {
  auto dist2 = [&](int i, int j) {
    const double dx = pts[std::size_t(i)][0] - pts[std::size_t(j)][0];
    const double dy = pts[std::size_t(i)][1] - pts[std::size_t(j)][1];
    return dx * dx + dy * dy;
  };
  const double l01 = dist2(0, 1), l12 = dist2(1, 2), l20 = dist2(2, 0);
  if (l01 == 0.0 && l12 == 0.0 && l20 == 0.0)
    throw std::invalid_argument("shape_params: all vertices coincide");
  // longest edge; ties broken by the lexicographically smallest vertex pair
  int a = 0, b = 1, apex = 2;
  double best = l01;
  if (l12 > best) { best = l12; a = 1; b = 2; apex = 0; }
  if (l20 > best) { best = l20; a = 0; b = 2; apex = 1; }
  const double len = std::sqrt(best);

  const double ex = pts[std::size_t(b)][0] - pts[std::size_t(a)][0];
  const double ey = pts[std::size_t(b)][1] - pts[std::size_t(a)][1];
  const double px = pts[std::size_t(apex)][0] - pts[std::size_t(a)][0];
  const double py = pts[std::size_t(apex)][1] - pts[std::size_t(a)][1];
  const double l1 = (px * ex + py * ey) / len;           // foot split along the edge
  const double height = std::abs(px * ey - py * ex) / len;

  TriangleShape sh;
  sh.f = height / len;
  sh.s = l1 / len;
  sh.c1 = sh.f > 0.0 ? sh.s / sh.f : std::numeric_limits<double>::infinity();
  sh.c2 = sh.f > 0.0 ? (1.0 - sh.s) / sh.f : std::numeric_limits<double>::infinity();
  sh.c3 = sh.f > 0.0 ? sh.f - sh.s * (1.0 - sh.s) / sh.f : -std::numeric_limits<double>::infinity();
  sh.c = sh.f > 0.0 ? sh.f + (1.0 - sh.s + sh.s * sh.s) / sh.f : std::numeric_limits<double>::infinity();
  sh.theta[0] = std::atan2(sh.f, sh.s);
  sh.theta[1] = std::atan2(sh.f, 1.0 - sh.s);
  sh.theta[2] = M_PI - sh.theta[0] - sh.theta[1];
  return sh;
}

// The cotangent matrix in shape order (x1, x2 = longest-edge endpoints,
// x3 = apex). Note this matrix equals exactly twice the P1 stiffness
// integral; the spectral identities below (lambda2 * lambda3 = 3) hold for
// this scaling.
inline Eigen::Matrix3d cotangent_stiffness(const TriangleShape& sh) {
  if (!(sh.f > 0.0)) throw std::domain_error("cotangent_stiffness: degenerate shape (f = 0)");
  Eigen::Matrix3d K;
  K << sh.c2 + sh.c3, -sh.c3, -sh.c2,
       -sh.c3, sh.c1 + sh.c3, -sh.c1,
       -sh.c2, -sh.c1, sh.c1 + sh.c2;
  return K;
}

// Zero-measure kinematic limit: a nodal vector u is admissible (finite
// energy) iff u . (1-s, s, -1) = 0, i.e. u3 interpolates u1, u2.
inline Eigen::Vector3d limit_kinematics(double s) {
  if (s < 0.0 || s > 1.0) throw std::invalid_argument("limit_kinematics: s must be in [0,1]");
  return Eigen::Vector3d(1.0 - s, s, -1.0);
}

inline SpectralData spectral(const TriangleShape& sh) {
  if (!(sh.f > 0.0)) throw std::domain_error("spectral: degenerate shape (f = 0)");
  const double c = sh.c;
  const double disc = c * c - 3.0;
  if (disc < -1e-12) throw std::domain_error("spectral: c^2 < 3 (invalid shape parameters)");
  const double beta = std::sqrt(std::max(disc, 0.0));
  SpectralData sd;
  const double lambda3 = c + beta;
  const double lambda2 = 3.0 / (c + beta);  // stable form of c - beta
  sd.lambda = {0.0, lambda2, lambda3};

  sd.v[0] = Eigen::Vector3d(1, 1, 1).normalized();
  if (beta < 1e-14) {
    // equilateral: the lambda2 = lambda3 eigenspace is the constant's complement
    sd.v[1] = Eigen::Vector3d(1, -1, 0).normalized();
    sd.v[2] = Eigen::Vector3d(1, 1, -2).normalized();
  } else {
    Eigen::Vector3d v2(sh.c3 - sh.c1 - beta, -sh.c3 + sh.c2 + beta, sh.c1 - sh.c2);
    const double alpha = (2 * sh.c1 - sh.c2 - sh.c3 + beta) / (sh.c1 + sh.c2 - 2 * sh.c3 + 2 * beta);
    Eigen::Vector3d v3(1.0 - alpha, alpha, -1.0);
    sd.v[1] = v2.normalized();
    sd.v[2] = v3.normalized();
    if (sd.v[2](2) > 0) sd.v[2] = -sd.v[2];
    if (sd.v[1](0) < 0) sd.v[1] = -sd.v[1];
  }
  for (int i = 0; i < 3; ++i) sd.e[std::size_t(i)] = sd.lambda[std::size_t(i)] * sd.v[std::size_t(i)].squaredNorm() / 2.0;
  return sd;
}

}  // namespace tfem

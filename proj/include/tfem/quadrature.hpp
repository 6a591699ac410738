#pragma once

// Symmetric simplex quadrature with strictly positive weights.
// 2D: Dunavant rules of exactness 1, 2, 4, 5, 6, 8; 3D: exactness 1 and 4.
// A request resolves to the smallest tabulated rule of at least the asked
// degree (rules with negative weights are not used).

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace tfem {

struct QuadratureRule {
  Eigen::MatrixXd points;   // (nq x dim) reference coordinates
  Eigen::VectorXd weights;  // sum to the reference-simplex measure
  int exactness_degree = 0;
};

namespace detail {

inline void add_perm3(std::vector<std::array<double, 3>>& pts, std::vector<double>& w,
                      double a, double b, double weight) {
  // barycentric orbit of (a, a, b) on the triangle; stored as (xi, eta)
  const double c = 1.0 - a - b;
  (void)c;
  pts.push_back({a, a, 0});
  pts.push_back({b, a, 0});
  pts.push_back({a, b, 0});
  w.insert(w.end(), 3, weight);
}

inline QuadratureRule make_rule_2d(int degree) {
  std::vector<std::array<double, 3>> pts;
  std::vector<double> w;
  switch (degree) {
    case 1:
      pts.push_back({1.0 / 3.0, 1.0 / 3.0, 0});
      w.push_back(0.5);
      break;
    case 2:
      add_perm3(pts, w, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0);
      break;
    case 4:
      add_perm3(pts, w, 0.445948490915965, 1.0 - 2 * 0.445948490915965,
                0.223381589678011 / 2.0);
      add_perm3(pts, w, 0.091576213509771, 1.0 - 2 * 0.091576213509771,
                0.109951743655322 / 2.0);
      break;
    case 5:
      pts.push_back({1.0 / 3.0, 1.0 / 3.0, 0});
      w.push_back(0.225 / 2.0);
      add_perm3(pts, w, 0.470142064105115, 1.0 - 2 * 0.470142064105115,
                0.132394152788506 / 2.0);
      add_perm3(pts, w, 0.101286507323456, 1.0 - 2 * 0.101286507323456,
                0.125939180544827 / 2.0);
      break;
    case 6:
      add_perm3(pts, w, 0.249286745170910, 1.0 - 2 * 0.249286745170910,
                0.116786275726379 / 2.0);
      add_perm3(pts, w, 0.063089014491502, 1.0 - 2 * 0.063089014491502,
                0.050844906370207 / 2.0);
      {
        // orbit of three distinct barycentric coordinates: 6 points
        const double a = 0.310352451033785, b = 0.053145049844816;
        const double c = 1.0 - a - b;
        const double ww = 0.082851075618374 / 2.0;
        const double xs[6][2] = {{a, b}, {b, a}, {a, c}, {c, a}, {b, c}, {c, b}};
        for (auto& xy : xs) {
          pts.push_back({xy[0], xy[1], 0});
          w.push_back(ww);
        }
      }
      break;
    case 8:
      pts.push_back({1.0 / 3.0, 1.0 / 3.0, 0});
      w.push_back(0.144315607677787 / 2.0);
      add_perm3(pts, w, 0.459292588292723, 1.0 - 2 * 0.459292588292723,
                0.095091634413245 / 2.0);
      add_perm3(pts, w, 0.170569307751760, 1.0 - 2 * 0.170569307751760,
                0.103217370534718 / 2.0);
      add_perm3(pts, w, 0.050547228317031, 1.0 - 2 * 0.050547228317031,
                0.032458497623198 / 2.0);
      {
        const double a = 0.263112829634638, b = 0.008394777409958;
        const double c = 1.0 - a - b;
        const double ww = 0.027230314174435 / 2.0;
        const double xs[6][2] = {{a, b}, {b, a}, {a, c}, {c, a}, {b, c}, {c, b}};
        for (auto& xy : xs) {
          pts.push_back({xy[0], xy[1], 0});
          w.push_back(ww);
        }
      }
      break;
    default:
      throw std::invalid_argument("make_rule_2d: no tabulated rule");
  }
  QuadratureRule rule;
  rule.points.resize(int(pts.size()), 2);
  rule.weights.resize(int(pts.size()));
  for (int i = 0; i < int(pts.size()); ++i) {
    rule.points(i, 0) = pts[std::size_t(i)][0];
    rule.points(i, 1) = pts[std::size_t(i)][1];
    rule.weights(i) = w[std::size_t(i)];
  }
  rule.exactness_degree = degree;
  return rule;
}

inline QuadratureRule make_rule_3d(int degree) {
  std::vector<std::array<double, 3>> pts;
  std::vector<double> w;
  if (degree == 1) {
    pts.push_back({0.25, 0.25, 0.25});
    w.push_back(1.0 / 6.0);
  } else if (degree == 4) {
    // Keast degree-4, 14 points, positive weights (barycentric orbits).
    const double a1 = 0.3108859192633005, w1 = 0.018781320953002642;
    const double a2 = 0.09273525031089123, w2 = 0.012248840519393658;
    const double a3 = 0.045503704125649649, w3 = 0.007091003462846911;
    auto orbit4 = [&](double a, double weight) {
      const double b = 1.0 - 3.0 * a;
      const double coords[4][4] = {{b, a, a, a}, {a, b, a, a}, {a, a, b, a}, {a, a, a, b}};
      for (auto& bc : coords) {
        pts.push_back({bc[1], bc[2], bc[3]});
        w.push_back(weight);
      }
    };
    orbit4(a1, w1);
    orbit4(a2, w2);
    const double b3 = 0.5 - a3;
    const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (auto& pr : pairs) {
      double bc[4] = {a3, a3, a3, a3};
      bc[pr[0]] = b3;
      bc[pr[1]] = b3;
      pts.push_back({bc[1], bc[2], bc[3]});
      w.push_back(w3);
    }
  } else {
    throw std::invalid_argument("make_rule_3d: no tabulated rule");
  }
  QuadratureRule rule;
  rule.points.resize(int(pts.size()), 3);
  rule.weights.resize(int(pts.size()));
  for (int i = 0; i < int(pts.size()); ++i) {
    for (int d = 0; d < 3; ++d) rule.points(i, d) = pts[std::size_t(i)][std::size_t(d)];
    rule.weights(i) = w[std::size_t(i)];
  }
  rule.exactness_degree = degree;
  return rule;
}

}  // namespace detail

inline const QuadratureRule& quadrature(int dim, int exactness_degree) {
  static const std::vector<QuadratureRule> rules2d = [] {
    std::vector<QuadratureRule> r;
    for (int d : {1, 2, 4, 5, 6, 8}) r.push_back(detail::make_rule_2d(d));
    return r;
  }();
  static const std::vector<QuadratureRule> rules3d = [] {
    std::vector<QuadratureRule> r;
    for (int d : {1, 4}) r.push_back(detail::make_rule_3d(d));
    return r;
  }();
  const auto& rules = dim == 2 ? rules2d : dim == 3 ? rules3d : rules2d;
  if (dim != 2 && dim != 3) throw std::invalid_argument("quadrature: dim must be 2 or 3");
  if (exactness_degree < 0 || exactness_degree > 8)
    throw std::invalid_argument("quadrature: supported exactness degree is 0..8");
  if (dim == 3 && exactness_degree > 4)
    throw std::invalid_argument("quadrature: 3D rules tabulated up to degree 4");
  for (const auto& r : rules)
    if (r.exactness_degree >= exactness_degree) return r;
  throw std::invalid_argument("quadrature: unsupported degree");
}

}  // namespace tfem

#pragma once

// Lagrange reference elements: P1..P4 on the unit triangle, P1 on the unit
// tetrahedron. Basis coefficients are solved once from the node Vandermonde
// in monomial form; values and gradients are evaluated from those.

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace tfem {

struct ReferenceElement {
  int dim = 2;
  int order = 1;
  Eigen::MatrixXd nodes;   // local node coordinates, (nn x dim)
  Eigen::MatrixXd coeffs;  // basis i = sum_k coeffs(k, i) * monomial_k
  Eigen::MatrixXi powers;  // monomial exponents, (nm x dim)

  int num_nodes() const { return int(nodes.rows()); }
};

namespace detail {

inline Eigen::MatrixXi simplex_powers(int dim, int p) {
  std::vector<std::array<int, 3>> pw;
  if (dim == 2) {
    for (int a = 0; a <= p; ++a)
      for (int b = 0; b <= p - a; ++b) pw.push_back({a, b, 0});
  } else {
    for (int a = 0; a <= p; ++a)
      for (int b = 0; b <= p - a; ++b)
        for (int c = 0; c <= p - a - b; ++c) pw.push_back({a, b, c});
  }
  Eigen::MatrixXi P(int(pw.size()), dim);
  for (int i = 0; i < int(pw.size()); ++i)
    for (int d = 0; d < dim; ++d) P(i, d) = pw[std::size_t(i)][std::size_t(d)];
  return P;
}

// Equispaced Lagrange nodes in the conventional order: vertices, then edge
// nodes (per edge, from the first vertex of the edge), then interior nodes.
inline Eigen::MatrixXd simplex_nodes_2d(int p) {
  std::vector<std::array<double, 2>> pts;
  const auto at = [p](int i, int j) {
    return std::array<double, 2>{double(i) / p, double(j) / p};
  };
  pts.push_back({0.0, 0.0});
  pts.push_back({1.0, 0.0});
  pts.push_back({0.0, 1.0});
  // edges: (0,1), (1,2), (2,0)
  for (int k = 1; k < p; ++k) pts.push_back(at(k, 0));
  for (int k = 1; k < p; ++k) pts.push_back(at(p - k, k));
  for (int k = 1; k < p; ++k) pts.push_back(at(0, p - k));
  for (int j = 1; j < p; ++j)
    for (int i = 1; i < p - j; ++i) pts.push_back(at(i, j));
  Eigen::MatrixXd N(int(pts.size()), 2);
  for (int i = 0; i < int(pts.size()); ++i) {
    N(i, 0) = pts[std::size_t(i)][0];
    N(i, 1) = pts[std::size_t(i)][1];
  }
  return N;
}

inline double eval_monomial(const Eigen::MatrixXi& powers, int k, const double* xi, int dim) {
  double v = 1.0;
  for (int d = 0; d < dim; ++d)
    for (int e = 0; e < powers(k, d); ++e) v *= xi[d];
  return v;
}

}  // namespace detail

inline const ReferenceElement& reference_element(int dim, int order) {
  static std::vector<ReferenceElement> cache = [] {
    std::vector<ReferenceElement> all;
    for (int p = 1; p <= 4; ++p) {
      ReferenceElement re;
      re.dim = 2;
      re.order = p;
      re.nodes = detail::simplex_nodes_2d(p);
      re.powers = detail::simplex_powers(2, p);
      const int nn = re.num_nodes();
      Eigen::MatrixXd V(nn, nn);
      for (int i = 0; i < nn; ++i) {
        const double xi[2] = {re.nodes(i, 0), re.nodes(i, 1)};
        for (int k = 0; k < nn; ++k) V(i, k) = detail::eval_monomial(re.powers, k, xi, 2);
      }
      re.coeffs = V.fullPivLu().solve(Eigen::MatrixXd::Identity(nn, nn));
      all.push_back(std::move(re));
    }
    ReferenceElement tet;
    tet.dim = 3;
    tet.order = 1;
    tet.nodes.resize(4, 3);
    tet.nodes << 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1;
    tet.powers = detail::simplex_powers(3, 1);
    Eigen::MatrixXd V(4, 4);
    for (int i = 0; i < 4; ++i) {
      const double xi[3] = {tet.nodes(i, 0), tet.nodes(i, 1), tet.nodes(i, 2)};
      for (int k = 0; k < 4; ++k) V(i, k) = detail::eval_monomial(tet.powers, k, xi, 3);
    }
    tet.coeffs = V.fullPivLu().solve(Eigen::MatrixXd::Identity(4, 4));
    all.push_back(std::move(tet));
    return all;
  }();
  if (dim == 2 && order >= 1 && order <= 4) return cache[std::size_t(order - 1)];
  if (dim == 3 && order == 1) return cache[4];
  throw std::invalid_argument("reference_element: unsupported (dim, order)");
}

inline bool inside_reference_simplex(const ReferenceElement& re, const double* xi,
                                     double tol = 1e-12) {
  double s = 0.0;
  for (int d = 0; d < re.dim; ++d) {
    if (xi[d] < -tol) return false;
    s += xi[d];
  }
  return s <= 1.0 + tol;
}

// Values of all local basis functions at a reference point; they sum to 1.
inline Eigen::VectorXd shape_values(const ReferenceElement& re, const double* xi) {
  if (!inside_reference_simplex(re, xi))
    throw std::domain_error("shape_values: point outside the reference simplex");
  const int nn = re.num_nodes();
  Eigen::VectorXd mono(nn);
  for (int k = 0; k < nn; ++k) mono(k) = detail::eval_monomial(re.powers, k, xi, re.dim);
  return re.coeffs.transpose() * mono;
}

// Reference-coordinate gradients, one row per basis function; rows sum to 0.
inline Eigen::MatrixXd shape_gradients(const ReferenceElement& re, const double* xi) {
  if (!inside_reference_simplex(re, xi))
    throw std::domain_error("shape_gradients: point outside the reference simplex");
  const int nn = re.num_nodes();
  Eigen::MatrixXd dmono(nn, re.dim);
  for (int k = 0; k < nn; ++k)
    for (int d = 0; d < re.dim; ++d) {
      const int e = re.powers(k, d);
      if (e == 0) {
        dmono(k, d) = 0.0;
        continue;
      }
      double v = double(e);
      for (int dd = 0; dd < re.dim; ++dd) {
        const int ee = re.powers(k, dd) - (dd == d ? 1 : 0);
        for (int q = 0; q < ee; ++q) v *= xi[dd];
      }
      dmono(k, d) = v;
    }
  return re.coeffs.transpose() * dmono;
}

}  // namespace tfem

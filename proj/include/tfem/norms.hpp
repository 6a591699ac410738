#pragma once

// Error norms against closed-form exact solutions: L2 over the domain with
// the true |J| (zero-measure cells contribute nothing) and the H1 seminorm
// restricted to cells outside the band.

#include <Eigen/Dense>
#include <functional>

#include "tfem/assembly.hpp"
#include "tfem/dofs.hpp"
#include "tfem/mapping.hpp"
#include "tfem/mesh.hpp"
#include "tfem/quadrature.hpp"

namespace tfem {

using GradField = std::function<void(double, double, double, double*)>;  // fills dim components

namespace detail {
inline int error_quad_degree(int dim, int order) {
  const int d = std::max(4, 2 * order);
  return dim == 3 ? std::min(d, 4) : d;
}
}  // namespace detail

inline double l2_error(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& solution,
                       const ScalarField& exact) {
  const int dim = mesh.dim;
  const detail::RefData ref(dim, dofs.order(), detail::error_quad_degree(dim, dofs.order()));
  double acc = 0.0;
  const int nn = ref.re->num_nodes();
  for (std::size_t ci = 0; ci < mesh.num_cells(); ++ci) {
    const MappingData md = mapping_data(mesh, mesh.cells[ci]);
    const double aJ = std::abs(md.J);
    if (aJ == 0.0) continue;
    for (int q = 0; q < ref.quad->points.rows(); ++q) {
      const double xi[3] = {ref.quad->points(q, 0), ref.quad->points(q, 1),
                            dim == 3 ? ref.quad->points(q, 2) : 0.0};
      const auto x = detail::map_point(mesh, mesh.cells[ci], md, xi);
      double uh = 0.0;
      for (int a = 0; a < nn; ++a)
        uh += ref.values[std::size_t(q)](a) * solution(dofs.cell_dof(ci, a));
      const double du = uh - exact(x[0], x[1], x[2]);
      acc += ref.quad->weights(q) * aJ * du * du;
    }
  }
  return std::sqrt(acc);
}

enum class H1Region { OutsideBand, BandOnly, Everywhere };

inline double h1_seminorm_error(const Mesh& mesh, const DofMap& dofs,
                                const Eigen::VectorXd& solution, const GradField& exact_grad,
                                H1Region region = H1Region::OutsideBand) {
  const int dim = mesh.dim;
  const detail::RefData ref(dim, dofs.order(), detail::error_quad_degree(dim, dofs.order()));
  double acc = 0.0;
  const int nn = ref.re->num_nodes();
  for (std::size_t ci = 0; ci < mesh.num_cells(); ++ci) {
    const Cell& cell = mesh.cells[ci];
    if (region == H1Region::OutsideBand && cell.tag == CellTag::Band) continue;
    if (region == H1Region::BandOnly && cell.tag != CellTag::Band) continue;
    const MappingData md = mapping_data(mesh, cell);
    const double aJ = std::abs(md.J);
    if (aJ == 0.0) continue;
    const auto C = md.cofactor.topLeftCorner(dim, dim);
    Eigen::VectorXd uloc(nn);
    for (int a = 0; a < nn; ++a) uloc(a) = solution(dofs.cell_dof(ci, a));
    for (int q = 0; q < ref.quad->points.rows(); ++q) {
      const double xi[3] = {ref.quad->points(q, 0), ref.quad->points(q, 1),
                            dim == 3 ? ref.quad->points(q, 2) : 0.0};
      const auto x = detail::map_point(mesh, cell, md, xi);
      // physical gradient: (C^T gradref^T u) / J
      Eigen::VectorXd g = (ref.grads[std::size_t(q)] * C).transpose() * uloc / md.J;
      double ge[3] = {0, 0, 0};
      exact_grad(x[0], x[1], x[2], ge);
      double d2 = 0.0;
      for (int d = 0; d < dim; ++d) d2 += (g(d) - ge[d]) * (g(d) - ge[d]);
      acc += ref.quad->weights(q) * aJ * d2;
    }
  }
  return std::sqrt(acc);
}

inline double h1_error_outside_band(const Mesh& mesh, const DofMap& dofs,
                                    const Eigen::VectorXd& solution, const GradField& exact_grad) {
  return h1_seminorm_error(mesh, dofs, solution, exact_grad, H1Region::OutsideBand);
}

// L2 norm of the exact solution (for relative errors).
inline double l2_norm_exact(const Mesh& mesh, const ScalarField& exact) {
  const int dim = mesh.dim;
  const auto& quad = quadrature(dim, dim == 3 ? 4 : 6);
  double acc = 0.0;
  for (const auto& cell : mesh.cells) {
    const MappingData md = mapping_data(mesh, cell);
    const double aJ = std::abs(md.J);
    if (aJ == 0.0) continue;
    for (int q = 0; q < quad.points.rows(); ++q) {
      const double xi[3] = {quad.points(q, 0), quad.points(q, 1), dim == 3 ? quad.points(q, 2) : 0.0};
      const auto x = detail::map_point(mesh, cell, md, xi);
      const double u = exact(x[0], x[1], x[2]);
      acc += quad.weights(q) * aJ * u * u;
    }
  }
  return std::sqrt(acc);
}

inline double h1_norm_exact(const Mesh& mesh, const GradField& exact_grad,
                            H1Region region = H1Region::OutsideBand) {
  const int dim = mesh.dim;
  const auto& quad = quadrature(dim, dim == 3 ? 4 : 6);
  double acc = 0.0;
  for (const auto& cell : mesh.cells) {
    if (region == H1Region::OutsideBand && cell.tag == CellTag::Band) continue;
    const MappingData md = mapping_data(mesh, cell);
    const double aJ = std::abs(md.J);
    if (aJ == 0.0) continue;
    for (int q = 0; q < quad.points.rows(); ++q) {
      const double xi[3] = {quad.points(q, 0), quad.points(q, 1), dim == 3 ? quad.points(q, 2) : 0.0};
      const auto x = detail::map_point(mesh, cell, md, xi);
      double ge[3] = {0, 0, 0};
      exact_grad(x[0], x[1], x[2], ge);
      double g2 = 0.0;
      for (int d = 0; d < dim; ++d) g2 += ge[d] * ge[d];
      acc += quad.weights(q) * aJ * g2;
    }
  }
  return std::sqrt(acc);
}

// Vector (2-dof per node) variants for the elasticity runs.
inline double l2_error_vec(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& solution,
                           const std::function<Eigen::Vector2d(double, double)>& exact) {
  const detail::RefData ref(2, 1, 4);
  double acc = 0.0;
  for (std::size_t ci = 0; ci < mesh.num_cells(); ++ci) {
    const MappingData md = mapping_data(mesh, mesh.cells[ci]);
    const double aJ = std::abs(md.J);
    if (aJ == 0.0) continue;
    for (int q = 0; q < ref.quad->points.rows(); ++q) {
      const double xi[3] = {ref.quad->points(q, 0), ref.quad->points(q, 1), 0.0};
      const auto x = detail::map_point(mesh, mesh.cells[ci], md, xi);
      Eigen::Vector2d uh = Eigen::Vector2d::Zero();
      for (int a = 0; a < 3; ++a) {
        const Index d = dofs.cell_dof(ci, a);
        uh(0) += ref.values[std::size_t(q)](a) * solution(2 * d);
        uh(1) += ref.values[std::size_t(q)](a) * solution(2 * d + 1);
      }
      const Eigen::Vector2d du = uh - exact(x[0], x[1]);
      acc += ref.quad->weights(q) * aJ * du.squaredNorm();
    }
  }
  return std::sqrt(acc);
}

inline double h1_error_outside_band_vec(
    const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& solution,
    const std::function<Eigen::Matrix2d(double, double)>& exact_grad) {
  const detail::RefData ref(2, 1, 4);
  double acc = 0.0;
  for (std::size_t ci = 0; ci < mesh.num_cells(); ++ci) {
    const Cell& cell = mesh.cells[ci];
    if (cell.tag == CellTag::Band) continue;
    const MappingData md = mapping_data(mesh, cell);
    const double aJ = std::abs(md.J);
    if (aJ == 0.0) continue;
    const auto C = md.cofactor.topLeftCorner<2, 2>();
    Eigen::Matrix<double, 3, 2> u_comp;
    for (int a = 0; a < 3; ++a) {
      const Index d = dofs.cell_dof(ci, a);
      u_comp(a, 0) = solution(2 * d);
      u_comp(a, 1) = solution(2 * d + 1);
    }
    // constant per cell: grad u_k = (C^T gradref^T u_k) / J
    const Eigen::Matrix2d gh = ((ref.grads[0] * C).transpose() * u_comp / md.J).transpose();
    for (int q = 0; q < ref.quad->points.rows(); ++q) {
      const double xi[3] = {ref.quad->points(q, 0), ref.quad->points(q, 1), 0.0};
      const auto x = detail::map_point(mesh, cell, md, xi);
      const Eigen::Matrix2d dg = gh - exact_grad(x[0], x[1]);
      acc += ref.quad->weights(q) * aJ * dg.squaredNorm();
    }
  }
  return std::sqrt(acc);
}

}  // namespace tfem

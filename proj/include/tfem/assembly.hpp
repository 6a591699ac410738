#pragma once

// Tempered global assembly: Poisson, plane-strain elasticity and
// SUPG-stabilized advection, plus symmetric Dirichlet elimination.
//
// Stiffness integrands are written with the cofactor matrix so no division
// by J ever happens; the single 1/max(|J|, J_min) factor in front is the
// tempered coefficient. Load vectors use the true |J|, so zero-measure cells
// contribute nothing.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tfem/dofs.hpp"
#include "tfem/mapping.hpp"
#include "tfem/mesh.hpp"
#include "tfem/quadrature.hpp"
#include "tfem/reference.hpp"
#include "tfem/tempering.hpp"

namespace tfem {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct ElementMatrix {
  std::vector<Index> dofs;
  Eigen::MatrixXd entries;
  Eigen::VectorXd load;
};

struct SparseSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<std::pair<Index, double>> dirichlet;  // (dof, value)
  bool symmetric = true;
};

using ScalarField = std::function<double(double, double, double)>;
using VectorField = std::function<Eigen::Vector2d(double, double)>;

namespace detail {

// Precomputed reference data: shape values / gradients at quadrature points.
struct RefData {
  const ReferenceElement* re;
  const QuadratureRule* quad;
  std::vector<Eigen::VectorXd> values;
  std::vector<Eigen::MatrixXd> grads;

  RefData(int dim, int order, int degree)
      : re(&reference_element(dim, order)), quad(&quadrature(dim, degree)) {
    for (int q = 0; q < quad->points.rows(); ++q) {
      const double xi[3] = {quad->points(q, 0), quad->points(q, 1),
                            dim == 3 ? quad->points(q, 2) : 0.0};
      values.push_back(shape_values(*re, xi));
      grads.push_back(shape_gradients(*re, xi));
    }
  }
};

inline std::array<double, 3> map_point(const Mesh& mesh, const Cell& cell,
                                       const MappingData& md, const double* xi) {
  std::array<double, 3> x = mesh.point(cell.v[0]);
  for (int d = 0; d < mesh.dim; ++d)
    for (int k = 0; k < mesh.dim; ++k) x[std::size_t(k)] += md.F(k, d) * xi[d];
  return x;
}

}  // namespace detail

// K on one cell: 1/max(|J|, Jmin) * int (C^T grad phi_i) . (C^T grad phi_j).
inline ElementMatrix local_tempered_stiffness(const Mesh& mesh, std::size_t cell_index,
                                              const DofMap& dofs, double Jmin) {
  const Cell& cell = mesh.cells[cell_index];
  const int dim = mesh.dim;
  const int p = dofs.order();
  const detail::RefData ref(dim, p, std::max(1, 2 * p - 2));
  const MappingData md = mapping_data(mesh, cell);
  const double aJ = std::abs(md.J);
  const double inv = clamped_inverse(aJ, Jmin);

  const int nn = ref.re->num_nodes();
  ElementMatrix em;
  em.dofs.resize(std::size_t(nn));
  for (int k = 0; k < nn; ++k) em.dofs[std::size_t(k)] = dofs.cell_dof(cell_index, k);
  em.entries = Eigen::MatrixXd::Zero(nn, nn);
  em.load = Eigen::VectorXd::Zero(nn);

  const auto C = md.cofactor.topLeftCorner(dim, dim);
  for (int q = 0; q < ref.quad->points.rows(); ++q) {
    const Eigen::MatrixXd G = ref.grads[std::size_t(q)] * C;  // rows: C^T grad
    em.entries.noalias() += (ref.quad->weights(q) * inv) * (G * G.transpose());
  }
  return em;
}

template <class F>
inline Eigen::VectorXd local_load(const Mesh& mesh, std::size_t cell_index, const DofMap& dofs,
                                  F&& f) {
  const Cell& cell = mesh.cells[cell_index];
  const int dim = mesh.dim;
  const int p = dofs.order();
  const detail::RefData ref(dim, p, std::min(dim == 3 ? 4 : 8, 2 * p));
  const MappingData md = mapping_data(mesh, cell);
  const double aJ = std::abs(md.J);
  const int nn = ref.re->num_nodes();
  Eigen::VectorXd load = Eigen::VectorXd::Zero(nn);
  if (aJ == 0.0) return load;
  for (int q = 0; q < ref.quad->points.rows(); ++q) {
    const double xi[3] = {ref.quad->points(q, 0), ref.quad->points(q, 1),
                          dim == 3 ? ref.quad->points(q, 2) : 0.0};
    const auto x = detail::map_point(mesh, cell, md, xi);
    load.noalias() += (ref.quad->weights(q) * aJ * f(x[0], x[1], x[2])) * ref.values[std::size_t(q)];
  }
  return load;
}

inline SparseSystem assemble_poisson(const Mesh& mesh, int order, const TemperPolicy& policy,
                                     const ScalarField& f, const ScalarField& dirichlet_fn,
                                     double h_for_policy = -1.0) {
  const DofMap dofs(mesh, order);
  const double h = h_for_policy > 0.0 ? h_for_policy : mesh.h;
  const double Jmin = jmin(policy, h, mesh.dim, order);
  const int dim = mesh.dim;
  const detail::RefData stiff_ref(dim, order, std::max(1, 2 * order - 2));
  const detail::RefData load_ref(dim, order, std::min(dim == 3 ? 4 : 8, 2 * order));
  const int nn = stiff_ref.re->num_nodes();

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(mesh.num_cells() * std::size_t(nn) * std::size_t(nn));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs.num_dofs());

  for (std::size_t ci = 0; ci < mesh.num_cells(); ++ci) {
    const Cell& cell = mesh.cells[ci];
    const MappingData md = mapping_data(mesh, cell);
    const double aJ = std::abs(md.J);
    const double inv = clamped_inverse(aJ, Jmin);
    const auto C = md.cofactor.topLeftCorner(dim, dim);
    Eigen::MatrixXd Ke = Eigen::MatrixXd::Zero(nn, nn);
    for (int q = 0; q < stiff_ref.quad->points.rows(); ++q) {
      const Eigen::MatrixXd G = stiff_ref.grads[std::size_t(q)] * C;
      Ke.noalias() += (stiff_ref.quad->weights(q) * inv) * (G * G.transpose());
    }
    for (int a = 0; a < nn; ++a)
      for (int b = 0; b < nn; ++b)
        trips.emplace_back(dofs.cell_dof(ci, a), dofs.cell_dof(ci, b), Ke(a, b));
    if (aJ > 0.0) {
      for (int q = 0; q < load_ref.quad->points.rows(); ++q) {
        const double xi[3] = {load_ref.quad->points(q, 0), load_ref.quad->points(q, 1),
                              dim == 3 ? load_ref.quad->points(q, 2) : 0.0};
        const auto x = detail::map_point(mesh, cell, md, xi);
        const double w = load_ref.quad->weights(q) * aJ * f(x[0], x[1], x[2]);
        for (int a = 0; a < load_ref.re->num_nodes(); ++a)
          rhs(dofs.cell_dof(ci, a)) += w * load_ref.values[std::size_t(q)](a);
      }
    }
  }

  SparseSystem sys;
  sys.matrix.resize(dofs.num_dofs(), dofs.num_dofs());
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  sys.rhs = std::move(rhs);
  sys.symmetric = true;
  for (const auto& [dof, side] : dofs.boundary_dofs()) {
    const auto& p = dofs.dof_point(dof);
    (void)side;
    sys.dirichlet.push_back({dof, dirichlet_fn(p[0], p[1], p[2])});
  }
  return sys;
}

// --- plane strain elasticity ------------------------------------------------

struct MaterialPlaneStrain {
  double E = 1.0;
  double nu = 0.3;
  CellTag region = CellTag::Interior;
};

struct ElasticityBC {
  // Dirichlet on given sides (vector value function), tractions on others.
  std::function<bool(int side)> is_dirichlet;
  std::function<Eigen::Vector2d(double, double)> dirichlet_value;
  std::function<Eigen::Vector2d(double, double)> traction;  // may be null
};

namespace detail {
inline Eigen::Matrix3d plane_strain_D(double E, double nu) {
  const double lam = E * nu / ((1 + nu) * (1 - 2 * nu));
  const double mu = E / (2 * (1 + nu));
  Eigen::Matrix3d D;
  D << lam + 2 * mu, lam, 0, lam, lam + 2 * mu, 0, 0, 0, mu;
  return D;
}
}  // namespace detail

// Material lookup by region tag; per-cell override via `material_of` lets the
// bimaterial demo split the domain geometrically.
inline SparseSystem assemble_elasticity(
    const Mesh& mesh, const TemperPolicy& policy, const std::vector<MaterialPlaneStrain>& materials,
    const ElasticityBC& bc, const std::function<Eigen::Vector2d(double, double)>& body_force,
    const std::function<int(const Mesh&, std::size_t)>& material_of = {},
    double h_for_policy = -1.0) {
  if (mesh.dim != 2) throw std::invalid_argument("assemble_elasticity: 2D plane strain only");
  if (materials.empty()) throw std::runtime_error("assemble_elasticity: no materials configured");
  const int order = 1;
  const DofMap dofs(mesh, order);
  const double h = h_for_policy > 0.0 ? h_for_policy : mesh.h;
  const double Jmin = jmin(policy, h, mesh.dim, order);
  const detail::RefData ref(2, order, 2);
  const int nn = 3;

  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * dofs.num_dofs());

  std::vector<Eigen::Matrix3d> Dmats;
  for (const auto& m : materials) Dmats.push_back(detail::plane_strain_D(m.E, m.nu));

  for (std::size_t ci = 0; ci < mesh.num_cells(); ++ci) {
    const Cell& cell = mesh.cells[ci];
    const MappingData md = mapping_data(mesh, cell);
    const double aJ = std::abs(md.J);
    const double inv = clamped_inverse(aJ, Jmin);
    int mat = 0;
    if (material_of)
      mat = material_of(mesh, ci);
    else
      for (std::size_t k = 0; k < materials.size(); ++k)
        if (materials[k].region == cell.tag) mat = int(k);
    const Eigen::Matrix3d& D = Dmats[std::size_t(mat)];

    const auto C = md.cofactor.topLeftCorner<2, 2>();
    // gradients scaled by J: Gt = grad_ref * C has rows J * grad_x(phi)
    const Eigen::MatrixXd Gt = ref.grads[0] * C;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 2 * nn);
    for (int a = 0; a < nn; ++a) {
      B(0, 2 * a) = Gt(a, 0);
      B(1, 2 * a + 1) = Gt(a, 1);
      B(2, 2 * a) = Gt(a, 1);
      B(2, 2 * a + 1) = Gt(a, 0);
    }
    const Eigen::MatrixXd Ke = (0.5 * inv) * (B.transpose() * D * B);
    for (int a = 0; a < nn; ++a)
      for (int b = 0; b < nn; ++b)
        for (int da = 0; da < 2; ++da)
          for (int db = 0; db < 2; ++db)
            trips.emplace_back(2 * dofs.cell_dof(ci, a) + da, 2 * dofs.cell_dof(ci, b) + db,
                               Ke(2 * a + da, 2 * b + db));
    if (aJ > 0.0 && body_force) {
      const detail::RefData lref(2, order, 2);
      for (int q = 0; q < lref.quad->points.rows(); ++q) {
        const double xi[3] = {lref.quad->points(q, 0), lref.quad->points(q, 1), 0.0};
        const auto x = detail::map_point(mesh, cell, md, xi);
        const Eigen::Vector2d fv = body_force(x[0], x[1]);
        for (int a = 0; a < nn; ++a) {
          rhs(2 * dofs.cell_dof(ci, a)) += lref.quad->weights(q) * aJ * fv(0) * lref.values[std::size_t(q)](a);
          rhs(2 * dofs.cell_dof(ci, a) + 1) += lref.quad->weights(q) * aJ * fv(1) * lref.values[std::size_t(q)](a);
        }
      }
    }
  }

  // Neumann tractions on non-Dirichlet boundary facets, true facet measure.
  if (bc.traction) {
    for (const auto& f : mesh.boundary_facets) {
      if (bc.is_dirichlet && bc.is_dirichlet(f.side)) continue;
      const auto& a = mesh.point(f.v[0]);
      const auto& b = mesh.point(f.v[1]);
      const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
      // two-point Gauss on the facet
      const double gp[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
      for (double t : gp) {
        const double x = a[0] + t * (b[0] - a[0]);
        const double y = a[1] + t * (b[1] - a[1]);
        const Eigen::Vector2d tr = bc.traction(x, y);
        for (int k = 0; k < 2; ++k) {
          const double phi = k == 0 ? 1.0 - t : t;
          rhs(2 * f.v[std::size_t(k)]) += 0.5 * len * phi * tr(0);
          rhs(2 * f.v[std::size_t(k)] + 1) += 0.5 * len * phi * tr(1);
        }
      }
    }
  }

  SparseSystem sys;
  sys.matrix.resize(2 * dofs.num_dofs(), 2 * dofs.num_dofs());
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  sys.rhs = std::move(rhs);
  sys.symmetric = true;
  for (const auto& [dof, side] : dofs.boundary_dofs()) {
    if (bc.is_dirichlet && !bc.is_dirichlet(side)) continue;
    const auto& p = dofs.dof_point(dof);
    const Eigen::Vector2d u = bc.dirichlet_value ? bc.dirichlet_value(p[0], p[1])
                                                 : Eigen::Vector2d::Zero();
    sys.dirichlet.push_back({2 * dof, u(0)});
    sys.dirichlet.push_back({2 * dof + 1, u(1)});
  }
  return sys;
}

// --- SUPG advection ----------------------------------------------------------

// Advection term with the true (sign-corrected) J: the 1/J of the gradient
// cancels the J of the measure, so degenerate cells stay finite untouched.
// Only the SUPG stabilization term carries the tempered 1/max(|J|, Jmin).
inline SparseSystem assemble_advection_supg(const Mesh& mesh, const VectorField& velocity,
                                            const TemperPolicy& policy,
                                            const ScalarField& dirichlet_fn,
                                            const std::function<bool(int side)>& is_inflow,
                                            double h_for_policy = -1.0) {
  if (mesh.dim != 2) throw std::invalid_argument("assemble_advection_supg: 2D only");
  const int order = 1;
  const DofMap dofs(mesh, order);
  const double h = h_for_policy > 0.0 ? h_for_policy : mesh.h;
  const double Jmin = jmin(policy, h, mesh.dim, order);
  const detail::RefData ref(2, order, 2);
  const int nn = 3;

  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t ci = 0; ci < mesh.num_cells(); ++ci) {
    const Cell& cell = mesh.cells[ci];
    const MappingData md = mapping_data(mesh, cell);
    const double aJ = std::abs(md.J);
    const double sgn = md.J > 0 ? 1.0 : md.J < 0 ? -1.0 : double(cell.orientation);
    const auto C = md.cofactor.topLeftCorner<2, 2>();
    const Eigen::MatrixXd Gt = ref.grads[0] * C;  // rows: J * grad phi

    // centroid velocity and SUPG time scale
    const auto& p0 = mesh.point(cell.v[0]);
    const auto& p1 = mesh.point(cell.v[1]);
    const auto& p2 = mesh.point(cell.v[2]);
    const double cx = (p0[0] + p1[0] + p2[0]) / 3.0, cy = (p0[1] + p1[1] + p2[1]) / 3.0;
    const Eigen::Vector2d vc = velocity(cx, cy);
    const double vn = vc.norm();
    const double hK = longest_edge(mesh, cell);
    const double tau = vn < 1e-12 ? 0.0 : hK / (2.0 * vn);

    Eigen::MatrixXd Ke = Eigen::MatrixXd::Zero(nn, nn);
    for (int q = 0; q < ref.quad->points.rows(); ++q) {
      const double xi[3] = {ref.quad->points(q, 0), ref.quad->points(q, 1), 0.0};
      const auto x = detail::map_point(mesh, cell, md, xi);
      const Eigen::Vector2d v = velocity(x[0], x[1]);
      const Eigen::VectorXd vG = Gt * v;  // (v . J grad phi_j)
      // advection: int (v.grad u) phi dx = sign(J) * sum_q w (v.Jgrad) phi
      Ke.noalias() += (ref.quad->weights(q) * sgn) * (ref.values[std::size_t(q)] * vG.transpose());
      // SUPG: tau * int (v.grad u)(v.grad w) dx, tempered
      if (tau > 0.0)
        Ke.noalias() += (ref.quad->weights(q) * tau * clamped_inverse(aJ, Jmin)) * (vG * vG.transpose());
    }
    for (int a = 0; a < nn; ++a)
      for (int b = 0; b < nn; ++b)
        trips.emplace_back(dofs.cell_dof(ci, a), dofs.cell_dof(ci, b), Ke(a, b));
  }

  SparseSystem sys;
  sys.matrix.resize(dofs.num_dofs(), dofs.num_dofs());
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  sys.rhs = Eigen::VectorXd::Zero(dofs.num_dofs());
  sys.symmetric = false;
  for (const auto& [dof, side] : dofs.boundary_dofs()) {
    if (is_inflow && !is_inflow(side)) continue;
    const auto& p = dofs.dof_point(dof);
    sys.dirichlet.push_back({dof, dirichlet_fn(p[0], p[1], p[2])});
  }
  return sys;
}

// --- Dirichlet elimination ---------------------------------------------------

struct ReducedSystem {
  SparseMatrix matrix;          // free x free block
  Eigen::VectorXd rhs;          // rhs - A_fd * u_d
  std::vector<Index> free_dofs;
  Eigen::VectorXd full_values;  // Dirichlet values scattered into full length
  bool symmetric = true;

  Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const {
    Eigen::VectorXd full = full_values;
    for (std::size_t i = 0; i < free_dofs.size(); ++i) full(free_dofs[i]) = reduced(Eigen::Index(i));
    return full;
  }
};

inline ReducedSystem apply_dirichlet(const SparseSystem& sys) {
  const Index n = Index(sys.matrix.rows());
  std::vector<double> bc_val(std::size_t(n), 0.0);
  std::vector<char> is_bc(std::size_t(n), 0);
  for (const auto& [dof, val] : sys.dirichlet) {
    is_bc[std::size_t(dof)] = 1;
    bc_val[std::size_t(dof)] = val;
  }
  ReducedSystem red;
  red.symmetric = sys.symmetric;
  red.full_values = Eigen::VectorXd::Zero(n);
  std::vector<Index> new_id(std::size_t(n), -1);
  for (Index i = 0; i < n; ++i) {
    if (is_bc[std::size_t(i)]) {
      red.full_values(i) = bc_val[std::size_t(i)];
    } else {
      new_id[std::size_t(i)] = Index(red.free_dofs.size());
      red.free_dofs.push_back(i);
    }
  }
  const Index m = Index(red.free_dofs.size());
  red.rhs = Eigen::VectorXd::Zero(m);
  for (Index i = 0; i < m; ++i) red.rhs(i) = sys.rhs(red.free_dofs[std::size_t(i)]);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(std::size_t(sys.matrix.nonZeros()));
  for (Index r = 0; r < n; ++r) {
    if (is_bc[std::size_t(r)]) continue;
    const Index rr = new_id[std::size_t(r)];
    for (SparseMatrix::InnerIterator it(sys.matrix, r); it; ++it) {
      const Index c = Index(it.col());
      if (is_bc[std::size_t(c)]) {
        red.rhs(rr) -= it.value() * bc_val[std::size_t(c)];
      } else {
        trips.emplace_back(rr, new_id[std::size_t(c)], it.value());
      }
    }
  }
  red.matrix.resize(m, m);
  red.matrix.setFromTriplets(trips.begin(), trips.end());
  return red;
}

}  // namespace tfem

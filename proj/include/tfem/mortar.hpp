#pragma once

// The explicit zero-measure penalty scheme and the clamp <-> penalty
// equivalence machinery. On a fully collapsed band the tempered assembly
// reduces, cap by cap, to rank-1 jump blocks; the penalty assembler builds
// those blocks directly from the band node list.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tfem/assembly.hpp"
#include "tfem/mesh.hpp"
#include "tfem/tempering.hpp"

namespace tfem {

struct GammaNode {
  Index apex = -1;                 // node that degenerated onto the line
  std::array<Index, 2> feet{};     // base edge endpoints on the other side
  double s = 0.5;                  // apex position along the base edge
  double base_length = 0.0;
  double coord = 0.0;              // position along the line
  int side = +1;                   // which submesh the apex belongs to
};

struct GammaBand {
  std::vector<GammaNode> nodes;    // interior nodes, ordered along the line
  std::array<Index, 2> endpoints{-1, -1};
  double segment = 0.0;            // nominal h/2 spacing along the line
  int axis = 1;                    // coordinate that runs along the line
};

struct NotDegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Jump vector of one collapsed cap: [u] = u(apex) - ((1-s) u(f0) + s u(f1))
// on the dof triple (feet[0], feet[1], apex).
inline Eigen::Vector3d jump_vector(double s) { return Eigen::Vector3d(-(1.0 - s), -s, 1.0); }

inline GammaBand extract_gamma(const Mesh& mesh) {
  if (mesh.dim != 2) throw std::invalid_argument("extract_gamma: 2D meshes only");
  if (mesh.hbar != 0.0 || mesh.band_nodes.empty())
    throw NotDegenerateError("extract_gamma: mesh has no zero-measure band");
  GammaBand gb;
  const auto& a0 = mesh.point(mesh.band_nodes.front().apex);
  const auto& a1 = mesh.point(mesh.band_nodes.back().apex);
  gb.axis = std::abs(a1[1] - a0[1]) >= std::abs(a1[0] - a0[0]) ? 1 : 0;
  const int perp = 1 - gb.axis;

  // Which side each apex's nondegenerate neighbourhood lies on.
  std::vector<double> side_coord(mesh.num_vertices(), 0.0);
  std::vector<char> side_known(mesh.num_vertices(), 0);
  for (const auto& c : mesh.cells) {
    if (cell_measure(mesh, c) == 0.0) continue;
    double centroid = 0.0;
    for (int k = 0; k < 3; ++k) centroid += mesh.point(c.v[std::size_t(k)])[std::size_t(perp)] / 3.0;
    for (int k = 0; k < 3; ++k) {
      side_coord[std::size_t(c.v[std::size_t(k)])] = centroid;
      side_known[std::size_t(c.v[std::size_t(k)])] = 1;
    }
  }

  double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
  Index lo_id = -1, hi_id = -1;
  for (const auto& bn : mesh.band_nodes) {
    const auto& pa = mesh.point(bn.apex);
    const auto& f0 = mesh.point(bn.feet[0]);
    const auto& f1 = mesh.point(bn.feet[1]);
    GammaNode gn;
    gn.apex = bn.apex;
    gn.feet = bn.feet;
    const double bx = f1[0] - f0[0], by = f1[1] - f0[1];
    const double blen2 = bx * bx + by * by;
    gn.base_length = std::sqrt(blen2);
    gn.s = blen2 > 0 ? ((pa[0] - f0[0]) * bx + (pa[1] - f0[1]) * by) / blen2 : 0.0;
    gn.coord = pa[std::size_t(gb.axis)];
    const double line = pa[std::size_t(perp)];
    gn.side = (side_known[std::size_t(bn.apex)] && side_coord[std::size_t(bn.apex)] < line) ? -1 : +1;
    gb.nodes.push_back(gn);
    for (const Index v : {bn.feet[0], bn.feet[1]}) {
      const double c = mesh.point(v)[std::size_t(gb.axis)];
      if (c < lo) { lo = c; lo_id = v; }
      if (c > hi) { hi = c; hi_id = v; }
    }
  }
  std::sort(gb.nodes.begin(), gb.nodes.end(),
            [](const GammaNode& a, const GammaNode& b) { return a.coord < b.coord; });
  gb.endpoints = {lo_id, hi_id};
  double seg = 0.0;
  for (const auto& gn : gb.nodes) seg = std::max(seg, gn.base_length / 2.0);
  gb.segment = seg;
  return gb;
}

// Stiffness on the nondegenerate cells plus, per interior band node, the
// rank-1 jump block w g g^T with w = Dtilde * base/2.
//
// `Jmin_bulk` tempers the nondegenerate part exactly like the clamped
// assembly does; the default 0 keeps it untempered (the limiting scheme
// proper, where J_min is small against every interior J).
inline SparseSystem assemble_penalty(const Mesh& mesh, const GammaBand& gamma, double Dtilde,
                                     const ScalarField& f, const ScalarField& dirichlet_fn,
                                     double Jmin_bulk = 0.0) {
  const DofMap dofs(mesh, 1);
  const detail::RefData ref(2, 1, 2);
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs.num_dofs());

  for (std::size_t ci = 0; ci < mesh.num_cells(); ++ci) {
    const Cell& cell = mesh.cells[ci];
    const MappingData md = mapping_data(mesh, cell);
    const double aJ = std::abs(md.J);
    if (aJ == 0.0) continue;  // degenerate cells enter through the jump sum
    const auto C = md.cofactor.topLeftCorner<2, 2>();
    const Eigen::MatrixXd G = ref.grads[0] * C;
    const Eigen::Matrix3d Ke = (0.5 / std::max(aJ, Jmin_bulk)) * (G * G.transpose());
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        trips.emplace_back(cell.v[std::size_t(a)], cell.v[std::size_t(b)], Ke(a, b));
    for (int q = 0; q < ref.quad->points.rows(); ++q) {
      const double xi[3] = {ref.quad->points(q, 0), ref.quad->points(q, 1), 0.0};
      const auto x = detail::map_point(mesh, cell, md, xi);
      const double w = ref.quad->weights(q) * aJ * f(x[0], x[1], x[2]);
      for (int a = 0; a < 3; ++a) rhs(cell.v[std::size_t(a)]) += w * ref.values[std::size_t(q)](a);
    }
  }

  for (const auto& gn : gamma.nodes) {
    const double w = Dtilde * gn.base_length / 2.0;
    const Eigen::Vector3d g = jump_vector(gn.s);
    const Index id[3] = {gn.feet[0], gn.feet[1], gn.apex};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) trips.emplace_back(id[a], id[b], w * g(a) * g(b));
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

struct EquivalenceReport {
  double max_abs_diff = 0.0;   // at the fitted alpha
  double alpha_fitted = 0.0;
};

// Assemble (a) the clamped tempered system and (b) the penalty system with
// Dtilde = alpha * h / Jmin, and fit alpha by least squares over the matrix
// entries. Both sides treat the nondegenerate cells identically, so the
// difference isolates the band handling the lemma is about. This is the
// oracle pinning the alpha convention.
inline EquivalenceReport equivalence_check(const Mesh& mesh, double Jmin) {
  if (mesh.hbar != 0.0) throw NotDegenerateError("equivalence_check: band must be collapsed");
  const auto zero = [](double, double, double) { return 0.0; };
  SparseSystem clamped = assemble_poisson(mesh, 1, FixedPolicy{Jmin}, zero, zero);
  const GammaBand gamma = extract_gamma(mesh);

  SparseSystem base = assemble_penalty(mesh, gamma, 0.0, zero, zero, Jmin);
  const double h = gamma.nodes.empty() ? mesh.h : gamma.nodes.front().base_length;
  SparseSystem unit = assemble_penalty(mesh, gamma, h / Jmin, zero, zero, Jmin);

  SparseMatrix target = clamped.matrix - base.matrix;
  SparseMatrix part = unit.matrix - base.matrix;
  double num = 0.0, den = 0.0;
  for (int k = 0; k < part.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(part, k); it; ++it) {
      num += it.value() * target.coeff(it.row(), it.col());
      den += it.value() * it.value();
    }
  EquivalenceReport rep;
  rep.alpha_fitted = den > 0 ? num / den : 0.0;
  SparseMatrix diff = target - rep.alpha_fitted * part;
  double mx = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) mx = std::max(mx, std::abs(it.value()));
  rep.max_abs_diff = mx;
  return rep;
}

// Both sides of the trapezoid bound int_Gamma f^2 <= (h/2) sum f(x_i)^2 for a
// piecewise linear f on the band partition with zero endpoint values.
// `nodal` holds f at the interior nodes in line order.
inline std::pair<double, double> trapezoid_jump_bound_check(const GammaBand& gamma,
                                                            const std::vector<double>& nodal) {
  if (nodal.size() != gamma.nodes.size())
    throw std::invalid_argument("trapezoid_jump_bound_check: value count mismatch");
  std::vector<double> vals;
  vals.reserve(nodal.size() + 2);
  vals.push_back(0.0);
  vals.insert(vals.end(), nodal.begin(), nodal.end());
  vals.push_back(0.0);
  const double seg = gamma.segment;
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
    const double a = vals[i], b = vals[i + 1];
    lhs += seg * (a * a + a * b + b * b) / 3.0;  // exact integral of the linear ramp squared
  }
  for (const double v : nodal) rhs += seg * v * v;
  return {lhs, rhs};
}

// Exact L2(Gamma) norm of the piecewise linear jump of a P1 solution across
// the collapsed band. Nodal jumps are sign-corrected per apex side so the
// interpolated jump function is consistent along the line.
inline double jump_norm(const GammaBand& gamma, const Eigen::VectorXd& solution) {
  std::vector<double> jumps;
  jumps.reserve(gamma.nodes.size());
  for (const auto& gn : gamma.nodes) {
    const double tr = (1.0 - gn.s) * solution(gn.feet[0]) + gn.s * solution(gn.feet[1]);
    jumps.push_back(double(gn.side) * (solution(gn.apex) - tr));
  }
  std::vector<double> vals;
  vals.reserve(jumps.size() + 2);
  vals.push_back(0.0);
  vals.insert(vals.end(), jumps.begin(), jumps.end());
  vals.push_back(0.0);
  const double seg = gamma.segment;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
    const double a = vals[i], b = vals[i + 1];
    acc += seg * (a * a + a * b + b * b) / 3.0;
  }
  return std::sqrt(acc);
}

}  // namespace tfem

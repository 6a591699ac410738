#pragma once

// Global Lagrange dof numbering for order p on a simplicial mesh:
// vertex dofs, then (p-1) dofs per edge, then interior dofs per cell.
// Shared edge dofs are ordered from the lower to the higher vertex id so
// neighbouring cells agree.

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "tfem/mesh.hpp"
#include "tfem/reference.hpp"

namespace tfem {

class DofMap {
 public:
  DofMap(const Mesh& mesh, int order) : mesh_(&mesh), order_(order) {
    const auto& re = reference_element(mesh.dim, order);
    nloc_ = re.num_nodes();
    const Index nv = Index(mesh.num_vertices());
    if (order == 1) {
      ndofs_ = nv;
      cell_dofs_.resize(mesh.num_cells() * std::size_t(nloc_));
      for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        for (int k = 0; k < nloc_; ++k)
          cell_dofs_[c * std::size_t(nloc_) + std::size_t(k)] = mesh.cells[c].v[std::size_t(k)];
    } else {
      build_high_order();
    }
    build_coords();
  }

  int order() const { return order_; }
  Index num_dofs() const { return ndofs_; }
  int dofs_per_cell() const { return nloc_; }
  const Mesh& mesh() const { return *mesh_; }

  Index cell_dof(std::size_t cell, int k) const {
    return cell_dofs_[cell * std::size_t(nloc_) + std::size_t(k)];
  }
  const std::array<double, 3>& dof_point(Index dof) const { return coords_[std::size_t(dof)]; }

  // Dofs lying on the domain boundary with their side tags. A dof on several
  // sides (a corner) appears once per side so mixed BCs see every membership.
  std::vector<std::pair<Index, int>> boundary_dofs() const {
    std::set<std::pair<Index, int>> seen;
    std::map<std::pair<Index, Index>, int> bedges;
    for (const auto& f : mesh_->boundary_facets) {
      const int nfv = mesh_->dim == 2 ? 2 : 3;
      for (int k = 0; k < nfv; ++k) seen.insert({f.v[std::size_t(k)], f.side});
      if (mesh_->dim == 2 && order_ > 1) {
        Index a = f.v[0], b = f.v[1];
        if (b < a) std::swap(a, b);
        bedges[{a, b}] = f.side;
      }
    }
    if (order_ > 1) {
      for (const auto& [edge, side] : bedges) {
        const auto it = edge_ids_.find(edge);
        if (it == edge_ids_.end()) continue;
        const Index base = Index(mesh_->num_vertices()) + it->second * Index(order_ - 1);
        for (int k = 0; k < order_ - 1; ++k) seen.insert({base + k, side});
      }
    }
    return {seen.begin(), seen.end()};
  }

 private:
  void build_high_order() {
    const Index nv = Index(mesh_->num_vertices());
    const int p = order_;
    Index next_edge = 0;
    for (const auto& c : mesh_->cells)
      for (int e = 0; e < 3; ++e) {
        Index a = c.v[std::size_t(e)], b = c.v[std::size_t((e + 1) % 3)];
        if (b < a) std::swap(a, b);
        auto [it, inserted] = edge_ids_.try_emplace({a, b}, next_edge);
        if (inserted) ++next_edge;
      }
    const int n_int = (p - 1) * (p - 2) / 2;
    const Index int_base = nv + next_edge * Index(p - 1);
    ndofs_ = int_base + Index(mesh_->num_cells()) * Index(n_int);

    cell_dofs_.resize(mesh_->num_cells() * std::size_t(nloc_));
    for (std::size_t ci = 0; ci < mesh_->num_cells(); ++ci) {
      const auto& c = mesh_->cells[ci];
      int k = 0;
      for (int v = 0; v < 3; ++v) cell_dofs_[ci * std::size_t(nloc_) + std::size_t(k++)] = c.v[std::size_t(v)];
      for (int e = 0; e < 3; ++e) {
        Index a = c.v[std::size_t(e)], b = c.v[std::size_t((e + 1) % 3)];
        const bool flip = b < a;
        const Index lo = flip ? b : a, hi = flip ? a : b;
        const Index base = nv + edge_ids_.at({lo, hi}) * Index(p - 1);
        for (int q = 0; q < p - 1; ++q) {
          const int slot = flip ? p - 2 - q : q;
          cell_dofs_[ci * std::size_t(nloc_) + std::size_t(k++)] = base + Index(slot);
        }
      }
      for (int q = 0; q < n_int; ++q)
        cell_dofs_[ci * std::size_t(nloc_) + std::size_t(k++)] = int_base + Index(ci) * Index(n_int) + Index(q);
    }
  }

  void build_coords() {
    const auto& re = reference_element(mesh_->dim, order_);
    coords_.assign(std::size_t(ndofs_), {0.0, 0.0, 0.0});
    std::vector<char> have(std::size_t(ndofs_), 0);
    for (std::size_t ci = 0; ci < mesh_->num_cells(); ++ci) {
      const auto& c = mesh_->cells[ci];
      for (int k = 0; k < nloc_; ++k) {
        const Index dof = cell_dof(ci, k);
        if (have[std::size_t(dof)]) continue;
        have[std::size_t(dof)] = 1;
        double b0 = 1.0;
        std::array<double, 3> x{0, 0, 0};
        for (int d = 0; d < mesh_->dim; ++d) b0 -= re.nodes(k, d);
        for (int dd = 0; dd < 3; ++dd) x[std::size_t(dd)] = b0 * mesh_->point(c.v[0])[std::size_t(dd)];
        for (int d = 0; d < mesh_->dim; ++d)
          for (int dd = 0; dd < 3; ++dd)
            x[std::size_t(dd)] += re.nodes(k, d) * mesh_->point(c.v[std::size_t(d + 1)])[std::size_t(dd)];
        coords_[std::size_t(dof)] = x;
      }
    }
  }

  const Mesh* mesh_;
  int order_;
  int nloc_ = 0;
  Index ndofs_ = 0;
  std::vector<Index> cell_dofs_;
  std::vector<std::array<double, 3>> coords_;
  std::map<std::pair<Index, Index>, Index> edge_ids_;
};

// Nodal interpolant of a scalar function onto the order-p Lagrange space.
template <class F>
inline std::vector<double> interpolate(const DofMap& dofs, F&& u) {
  std::vector<double> vals(std::size_t(dofs.num_dofs()));
  for (Index i = 0; i < dofs.num_dofs(); ++i) {
    const auto& p = dofs.dof_point(i);
    vals[std::size_t(i)] = u(p[0], p[1], p[2]);
  }
  return vals;
}

}  // namespace tfem

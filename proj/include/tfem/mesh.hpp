#pragma once

// Simplicial meshes (2D triangles / 3D tets) that tolerate zero-measure cells.
// Structured generators: regular grids, grids with a band of cap elements of
// width hbar >= 0 (hbar = 0 collapses the band onto a line/plane), and mortar
// stitching of two non-conforming meshes along a straight interface.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfem {

using Index = std::int32_t;

enum class CellTag : std::uint8_t { Interior = 1, Band = 2 };

struct Vertex {
  Index id = -1;
  std::array<double, 3> coords{0.0, 0.0, 0.0};
};

struct Cell {
  std::array<Index, 4> v{-1, -1, -1, -1};  // d+1 entries used
  CellTag tag = CellTag::Interior;
  int orientation = +1;  // sign convention for the mapping determinant
};

struct BoundaryFacet {
  std::array<Index, 3> v{-1, -1, -1};  // 2 nodes (2D) or 3 nodes (3D)
  int side = 0;                        // 0:x=0 1:x=1 2:y=0 3:y=1 4:z=0 5:z=1
};

// One collapsed cap: apex node and the edge (foot pair) it degenerated onto.
struct BandNode {
  Index apex = -1;
  std::array<Index, 2> feet{-1, -1};
};

struct BandSpec {
  double position = 0.5;  // coordinate of the band line/plane
  double width = 0.0;     // hbar >= 0
  double extent = 1.0;    // L (2D) or the y-extent of the degenerate strip (3D)
  int orientation_axis = 0;
};

struct Mesh {
  int dim = 2;
  std::vector<Vertex> vertices;
  std::vector<Cell> cells;
  std::vector<BoundaryFacet> boundary_facets;
  double h = 0.0;     // nominal mesh size (grid spacing for generated meshes)
  double hbar = -1.0; // band width; < 0 means "no band"
  std::vector<BandNode> band_nodes;  // populated for zero-measure bands

  int nodes_per_cell() const { return dim + 1; }
  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_cells() const { return cells.size(); }

  const std::array<double, 3>& point(Index v) const { return vertices[std::size_t(v)].coords; }
};

// Signed determinant of the affine reference-to-physical map.
// 2 * area in 2D, 6 * volume in 3D; sign follows the stored vertex order.
inline double cell_mapping_determinant(const Mesh& mesh, const Cell& cell) {
  const auto& p0 = mesh.point(cell.v[0]);
  const auto& p1 = mesh.point(cell.v[1]);
  const auto& p2 = mesh.point(cell.v[2]);
  if (mesh.dim == 2) {
    const double ax = p1[0] - p0[0], ay = p1[1] - p0[1];
    const double bx = p2[0] - p0[0], by = p2[1] - p0[1];
    return ax * by - ay * bx;
  }
  const auto& p3 = mesh.point(cell.v[3]);
  const double a[3] = {p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]};
  const double b[3] = {p2[0] - p0[0], p2[1] - p0[1], p2[2] - p0[2]};
  const double c[3] = {p3[0] - p0[0], p3[1] - p0[1], p3[2] - p0[2]};
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

inline double cell_measure(const Mesh& mesh, const Cell& cell) {
  const double J = cell_mapping_determinant(mesh, cell);
  return std::abs(J) / (mesh.dim == 2 ? 2.0 : 6.0);
}

inline double domain_measure(const Mesh& mesh) {
  double s = 0.0;
  for (const auto& c : mesh.cells) s += cell_measure(mesh, c);
  return s;
}

inline double longest_edge(const Mesh& mesh, const Cell& cell) {
  double m = 0.0;
  const int n = mesh.nodes_per_cell();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto& a = mesh.point(cell.v[std::size_t(i)]);
      const auto& b = mesh.point(cell.v[std::size_t(j)]);
      double d2 = 0.0;
      for (int k = 0; k < 3; ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
      m = std::max(m, std::sqrt(d2));
    }
  return m;
}

namespace detail {

inline int boundary_side(const std::array<double, 3>& p, int dim, double tol = 1e-12) {
  for (int ax = 0; ax < dim; ++ax) {
    if (std::abs(p[ax]) < tol) return 2 * ax;
    if (std::abs(p[ax] - 1.0) < tol) return 2 * ax + 1;
  }
  return -1;
}

// Collect boundary facets of a 2D mesh on the unit square by coordinates.
inline void collect_boundary_2d(Mesh& mesh) {
  mesh.boundary_facets.clear();
  for (const auto& c : mesh.cells) {
    for (int e = 0; e < 3; ++e) {
      const Index a = c.v[std::size_t(e)], b = c.v[std::size_t((e + 1) % 3)];
      for (int ax = 0; ax < 2; ++ax)
        for (int sd = 0; sd < 2; ++sd) {
          const double val = sd == 0 ? 0.0 : 1.0;
          if (std::abs(mesh.point(a)[ax] - val) < 1e-12 &&
              std::abs(mesh.point(b)[ax] - val) < 1e-12 &&
              std::abs(mesh.point(a)[1 - ax] - mesh.point(b)[1 - ax]) > 1e-14) {
            mesh.boundary_facets.push_back({{a, b, -1}, 2 * ax + sd});
          }
        }
    }
  }
}

}  // namespace detail

// Regular mesh of the unit square/cube: n x n squares split into 2 triangles
// each (diagonal from (i,j) to (i+1,j+1)), or n^3 cubes into 6 tets each.
Mesh build_structured_mesh(int dim, int n);

// Mesh with a band of caps inserted along the vertical line x = position:
// the interface column on the far side is offset by h/2 so the gap is tiled
// by 2*m - 1 alternating cap triangles of base h = 1/n and height `width`
// (m = number of column segments inside `extent`). width = 0 collapses the
// band to the line; the offset nodes stay distinct indices.
// In 3D the 2D pattern is extruded through z, producing a slab of degenerate
// tetrahedra of minimal altitude `width` and longest edge <= h*sqrt(2).
Mesh build_band_mesh(int dim, int n, const BandSpec& band);

// Stitch two meshes sharing the interface line x = interface_pos. The
// interface node columns are merged at the shared endpoints and the strip in
// between is tiled with zero-measure cap triangles tagged Band.
Mesh build_mortar_mesh(const Mesh& left, const Mesh& right, int interface_axis,
                       double interface_pos);

// Structured mesh of an axis-aligned rectangle [x0,x1]x[y0,y1] with nx x ny
// cells (used by the mortar demo and the random suite).
Mesh build_rect_mesh(double x0, double x1, double y0, double y1, int nx, int ny);

// ---------------------------------------------------------------------------

namespace detail {

struct Grid2DBuilder {
  std::vector<Vertex> vertices;
  std::vector<Cell> cells;

  Index add_vertex(double x, double y) {
    vertices.push_back({Index(vertices.size()), {x, y, 0.0}});
    return Index(vertices.size() - 1);
  }
  void add_tri(Index a, Index b, Index c, CellTag tag = CellTag::Interior) {
    Cell cell;
    cell.v = {a, b, c, -1};
    cell.tag = tag;
    cells.push_back(cell);
  }
  // Split quad (v00 v10 v11 v01) along the v00-v11 diagonal.
  void add_quad(Index v00, Index v10, Index v11, Index v01) {
    add_tri(v00, v10, v11);
    add_tri(v00, v11, v01);
  }
};

// Zigzag strip between two node columns sorted by the `along` coordinate.
// Every triangle has its base on one column and its apex on the other; the
// columns are assumed to share their first and last entries when `shared_ends`
// holds (then those indices appear in both lists).
template <class OnTri>
inline void zigzag_strip(const std::vector<Index>& left, const std::vector<double>& left_y,
                         const std::vector<Index>& right, const std::vector<double>& right_y,
                         OnTri&& emit) {
  std::size_t i = 0, j = 0;
  while (i + 1 < left.size() || j + 1 < right.size()) {
    bool advance_left;
    if (j + 1 >= right.size())
      advance_left = true;
    else if (i + 1 >= left.size())
      advance_left = false;
    else
      advance_left = left_y[i + 1] <= right_y[j + 1];
    if (advance_left) {
      emit(left[i], left[i + 1], right[j], /*base_on_left=*/true);
      ++i;
    } else {
      emit(right[j], right[j + 1], left[i], /*base_on_left=*/false);
      ++j;
    }
  }
}

Mesh extrude_to_3d(const Mesh& m2, int layers);

}  // namespace detail

inline Mesh build_structured_mesh(int dim, int n) {
  if (n < 2) throw std::invalid_argument("build_structured_mesh: n must be >= 2");
  if (dim != 2 && dim != 3) throw std::invalid_argument("build_structured_mesh: dim must be 2 or 3");
  detail::Grid2DBuilder g;
  const double h = 1.0 / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) g.add_vertex(i * h, j * h);
  auto id = [n](int i, int j) { return Index(j * (n + 1) + i); };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      g.add_quad(id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
  Mesh mesh;
  mesh.dim = 2;
  mesh.vertices = std::move(g.vertices);
  mesh.cells = std::move(g.cells);
  mesh.h = h;
  detail::collect_boundary_2d(mesh);
  if (dim == 3) {
    Mesh m3 = detail::extrude_to_3d(mesh, n);
    m3.h = h;
    return m3;
  }
  return mesh;
}

inline Mesh build_band_mesh(int dim, int n, const BandSpec& band) {
  if (n < 2) throw std::invalid_argument("build_band_mesh: n must be >= 2");
  const double h = 1.0 / n;
  if (band.width >= h) throw std::invalid_argument("build_band_mesh: width must be < h");
  if (band.width < 0.0) throw std::invalid_argument("build_band_mesh: width must be >= 0");
  if (band.extent <= 0.0 || band.extent > 1.0 + 1e-12)
    throw std::invalid_argument("build_band_mesh: extent must lie in (0, 1]");
  const bool full_extent = band.extent > 1.0 - 1e-12;
  if (band.width > 0.0 && !full_extent)
    throw std::invalid_argument("build_band_mesh: width > 0 requires full extent");

  // Snap the band line to the nearest grid column and the extent to grid rows.
  const int col = std::clamp(int(std::lround(band.position * n)), 1, n - 1);
  const double xb = col * h;                       // left interface line
  const double hbar = band.width;

  int j_lo = 0, j_hi = n;
  if (!full_extent) {
    const int m = std::max(1, int(std::lround(band.extent * n)));
    j_lo = std::clamp((n - m) / 2, 0, n - 1);
    j_hi = std::min(j_lo + m, n);
  }
  const int m_seg = j_hi - j_lo;  // column segments covered by the band

  detail::Grid2DBuilder g;
  // Left block: columns 0..col at spacing h.
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= col; ++i) g.add_vertex(i * h, j * h);
  auto lid = [col](int i, int j) { return Index(j * (col + 1) + i); };

  // Offset interface nodes at x = xb + hbar, y = (j + 1/2) h inside the extent.
  std::vector<Index> offs(std::size_t(m_seg), -1);
  for (int j = 0; j < m_seg; ++j) offs[std::size_t(j)] = g.add_vertex(xb + hbar, (j_lo + j + 0.5) * h);

  // Right block columns: i = 1..(n - col), squeezed into [xb + hbar, 1].
  const int ncol_r = n - col;
  const double wr = (1.0 - xb - hbar) / ncol_r;
  std::vector<Index> rid(std::size_t((n + 1) * ncol_r), -1);
  auto r_index = [&](int i, int j) -> Index& { return rid[std::size_t(j * ncol_r + (i - 1))]; };
  for (int j = 0; j <= n; ++j)
    for (int i = 1; i <= ncol_r; ++i) r_index(i, j) = g.add_vertex(xb + hbar + i * wr, j * h);

  // Left block cells.
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < col; ++i)
      g.add_quad(lid(i, j), lid(i + 1, j), lid(i + 1, j + 1), lid(i, j + 1));

  // The strip between the interface line and the first right column: its left
  // side mixes shared line nodes (outside the extent) with the offset nodes.
  std::vector<Index> strip_left;
  std::vector<double> strip_left_y;
  for (int j = 0; j <= j_lo; ++j) { strip_left.push_back(lid(col, j)); strip_left_y.push_back(j * h); }
  for (int j = 0; j < m_seg; ++j) { strip_left.push_back(offs[std::size_t(j)]); strip_left_y.push_back((j_lo + j + 0.5) * h); }
  for (int j = j_hi; j <= n; ++j) { strip_left.push_back(lid(col, j)); strip_left_y.push_back(j * h); }

  std::vector<Index> strip_right;
  std::vector<double> strip_right_y;
  for (int j = 0; j <= n; ++j) { strip_right.push_back(r_index(1, j)); strip_right_y.push_back(j * h); }

  std::vector<BandNode> band_nodes;
  // Band caps inside the extent: zigzag between the line nodes and the offset
  // nodes. Base stays on one column, apex on the other, giving 2*m_seg - 1 caps.
  {
    std::vector<Index> lcol, rcol;
    std::vector<double> ly, ry;
    for (int j = j_lo; j <= j_hi; ++j) { lcol.push_back(lid(col, j)); ly.push_back(j * h); }
    for (int j = 0; j < m_seg; ++j) { rcol.push_back(offs[std::size_t(j)]); ry.push_back((j_lo + j + 0.5) * h); }
    detail::zigzag_strip(lcol, ly, rcol, ry, [&](Index a, Index b, Index apex, bool base_on_left) {
      g.add_tri(base_on_left ? a : apex, base_on_left ? b : a, base_on_left ? apex : b,
                CellTag::Band);
      // keep CCW orientation: base-on-left caps are (a,b,apex); base-on-right
      // caps (a,b on the right column) need (apex,a,b) to stay positive.
      band_nodes.push_back({apex, {a, b}});
    });
  }

  // First right strip.
  detail::zigzag_strip(strip_left, strip_left_y, strip_right, strip_right_y,
                       [&](Index a, Index b, Index apex, bool base_on_left) {
                         if (base_on_left)
                           g.add_tri(a, apex, b);  // base on interface side, CCW
                         else
                           g.add_tri(a, b, apex);
                       });

  // Remaining right block cells.
  for (int j = 0; j < n; ++j)
    for (int i = 1; i < ncol_r; ++i)
      g.add_quad(r_index(i, j), r_index(i + 1, j), r_index(i + 1, j + 1), r_index(i, j + 1));

  Mesh mesh;
  mesh.dim = 2;
  mesh.vertices = std::move(g.vertices);
  mesh.cells = std::move(g.cells);
  mesh.h = h;
  mesh.hbar = hbar;
  if (hbar == 0.0) mesh.band_nodes = std::move(band_nodes);
  detail::collect_boundary_2d(mesh);

  // Fix any negative orientations produced by the zigzag emitters.
  for (auto& c : mesh.cells) {
    if (cell_mapping_determinant(mesh, c) < 0.0) std::swap(c.v[1], c.v[2]);
  }
  if (dim == 3) {
    Mesh m3 = detail::extrude_to_3d(mesh, n);
    m3.h = h;
    m3.hbar = hbar;
    return m3;
  }
  return mesh;
}

inline Mesh build_rect_mesh(double x0, double x1, double y0, double y1, int nx, int ny) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("build_rect_mesh: need nx, ny >= 1");
  detail::Grid2DBuilder g;
  const double hx = (x1 - x0) / nx, hy = (y1 - y0) / ny;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) g.add_vertex(x0 + i * hx, y0 + j * hy);
  auto id = [nx](int i, int j) { return Index(j * (nx + 1) + i); };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      g.add_quad(id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
  Mesh mesh;
  mesh.dim = 2;
  mesh.vertices = std::move(g.vertices);
  mesh.cells = std::move(g.cells);
  mesh.h = std::max(hx, hy);
  // Boundary facets tagged by rectangle side.
  for (const auto& c : mesh.cells)
    for (int e = 0; e < 3; ++e) {
      const Index a = c.v[std::size_t(e)], b = c.v[std::size_t((e + 1) % 3)];
      const auto &pa = mesh.point(a), &pb = mesh.point(b);
      const double lo[2] = {x0, y0}, hi[2] = {x1, y1};
      for (int ax = 0; ax < 2; ++ax)
        for (int sd = 0; sd < 2; ++sd) {
          const double val = sd == 0 ? lo[ax] : hi[ax];
          if (std::abs(pa[ax] - val) < 1e-12 && std::abs(pb[ax] - val) < 1e-12 &&
              std::abs(pa[1 - ax] - pb[1 - ax]) > 1e-14)
            mesh.boundary_facets.push_back({{a, b, -1}, 2 * ax + sd});
        }
    }
  return mesh;
}

inline Mesh build_mortar_mesh(const Mesh& left, const Mesh& right, int interface_axis,
                              double interface_pos) {
  if (left.dim != 2 || right.dim != 2)
    throw std::invalid_argument("build_mortar_mesh: 2D meshes only");
  if (interface_axis != 0) throw std::invalid_argument("build_mortar_mesh: axis 0 only");
  const double tol = 1e-12;

  auto interface_nodes = [&](const Mesh& m) {
    std::vector<std::pair<double, Index>> nodes;  // (y, id)
    for (const auto& v : m.vertices)
      if (std::abs(v.coords[0] - interface_pos) < tol) nodes.push_back({v.coords[1], v.id});
    std::sort(nodes.begin(), nodes.end());
    return nodes;
  };
  auto ln = interface_nodes(left);
  auto rn = interface_nodes(right);
  if (ln.size() < 2 || rn.size() < 2)
    throw std::runtime_error("build_mortar_mesh: interfaces do not meet at the given position");
  if (std::abs(ln.front().first - rn.front().first) > tol ||
      std::abs(ln.back().first - rn.back().first) > tol)
    throw std::runtime_error("build_mortar_mesh: interface extents mismatch");

  Mesh mesh;
  mesh.dim = 2;
  mesh.vertices = left.vertices;
  const Index off = Index(left.vertices.size());
  // Right vertices appended; the two shared corner nodes collapse onto the
  // left ones so the band endpoints carry a single dof.
  std::vector<Index> rmap(right.vertices.size());
  const Index r_lo = rn.front().second, r_hi = rn.back().second;
  const Index l_lo = ln.front().second, l_hi = ln.back().second;
  Index next = off;
  for (const auto& v : right.vertices) {
    if (v.id == r_lo) { rmap[std::size_t(v.id)] = l_lo; continue; }
    if (v.id == r_hi) { rmap[std::size_t(v.id)] = l_hi; continue; }
    Vertex w = v;
    w.id = next++;
    mesh.vertices.push_back(w);
    rmap[std::size_t(v.id)] = w.id;
  }
  mesh.cells = left.cells;
  for (const auto& c : right.cells) {
    Cell d = c;
    for (int k = 0; k < 3; ++k) d.v[std::size_t(k)] = rmap[std::size_t(c.v[std::size_t(k)])];
    mesh.cells.push_back(d);
  }

  // Stitch: zigzag strip of zero-measure caps between the two columns.
  std::vector<Index> lcol, rcol;
  std::vector<double> lys, rys;
  for (const auto& [y, id] : ln) { lcol.push_back(id); lys.push_back(y); }
  for (std::size_t k = 0; k < rn.size(); ++k) {
    const Index mapped = rmap[std::size_t(rn[k].second)];
    rcol.push_back(mapped);
    rys.push_back(rn[k].first);
  }
  std::vector<BandNode> band_nodes;
  detail::zigzag_strip(lcol, lys, rcol, rys, [&](Index a, Index b, Index apex, bool) {
    Cell c;
    c.v = {a, b, apex, -1};
    c.tag = CellTag::Band;
    mesh.cells.push_back(c);
    band_nodes.push_back({apex, {a, b}});
  });

  mesh.h = std::max(left.h, right.h);
  mesh.hbar = 0.0;
  mesh.band_nodes = std::move(band_nodes);
  for (auto& c : mesh.cells)
    if (cell_mapping_determinant(mesh, c) < 0.0) std::swap(c.v[1], c.v[2]);

  mesh.boundary_facets = left.boundary_facets;
  for (const auto& f : right.boundary_facets) {
    BoundaryFacet g = f;
    g.v[0] = rmap[std::size_t(f.v[0])];
    g.v[1] = rmap[std::size_t(f.v[1])];
    mesh.boundary_facets.push_back(g);
  }
  return mesh;
}

namespace detail {

// Extrude a 2D triangle mesh through z into `layers` sheets of prisms, each
// split into 3 tets. Prism corners are ordered by their 2D parent index so
// the quad-face diagonals agree between neighbouring prisms.
inline Mesh extrude_to_3d(const Mesh& m2, int layers) {
  Mesh m3;
  m3.dim = 3;
  const std::size_t nv2 = m2.vertices.size();
  m3.vertices.reserve(nv2 * std::size_t(layers + 1));
  for (int k = 0; k <= layers; ++k)
    for (std::size_t i = 0; i < nv2; ++i) {
      Vertex v;
      v.id = Index(k * Index(nv2) + Index(i));
      v.coords = {m2.vertices[i].coords[0], m2.vertices[i].coords[1], double(k) / layers};
      m3.vertices.push_back(v);
    }
  std::vector<BandNode> band_nodes;
  for (int k = 0; k < layers; ++k) {
    const Index lo = Index(k * Index(nv2)), hi = Index((k + 1) * Index(nv2));
    for (const auto& c : m2.cells) {
      std::array<Index, 3> s = {c.v[0], c.v[1], c.v[2]};
      std::sort(s.begin(), s.end());
      const Index p0 = lo + s[0], p1 = lo + s[1], p2 = lo + s[2];
      const Index q0 = hi + s[0], q1 = hi + s[1], q2 = hi + s[2];
      const std::array<std::array<Index, 4>, 3> tets = {{{p0, p1, p2, q2}, {p0, p1, q2, q1}, {p0, q1, q2, q0}}};
      for (const auto& t : tets) {
        Cell cell;
        cell.v = t;
        cell.tag = c.tag;
        m3.cells.push_back(cell);
      }
    }
  }
  for (auto& c : m3.cells)
    if (cell_mapping_determinant(m3, c) < 0.0) std::swap(c.v[2], c.v[3]);

  // Band nodes of the collapsed slab: apex of each degenerate tet paired with
  // the opposite edge is ambiguous; keep the 2D structure per sheet instead.
  if (m2.hbar == 0.0 && !m2.band_nodes.empty()) {
    for (int k = 0; k <= layers; ++k)
      for (const auto& bn : m2.band_nodes)
        band_nodes.push_back({Index(k * Index(nv2)) + bn.apex,
                              {Index(k * Index(nv2)) + bn.feet[0], Index(k * Index(nv2)) + bn.feet[1]}});
    m3.band_nodes = std::move(band_nodes);
  }
  m3.hbar = m2.hbar;
  m3.h = m2.h;

  // Boundary facets: extruded side walls plus the z = 0 / z = 1 caps.
  for (int k = 0; k < layers; ++k) {
    const Index lo = Index(k * Index(nv2)), hi = Index((k + 1) * Index(nv2));
    for (const auto& f : m2.boundary_facets) {
      std::array<Index, 2> s = {f.v[0], f.v[1]};
      if (s[1] < s[0]) std::swap(s[0], s[1]);
      m3.boundary_facets.push_back({{lo + s[0], lo + s[1], hi + s[1]}, f.side});
      m3.boundary_facets.push_back({{lo + s[0], hi + s[1], hi + s[0]}, f.side});
    }
  }
  const Index top = Index(layers * Index(nv2));
  for (const auto& c : m2.cells) {
    std::array<Index, 3> s = {c.v[0], c.v[1], c.v[2]};
    std::sort(s.begin(), s.end());
    if (cell_measure(m2, c) > 0.0) {
      m3.boundary_facets.push_back({{s[0], s[1], s[2]}, 4});
      m3.boundary_facets.push_back({{top + s[0], top + s[1], top + s[2]}, 5});
    }
  }
  return m3;
}

}  // namespace detail

}  // namespace tfem

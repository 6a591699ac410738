#pragma once

// ASCII MSH v2.2 reader/writer. Physical tags: 1 = interior cells,
// 2 = band cells, 10+k = boundary side k. Coordinates are printed with 17
// significant digits so doubles round-trip bitwise.

#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfem/mesh.hpp"

namespace tfem {

struct MshParseError : std::runtime_error {
  MshParseError(const std::string& what, long line)
      : std::runtime_error("msh parse error at line " + std::to_string(line) + ": " + what),
        line_number(line) {}
  long line_number;
};

inline void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_mesh: cannot open " + path);
  char buf[96];
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$Nodes\n" << mesh.vertices.size() << "\n";
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g %.17g\n", v.id + 1, v.coords[0], v.coords[1],
                  v.coords[2]);
    out << buf;
  }
  out << "$EndNodes\n$Elements\n" << (mesh.cells.size() + mesh.boundary_facets.size()) << "\n";
  long id = 1;
  const int cell_type = mesh.dim == 2 ? 2 : 4;
  const int facet_type = mesh.dim == 2 ? 1 : 2;
  for (const auto& f : mesh.boundary_facets) {
    out << id++ << ' ' << facet_type << " 2 " << (10 + f.side) << ' ' << (10 + f.side);
    const int nfv = mesh.dim == 2 ? 2 : 3;
    for (int k = 0; k < nfv; ++k) out << ' ' << f.v[std::size_t(k)] + 1;
    out << '\n';
  }
  for (const auto& c : mesh.cells) {
    out << id++ << ' ' << cell_type << " 2 " << int(c.tag) << ' ' << int(c.tag);
    for (int k = 0; k < mesh.nodes_per_cell(); ++k) out << ' ' << c.v[std::size_t(k)] + 1;
    out << '\n';
  }
  out << "$EndElements\n";
  if (!out) throw std::runtime_error("write_mesh: write failed for " + path);
}

inline Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_mesh: cannot open " + path);
  std::string line;
  long ln = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++ln;
    return true;
  };

  Mesh mesh;
  mesh.dim = 0;
  std::map<long, Index> id_map;
  bool saw_nodes = false, saw_elements = false;

  while (next_line()) {
    if (line.rfind("$MeshFormat", 0) == 0) {
      if (!next_line()) throw MshParseError("truncated $MeshFormat", ln);
      std::istringstream fmt(line);
      double version = 0;
      fmt >> version;
      if (!fmt || version < 2.0 || version >= 3.0)
        throw MshParseError("unsupported format version '" + line + "'", ln);
      if (!next_line() || line.rfind("$EndMeshFormat", 0) != 0)
        throw MshParseError("missing $EndMeshFormat", ln);
    } else if (line.rfind("$Nodes", 0) == 0) {
      saw_nodes = true;
      if (!next_line()) throw MshParseError("truncated $Nodes", ln);
      long count = 0;
      try {
        count = std::stol(line);
      } catch (...) {
        throw MshParseError("bad node count '" + line + "'", ln);
      }
      for (long i = 0; i < count; ++i) {
        if (!next_line()) throw MshParseError("node list truncated", ln);
        std::istringstream is(line);
        long id;
        double x, y, z;
        if (!(is >> id >> x >> y >> z)) throw MshParseError("bad node line", ln);
        if (id_map.count(id)) throw MshParseError("duplicate node id " + std::to_string(id), ln);
        const Index idx = Index(mesh.vertices.size());
        id_map[id] = idx;
        mesh.vertices.push_back({idx, {x, y, z}});
      }
      if (!next_line() || line.rfind("$EndNodes", 0) != 0)
        throw MshParseError("missing $EndNodes", ln);
    } else if (line.rfind("$Elements", 0) == 0) {
      saw_elements = true;
      if (!next_line()) throw MshParseError("truncated $Elements", ln);
      long count = 0;
      try {
        count = std::stol(line);
      } catch (...) {
        throw MshParseError("bad element count '" + line + "'", ln);
      }
      for (long i = 0; i < count; ++i) {
        if (!next_line()) throw MshParseError("element list truncated", ln);
        std::istringstream is(line);
        long id, type, ntags;
        if (!(is >> id >> type >> ntags)) throw MshParseError("bad element line", ln);
        std::vector<long> tags(std::size_t(ntags));
        for (auto& t : tags)
          if (!(is >> t)) throw MshParseError("bad element tags", ln);
        const int phys = tags.empty() ? 0 : int(tags[0]);
        auto read_nodes = [&](int n) {
          std::vector<Index> vs;
          for (int k = 0; k < n; ++k) {
            long v;
            if (!(is >> v)) throw MshParseError("bad element connectivity", ln);
            const auto it = id_map.find(v);
            if (it == id_map.end())
              throw MshParseError("element references unknown node " + std::to_string(v), ln);
            vs.push_back(it->second);
          }
          return vs;
        };
        if (type == 2 || type == 4) {  // triangle / tet
          const int nv = type == 2 ? 3 : 4;
          if (mesh.dim == 0) mesh.dim = type == 2 ? 2 : 3;
          if ((type == 2 && mesh.dim == 3)) {
            // boundary triangles of a tet mesh
            const auto vs = read_nodes(3);
            mesh.boundary_facets.push_back({{vs[0], vs[1], vs[2]}, phys - 10});
            continue;
          }
          const auto vs = read_nodes(nv);
          Cell c;
          for (int k = 0; k < nv; ++k) c.v[std::size_t(k)] = vs[std::size_t(k)];
          c.tag = phys == 2 ? CellTag::Band : CellTag::Interior;
          mesh.cells.push_back(c);
        } else if (type == 1) {  // boundary line
          const auto vs = read_nodes(2);
          mesh.boundary_facets.push_back({{vs[0], vs[1], -1}, phys - 10});
        } else if (type == 15) {  // point: skip remaining fields
          read_nodes(1);
        } else {
          throw MshParseError("unsupported element type " + std::to_string(type), ln);
        }
      }
      if (!next_line() || line.rfind("$EndElements", 0) != 0)
        throw MshParseError("missing $EndElements", ln);
    } else if (!line.empty() && line[0] == '$') {
      const std::string section = line;
      while (next_line() && line.rfind("$End", 0) != 0) {
      }
    }
  }
  if (!saw_nodes || !saw_elements) throw MshParseError("missing $Nodes or $Elements section", ln);
  if (mesh.dim == 0) throw MshParseError("no cells found", ln);

  for (const auto& c : mesh.cells)
    for (int k = 0; k < mesh.nodes_per_cell(); ++k)
      if (c.v[std::size_t(k)] < 0 || c.v[std::size_t(k)] >= Index(mesh.vertices.size()))
        throw MshParseError("cell references missing vertex", ln);

  // Derived metadata: nominal size, band width, collapsed-cap structure.
  double hmax = 0.0;
  bool has_band = false;
  double min_alt = std::numeric_limits<double>::max();
  for (const auto& c : mesh.cells) {
    hmax = std::max(hmax, longest_edge(mesh, c));
    if (c.tag == CellTag::Band) {
      has_band = true;
      const double le = longest_edge(mesh, c);
      const double measure = cell_measure(mesh, c);
      const double alt = le > 0 ? (mesh.dim == 2 ? 2.0 * measure / le : measure) : 0.0;
      min_alt = std::min(min_alt, alt);
    }
  }
  mesh.h = hmax;
  mesh.hbar = has_band ? min_alt : -1.0;
  if (has_band && mesh.hbar == 0.0 && mesh.dim == 2) {
    // rebuild apex/feet pairs of collapsed caps: apex = vertex opposite the
    // longest edge
    for (const auto& c : mesh.cells) {
      if (c.tag != CellTag::Band || cell_measure(mesh, c) > 0.0) continue;
      double best = -1.0;
      int opp = 0;
      for (int e = 0; e < 3; ++e) {
        const auto& a = mesh.point(c.v[std::size_t((e + 1) % 3)]);
        const auto& b = mesh.point(c.v[std::size_t((e + 2) % 3)]);
        const double d2 = (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]);
        if (d2 > best) {
          best = d2;
          opp = e;
        }
      }
      mesh.band_nodes.push_back(
          {c.v[std::size_t(opp)], {c.v[std::size_t((opp + 1) % 3)], c.v[std::size_t((opp + 2) % 3)]}});
    }
  }
  return mesh;
}

}  // namespace tfem

#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tfem/config.hpp"
#include "tfem/mesh.hpp"
#include "tfem/msh_io.hpp"

using namespace tfem;
namespace fs = std::filesystem;

namespace {
fs::path tmp_file(const std::string& name) {
  return fs::temp_directory_path() / ("tfem_test_" + name);
}
}  // namespace

TEST_CASE("msh round trip is bitwise on coordinates and tags") {
  const Mesh m = build_band_mesh(2, 10, BandSpec{});
  const auto path = tmp_file("band.msh");
  write_mesh(m, path.string());
  const Mesh r = read_mesh(path.string());
  REQUIRE(r.num_vertices() == m.num_vertices());
  REQUIRE(r.num_cells() == m.num_cells());
  for (std::size_t i = 0; i < m.num_vertices(); ++i)
    for (int d = 0; d < 3; ++d)
      CHECK(r.vertices[i].coords[std::size_t(d)] == m.vertices[i].coords[std::size_t(d)]);
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    CHECK(r.cells[c].tag == m.cells[c].tag);
    for (int k = 0; k < 3; ++k) CHECK(r.cells[c].v[std::size_t(k)] == m.cells[c].v[std::size_t(k)]);
  }
  CHECK(r.boundary_facets.size() == m.boundary_facets.size());
  // collapsed caps reconstructed
  CHECK(r.hbar == 0.0);
  CHECK(r.band_nodes.size() == m.band_nodes.size());
  fs::remove(path);
}

TEST_CASE("msh 3d slab round trip preserves min |J| = 0") {
  const Mesh m = build_band_mesh(3, 3, BandSpec{});
  const auto path = tmp_file("slab.msh");
  write_mesh(m, path.string());
  const Mesh r = read_mesh(path.string());
  double min_band = 1e300;
  for (const auto& c : r.cells)
    if (c.tag == CellTag::Band)
      min_band = std::min(min_band, std::abs(cell_mapping_determinant(r, c)));
  CHECK(min_band == 0.0);
  CHECK(domain_measure(r) == Catch::Approx(1.0).margin(1e-12));
  fs::remove(path);
}

TEST_CASE("msh parse errors carry line numbers") {
  const auto path = tmp_file("dup.msh");
  {
    std::ofstream out(path);
    out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n2\n";
    out << "1 0 0 0\n1 1 0 0\n$EndNodes\n";  // duplicate node id on line 7
    out << "$Elements\n0\n$EndElements\n";
  }
  try {
    read_mesh(path.string());
    FAIL("expected MshParseError");
  } catch (const MshParseError& e) {
    CHECK(e.line_number == 7);
    CHECK(std::string(e.what()).find("duplicate node id") != std::string::npos);
  }
  fs::remove(path);

  const auto bad = tmp_file("bad.msh");
  {
    std::ofstream out(bad);
    out << "$Nodes\nnot_a_number\n";
  }
  CHECK_THROWS_AS(read_mesh(bad.string()), MshParseError);
  fs::remove(bad);
}

TEST_CASE("config parsing") {
  const Config cfg = Config::parse_string(
      "study = convergence\n"
      "dim = 2\n"
      "h_list = 1/10 1/14 0.05\n"
      "# a comment line\n"
      "temper = { kind = power, C = 1, k = 3 }\n"
      "solver = { method = cg-jacobi, rel_tol = 1e-10 }\n");
  CHECK(cfg.get_string("study") == "convergence");
  CHECK(cfg.get_int("dim", 0) == 2);
  const auto h = cfg.get_list("h_list");
  REQUIRE(h.size() == 3);
  CHECK(h[0] == Catch::Approx(0.1));
  CHECK(h[1] == Catch::Approx(1.0 / 14));
  CHECK(h[2] == Catch::Approx(0.05));
  const TemperPolicy policy = cfg.get_policy(2);
  CHECK(std::holds_alternative<PowerLawPolicy>(policy));
  const SolverConfig sc = cfg.get_solver();
  CHECK(sc.method == SolverMethod::CgJacobi);
  CHECK(sc.rel_tol == Catch::Approx(1e-10));
  CHECK_NOTHROW(cfg.reject_unknown_keys());
}

TEST_CASE("config rejects unknown keys and malformed input") {
  const Config cfg = Config::parse_string("study = x\nbogus_key = 1\n");
  cfg.get_string("study");
  CHECK_THROWS_AS(cfg.reject_unknown_keys(), ConfigError);

  CHECK_THROWS_AS(Config::parse_string("key_without_value\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_string("block = { unterminated\n"), ConfigError);
  const Config bad_num = Config::parse_string("x = abc\n");
  CHECK_THROWS_AS(bad_num.get_double("x"), ConfigError);
  CHECK_THROWS_AS(Config::parse_file("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("policy parsing variants") {
  CHECK(std::holds_alternative<FixedPolicy>(
      Config::parse_string("temper = { kind = fixed, Jmin = 1e-8 }\n").get_policy(2)));
  CHECK(std::holds_alternative<HighOrderPolicy>(
      Config::parse_string("temper = { kind = high-order, C = 1, order = 3 }\n").get_policy(2)));
  CHECK(std::holds_alternative<TheoreticalOptPolicy>(
      Config::parse_string("temper = { kind = theoretical-opt, w1 = 2, w2 = 4 }\n").get_policy(2)));
  CHECK(std::holds_alternative<PowerLawPolicy>(Config::parse_string("").get_policy(2)));
  CHECK_THROWS_AS(Config::parse_string("temper = { kind = nope }\n").get_policy(2), ConfigError);
}

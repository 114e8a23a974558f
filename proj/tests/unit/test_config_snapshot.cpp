#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gspm/config.hpp"
#include "gspm/errors.hpp"
#include "gspm/experiments.hpp"
#include "gspm/field_ops.hpp"
#include "gspm/snapshot.hpp"

using namespace gspm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "gspm_test_io";
  fs::create_directories(dir);
  return dir;
}

constexpr const char* kBaseConfig = R"(# comment line
scheme = b
mesh.nx = 8
mesh.ny = 4
mesh.nz = 1
mesh.dx = 0.125
mesh.dy = 0.25
mesh.dz = 1.0
override.Q = 0.0
override.eps = 1.0
override.alpha = 0.1
time.dt = 1e-3   # trailing comment
time.n_steps = 50
terms.anisotropy = false
terms.external = true
field.he = 0.01 0 0
output.dir = out_test
seed = 7
)";

}  // namespace

TEST_CASE("config parses a dimensionless run") {
  const RunConfig cfg = parse_config(kBaseConfig);
  CHECK(cfg.scheme == SchemeKind::SchemeB);
  CHECK(cfg.mesh.nx == 8);
  CHECK(cfg.mesh.dy == doctest::Approx(0.25));
  CHECK(cfg.dt == doctest::Approx(1e-3));
  CHECK(cfg.steps == 50);
  CHECK(cfg.external);
  CHECK(cfg.h_ext.x == doctest::Approx(0.01));
  CHECK(cfg.eps == doctest::Approx(1.0));
  CHECK(cfg.output_dir == "out_test");
  CHECK(cfg.seed == 7);
}

TEST_CASE("physical dt converts through the material time unit") {
  const std::string text = R"(
mesh.nx = 4
mesh.ny = 4
mesh.nz = 1
mesh.size_x = 256e-9
mesh.size_y = 256e-9
mesh.size_z = 4e-9
time.dt_seconds = 1e-12
time.n_steps = 10
)";
  const RunConfig cfg = parse_config(text);
  const double expect = 1e-12 / cfg.material.time_unit();
  CHECK(cfg.dt == doctest::Approx(expect).epsilon(1e-12));
  // L defaults to the box diagonal
  const double diag = std::sqrt(256e-9 * 256e-9 * 2 + 4e-9 * 4e-9);
  CHECK(cfg.material.L == doctest::Approx(diag).epsilon(1e-12));
}

TEST_CASE("config rejections") {
  SUBCASE("both T and n_steps") {
    const std::string text = "mesh.nx = 2\nmesh.dx = 1\ntime.dt = 1e-3\ntime.T = 1\ntime.n_steps = 5\n";
    CHECK_THROWS_AS(parse_config(text), ValidationError);
  }
  SUBCASE("both dt forms") {
    const std::string text = "mesh.nx = 2\nmesh.dx = 1\ntime.dt = 1e-3\ntime.dt_seconds = 1e-12\ntime.n_steps = 5\n";
    CHECK_THROWS_AS(parse_config(text), ValidationError);
  }
  SUBCASE("unknown key names the offender") {
    try {
      parse_config("foo = 1\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("foo") != std::string::npos);
      CHECK(e.line == 1);
    }
  }
  SUBCASE("duplicate keys") {
    CHECK_THROWS_AS(parse_config("mesh.nx = 2\nmesh.nx = 3\n"), ParseError);
  }
  SUBCASE("malformed line") {
    CHECK_THROWS_AS(parse_config("mesh.nx 2\n"), ParseError);
  }
  SUBCASE("missing mesh extent") {
    CHECK_THROWS_AS(parse_config("mesh.nx = 2\ntime.dt = 1e-3\ntime.n_steps = 1\n"),
                    ValidationError);
  }
  SUBCASE("bad vector value") {
    CHECK_THROWS_AS(parse_config("field.he = 1 2\nmesh.dx = 1\ntime.dt = 1\ntime.n_steps = 1\n"),
                    ParseError);
  }
}

TEST_CASE("csv snapshot round trip is byte identical") {
  const fs::path dir = temp_dir();
  const Mesh mesh = make_mesh_3d(5, 3, 2, 0.2, 0.5, 0.7);
  const VectorField f = random_smooth_unit_field(mesh, 11);

  const fs::path p1 = dir / "snap1.csv";
  const fs::path p2 = dir / "snap2.csv";
  write_field_csv(p1, f);
  const VectorField g = read_field_csv(p1);
  CHECK(g.mesh.nx == mesh.nx);
  CHECK(g.mesh.ny == mesh.ny);
  CHECK(g.mesh.nz == mesh.nz);
  CHECK(g.mesh.dx == doctest::Approx(mesh.dx).epsilon(1e-15));
  CHECK(max_norm_error(f, g) == 0.0);  // 17 significant digits round-trip doubles exactly
  write_field_csv(p2, g);
  CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("binary snapshot layout and round trip") {
  const fs::path dir = temp_dir();
  const Mesh mesh = make_mesh_3d(3, 2, 2, 0.25, 0.5, 1.5);
  const VectorField f = random_smooth_unit_field(mesh, 12);
  const fs::path p = dir / "snap.bin";
  write_field_binary(p, f);

  const std::string bytes = slurp(p);
  REQUIRE(bytes.size() == 6 * 8 + f.size() * 3 * 8);
  std::uint64_t nx = 0;
  std::memcpy(&nx, bytes.data(), 8);
  CHECK(nx == 3);
  double dz = 0.0;
  std::memcpy(&dz, bytes.data() + 5 * 8, 8);
  CHECK(dz == 1.5);

  const VectorField g = read_field_binary(p);
  CHECK(max_norm_error(f, g) == 0.0);
  CHECK(g.mesh.dy == 0.5);
}

TEST_CASE("angle map csv has the degeneracy column") {
  const fs::path dir = temp_dir();
  const Mesh mesh = make_mesh_1d(2, 1.0);
  VectorField f(mesh);
  f.set_cell(0, {1.0, 1.0, 0.0});
  f.set_cell(1, {0.0, 0.0, 1.0});
  const fs::path p = dir / "angle.csv";
  write_angle_csv(p, in_plane_angle_map(f));
  std::ifstream in(p);
  std::string header, row0, row1;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  CHECK(header == "x,y,z,angle,degenerate");
  CHECK(row0.back() == '0');
  CHECK(row1.back() == '1');
}

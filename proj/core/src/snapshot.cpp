#include "gspm/snapshot.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "gspm/errors.hpp"

namespace gspm {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

void write_field_csv(const std::filesystem::path& path, const VectorField& f) {
  std::ofstream out = open_out(path, std::ios::out | std::ios::trunc);
  out << "x,y,z,m1,m2,m3\n";
  const Mesh& m = f.mesh;
  for (std::size_t k = 0; k < m.nz; ++k) {
    for (std::size_t j = 0; j < m.ny; ++j) {
      for (std::size_t i = 0; i < m.nx; ++i) {
        const auto c = m.center(i, j, k);
        const std::size_t at = m.index(i, j, k);
        out << format_g17(c[0]) << ',' << format_g17(c[1]) << ',' << format_g17(c[2]) << ','
            << format_g17(f.comp[0][at]) << ',' << format_g17(f.comp[1][at]) << ','
            << format_g17(f.comp[2][at]) << '\n';
      }
    }
  }
}

void write_field_binary(const std::filesystem::path& path, const VectorField& f) {
  std::ofstream out = open_out(path, std::ios::out | std::ios::trunc | std::ios::binary);
  const Mesh& m = f.mesh;
  const std::uint64_t counts[3] = {m.nx, m.ny, m.nz};
  const double steps[3] = {m.dx, m.dy, m.dz};
  out.write(reinterpret_cast<const char*>(counts), sizeof(counts));
  out.write(reinterpret_cast<const char*>(steps), sizeof(steps));
  std::vector<double> row(3);
  for (std::size_t at = 0; at < f.size(); ++at) {
    row[0] = f.comp[0][at];
    row[1] = f.comp[1][at];
    row[2] = f.comp[2][at];
    out.write(reinterpret_cast<const char*>(row.data()), 3 * sizeof(double));
  }
}

VectorField read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "x,y,z,m1,m2,m3") {
    throw ParseError(1, "expected snapshot header x,y,z,m1,m2,m3");
  }

  struct Row {
    double x, y, z, m1, m2, m3;
  };
  std::vector<Row> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Row r{};
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    if (!(ss >> r.x >> r.y >> r.z >> r.m1 >> r.m2 >> r.m3)) {
      throw ParseError(lineno, "malformed snapshot row");
    }
    rows.push_back(r);
  }
  if (rows.empty()) throw ParseError(lineno, "empty snapshot");

  // reconstruct the mesh from the x-fastest cell-center lattice
  Mesh mesh;
  std::size_t nx = 1;
  while (nx < rows.size() && rows[nx].x > rows[nx - 1].x) ++nx;
  std::size_t nxy = nx;
  while (nxy < rows.size() && rows[nxy].z == rows[0].z) nxy += nx;
  if (rows.size() % nx != 0 || nxy % nx != 0 || rows.size() % nxy != 0) {
    throw ParseError(lineno, "snapshot rows do not form a grid");
  }
  mesh.nx = nx;
  mesh.ny = nxy / nx;
  mesh.nz = rows.size() / nxy;
  mesh.dx = nx > 1 ? rows[1].x - rows[0].x : 1.0;
  mesh.dy = mesh.ny > 1 ? rows[nx].y - rows[0].y : 1.0;
  mesh.dz = mesh.nz > 1 ? rows[nxy].z - rows[0].z : 1.0;
  mesh.origin = {rows[0].x - 0.5 * mesh.dx, rows[0].y - 0.5 * mesh.dy,
                 rows[0].z - 0.5 * mesh.dz};
  validate(mesh);

  VectorField f(mesh);
  for (std::size_t at = 0; at < rows.size(); ++at) {
    f.comp[0][at] = rows[at].m1;
    f.comp[1][at] = rows[at].m2;
    f.comp[2][at] = rows[at].m3;
  }
  return f;
}

VectorField read_field_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::uint64_t counts[3];
  double steps[3];
  in.read(reinterpret_cast<char*>(counts), sizeof(counts));
  in.read(reinterpret_cast<char*>(steps), sizeof(steps));
  if (!in) throw std::runtime_error("truncated snapshot header: " + path.string());
  Mesh mesh;
  mesh.nx = counts[0];
  mesh.ny = counts[1];
  mesh.nz = counts[2];
  mesh.dx = steps[0];
  mesh.dy = steps[1];
  mesh.dz = steps[2];
  validate(mesh);
  VectorField f(mesh);
  std::vector<double> row(3);
  for (std::size_t at = 0; at < f.size(); ++at) {
    in.read(reinterpret_cast<char*>(row.data()), 3 * sizeof(double));
    if (!in) throw std::runtime_error("truncated snapshot data: " + path.string());
    f.comp[0][at] = row[0];
    f.comp[1][at] = row[1];
    f.comp[2][at] = row[2];
  }
  return f;
}

VectorField read_field_auto(const std::filesystem::path& path) {
  if (path.extension() == ".bin") return read_field_binary(path);
  return read_field_csv(path);
}

void write_field_auto(const std::filesystem::path& path, const VectorField& f) {
  if (path.extension() == ".bin") {
    write_field_binary(path, f);
  } else {
    write_field_csv(path, f);
  }
}

void write_scalar_csv(const std::filesystem::path& path, const ScalarField& f,
                      const std::string& value_name) {
  std::ofstream out = open_out(path, std::ios::out | std::ios::trunc);
  out << "x,y,z," << value_name << '\n';
  const Mesh& m = f.mesh;
  for (std::size_t k = 0; k < m.nz; ++k) {
    for (std::size_t j = 0; j < m.ny; ++j) {
      for (std::size_t i = 0; i < m.nx; ++i) {
        const auto c = m.center(i, j, k);
        out << format_g17(c[0]) << ',' << format_g17(c[1]) << ',' << format_g17(c[2]) << ','
            << format_g17(f.data[m.index(i, j, k)]) << '\n';
      }
    }
  }
}

void write_angle_csv(const std::filesystem::path& path, const AngleMap& map) {
  std::ofstream out = open_out(path, std::ios::out | std::ios::trunc);
  out << "x,y,z,angle,degenerate\n";
  const Mesh& m = map.angle.mesh;
  for (std::size_t k = 0; k < m.nz; ++k) {
    for (std::size_t j = 0; j < m.ny; ++j) {
      for (std::size_t i = 0; i < m.nx; ++i) {
        const auto c = m.center(i, j, k);
        const std::size_t at = m.index(i, j, k);
        out << format_g17(c[0]) << ',' << format_g17(c[1]) << ',' << format_g17(c[2]) << ','
            << format_g17(map.angle[at]) << ',' << (map.degenerate[at] ? 1 : 0) << '\n';
      }
    }
  }
}

}  // namespace gspm

#include "gspm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gspm/errors.hpp"

namespace gspm {

void validate(const Mesh& mesh) {
  if (mesh.nx < 1 || mesh.ny < 1 || mesh.nz < 1) {
    throw ValidationError("mesh cell counts must be >= 1");
  }
  if (!(mesh.dx > 0.0) || !(mesh.dy > 0.0) || !(mesh.dz > 0.0)) {
    throw ValidationError("mesh spacings must be > 0");
  }
}

Mesh make_mesh_1d(std::size_t nx, double dx) {
  Mesh m;
  m.nx = nx;
  m.dx = dx;
  validate(m);
  return m;
}

Mesh make_mesh_3d(std::size_t nx, std::size_t ny, std::size_t nz,
                  double dx, double dy, double dz) {
  Mesh m;
  m.nx = nx;
  m.ny = ny;
  m.nz = nz;
  m.dx = dx;
  m.dy = dy;
  m.dz = dz;
  validate(m);
  return m;
}

Mesh mesh_from_uniform_spacing(const std::array<double, 3>& box, double spacing) {
  if (!(spacing > 0.0)) throw ValidationError("spacing must be > 0");
  Mesh m;
  std::size_t* counts[3] = {&m.nx, &m.ny, &m.nz};
  double* steps[3] = {&m.dx, &m.dy, &m.dz};
  for (int a = 0; a < 3; ++a) {
    const auto n = static_cast<std::size_t>(std::max(1.0, std::round(box[a] / spacing)));
    *counts[a] = n;
    *steps[a] = box[a] / static_cast<double>(n);
  }
  validate(m);
  return m;
}

}  // namespace gspm

#pragma once

#include <array>
#include <cstddef>

namespace gspm {

/// Structured cell-centered grid. Cell (i,j,k) (0-based) has center
/// origin + ((i+1/2)dx, (j+1/2)dy, (k+1/2)dz). Linear storage is
/// x-fastest, then y, then z. 1D problems use ny = nz = 1.
struct Mesh {
  std::size_t nx = 1, ny = 1, nz = 1;
  double dx = 1.0, dy = 1.0, dz = 1.0;
  std::array<double, 3> origin{0.0, 0.0, 0.0};

  std::size_t cells() const { return nx * ny * nz; }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return i + nx * (j + ny * k);
  }

  std::array<double, 3> center(std::size_t i, std::size_t j, std::size_t k) const {
    return {origin[0] + (static_cast<double>(i) + 0.5) * dx,
            origin[1] + (static_cast<double>(j) + 0.5) * dy,
            origin[2] + (static_cast<double>(k) + 0.5) * dz};
  }

  bool operator==(const Mesh&) const = default;
};

/// Throws ValidationError unless nx,ny,nz >= 1 and dx,dy,dz > 0.
void validate(const Mesh& mesh);

Mesh make_mesh_1d(std::size_t nx, double dx);
Mesh make_mesh_3d(std::size_t nx, std::size_t ny, std::size_t nz,
                  double dx, double dy, double dz);

/// Mesh covering a box with a uniform target spacing; cell counts are
/// rounded to the nearest integer >= 1 per axis and the spacing adjusted
/// per axis so the box is covered exactly.
Mesh mesh_from_uniform_spacing(const std::array<double, 3>& box, double spacing);

}  // namespace gspm

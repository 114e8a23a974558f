#pragma once

#include <vector>

#include "gspm/fields.hpp"

namespace gspm {

/// Per-cell normalization m / |m|. Result carries the unit tag.
/// Throws ZeroVectorError (first offending cell) if any |m| < 1e-300.
VectorField project_onto_sphere(const VectorField& f);

/// Arithmetic mean of each component over all cells (uniform cell volumes).
Vec3 average_magnetization(const VectorField& f);

/// max over cells and components of |a - b|. Throws MeshMismatchError.
double max_norm_error(const VectorField& a, const VectorField& b);

/// atan2(m2, m1) per cell, range (-pi, pi]; degenerate cells (m1 = m2 = 0)
/// emit angle 0 and are flagged.
struct AngleMap {
  ScalarField angle;
  std::vector<bool> degenerate;
};

AngleMap in_plane_angle_map(const VectorField& f);

}  // namespace gspm

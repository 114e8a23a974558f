#include "gspm/field_ops.hpp"

#include <cmath>
#include <numbers>

#include "gspm/errors.hpp"

namespace gspm {

VectorField project_onto_sphere(const VectorField& f) {
  VectorField out(f.mesh);
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double m1 = f.comp[0][i], m2 = f.comp[1][i], m3 = f.comp[2][i];
    const double nrm = std::sqrt(m1 * m1 + m2 * m2 + m3 * m3);
    if (nrm < 1e-300) throw ZeroVectorError(i);
    const double inv = 1.0 / nrm;
    out.comp[0][i] = m1 * inv;
    out.comp[1][i] = m2 * inv;
    out.comp[2][i] = m3 * inv;
  }
  out.unit = true;
  return out;
}

Vec3 average_magnetization(const VectorField& f) {
  Vec3 sum{};
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    sum.x += f.comp[0][i];
    sum.y += f.comp[1][i];
    sum.z += f.comp[2][i];
  }
  const double inv = 1.0 / static_cast<double>(n);
  return sum * inv;
}

double max_norm_error(const VectorField& a, const VectorField& b) {
  if (a.mesh != b.mesh) throw MeshMismatchError("max_norm_error");
  double worst = 0.0;
  for (int c = 0; c < 3; ++c) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(a.comp[c][i] - b.comp[c][i]));
    }
  }
  return worst;
}

AngleMap in_plane_angle_map(const VectorField& f) {
  AngleMap out;
  out.angle = ScalarField(f.mesh);
  out.degenerate.assign(f.size(), false);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double m1 = f.comp[0][i], m2 = f.comp[1][i];
    if (m1 == 0.0 && m2 == 0.0) {
      out.angle[i] = 0.0;
      out.degenerate[i] = true;
      continue;
    }
    double a = std::atan2(m2, m1);
    if (a <= -std::numbers::pi) a = std::numbers::pi;  // range (-pi, pi]
    out.angle[i] = a;
  }
  return out;
}

}  // namespace gspm

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "gspm/mesh.hpp"

namespace gspm {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](std::size_t c) { return c == 0 ? x : (c == 1 ? y : z); }
  double operator[](std::size_t c) const { return c == 0 ? x : (c == 1 ? y : z); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  friend Vec3 operator*(double s, const Vec3& v) { return v * s; }

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

struct ScalarField {
  Mesh mesh;
  std::vector<double> data;

  ScalarField() = default;
  explicit ScalarField(const Mesh& m, double fill = 0.0) : mesh(m), data(m.cells(), fill) {}

  double& operator[](std::size_t idx) { return data[idx]; }
  double operator[](std::size_t idx) const { return data[idx]; }
  std::size_t size() const { return data.size(); }
};

/// Three-component field on a Mesh. Components are stored as separate
/// contiguous planes so per-component solves and transforms work on plain
/// scalar arrays. Cell order within a component is x-fastest.
struct VectorField {
  Mesh mesh;
  std::array<std::vector<double>, 3> comp;
  /// Set by project_onto_sphere; cleared by anything that breaks |m| = 1.
  bool unit = false;

  VectorField() = default;
  explicit VectorField(const Mesh& m, Vec3 fill = {})
      : mesh(m),
        comp{std::vector<double>(m.cells(), fill.x), std::vector<double>(m.cells(), fill.y),
             std::vector<double>(m.cells(), fill.z)} {}

  std::size_t size() const { return comp[0].size(); }

  Vec3 cell(std::size_t idx) const { return {comp[0][idx], comp[1][idx], comp[2][idx]}; }
  void set_cell(std::size_t idx, const Vec3& v) {
    comp[0][idx] = v.x;
    comp[1][idx] = v.y;
    comp[2][idx] = v.z;
  }

  bool all_finite() const;

  /// max over cells of | |m| - 1 |.
  double max_unit_deviation() const;
};

}  // namespace gspm

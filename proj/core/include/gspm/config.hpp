#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "gspm/fields.hpp"
#include "gspm/material.hpp"
#include "gspm/mesh.hpp"
#include "gspm/schemes.hpp"

namespace gspm {

/// Parsed run configuration. The document format is line-oriented UTF-8:
/// `section.key = value`, `#` comments, unknown keys rejected. Exactly one
/// of {T, n_steps} and one of {dt_seconds, dt} must be given.
struct RunConfig {
  SchemeKind scheme = SchemeKind::SchemeA;

  std::size_t nx = 1, ny = 1, nz = 1;
  std::optional<std::array<double, 3>> size_m;    // physical box, meters
  std::optional<std::array<double, 3>> spacing;   // dimensionless dx,dy,dz

  MaterialParams material;
  bool material_given = false;
  bool length_given = false;  // material.L set explicitly
  std::optional<double> q_override, eps_override, alpha_override;

  std::optional<double> dt_seconds, dt_dimensionless;
  std::optional<double> t_seconds, t_dimensionless;
  std::optional<std::int64_t> n_steps;

  bool anisotropy = false, external = false, stray = false;
  Vec3 h_ext{};

  std::string output_dir = "out";
  std::int64_t snapshot_stride = 0;
  std::uint64_t seed = 0;

  // derived (filled by finalize)
  Mesh mesh;
  double dt = 0.0;       // dimensionless
  std::int64_t steps = 0;
  double q = 0.0, eps = 1.0, alpha = 0.1;
};

/// Parses and validates; throws ParseError (with line number) on malformed
/// or unknown keys, ValidationError on violated invariants.
RunConfig parse_config(const std::string& text);

/// Reads a file and parses it.
RunConfig parse_config_file(const std::string& path);

}  // namespace gspm

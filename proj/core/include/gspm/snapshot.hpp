#pragma once

#include <filesystem>
#include <string>

#include "gspm/field_ops.hpp"
#include "gspm/fields.hpp"

namespace gspm {

/// Plain-text snapshot: header `x,y,z,m1,m2,m3`, one row per cell in
/// x-fastest order, 17 significant digits.
void write_field_csv(const std::filesystem::path& path, const VectorField& f);

/// Compact binary snapshot: 6 little-endian 64-bit header words
/// (nx,ny,nz as uint64; dx,dy,dz as float64) followed by 3 little-endian
/// float64 per cell (m1,m2,m3), x-fastest.
void write_field_binary(const std::filesystem::path& path, const VectorField& f);

VectorField read_field_csv(const std::filesystem::path& path);
VectorField read_field_binary(const std::filesystem::path& path);

/// Detects by extension: ".bin" binary, anything else CSV.
VectorField read_field_auto(const std::filesystem::path& path);
void write_field_auto(const std::filesystem::path& path, const VectorField& f);

/// Scalar map: header `x,y,z,<name>`, same ordering and precision.
void write_scalar_csv(const std::filesystem::path& path, const ScalarField& f,
                      const std::string& value_name);

/// Angle map with degeneracy flags: header `x,y,z,angle,degenerate`.
void write_angle_csv(const std::filesystem::path& path, const AngleMap& map);

/// Formats one double with 17 significant digits (shared by all writers).
std::string format_g17(double v);

}  // namespace gspm

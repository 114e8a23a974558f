#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "gspm/fields.hpp"
#include "gspm/mesh.hpp"

namespace gspm {

/// Second-order centered second differences per axis with the clamped-ghost
/// Neumann closure (the ghost neighbor of a boundary cell is the cell
/// itself, so the boundary-face difference vanishes). For ny = nz = 1 only
/// the x-term contributes.
void apply_laplacian(const ScalarField& f, ScalarField& out);
ScalarField apply_laplacian(const ScalarField& f);

/// Fast solver for (I - lambda*Lap_h)u = b, lambda >= 0, diagonalized by the
/// per-axis even-symmetric cosine transform (DCT-II forward / DCT-III back),
/// which is exact for the clamped-ghost Neumann closure. Immutable after
/// construction and shareable across threads.
class HeatOperator {
 public:
  HeatOperator(const Mesh& mesh, double lambda);
  ~HeatOperator();
  HeatOperator(HeatOperator&&) noexcept;
  HeatOperator& operator=(HeatOperator&&) noexcept;
  HeatOperator(const HeatOperator&) = delete;
  HeatOperator& operator=(const HeatOperator&) = delete;

  const Mesh& mesh() const;
  double lambda() const;

  /// Multiplier of (I - lambda*Lap_h)^-1 for the per-axis cosine mode
  /// (kx,ky,kz); lies in (0,1], equals 1 for the constant mode.
  double multiplier(std::size_t kx, std::size_t ky, std::size_t kz) const;

  /// Solves one scalar system; bumps *solve_counter by 1 when given.
  void solve(const ScalarField& b, ScalarField& u, std::int64_t* solve_counter = nullptr) const;
  ScalarField solve(const ScalarField& b, std::int64_t* solve_counter = nullptr) const;

  /// Component-wise vector solve; bumps *solve_counter by 3 when given.
  VectorField solve(const VectorField& b, std::int64_t* solve_counter = nullptr) const;

  /// Raw-array solve used by the steppers (in: cells() values, out may alias in).
  void solve_raw(const double* b, double* u, std::int64_t* solve_counter = nullptr) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Dense LU reference for (I - lambda*Lap_h)u = b on tiny meshes. Kept
/// independent of the fast path; used by tests and as an oracle.
class DenseHeatSolver {
 public:
  DenseHeatSolver(const Mesh& mesh, double lambda);

  void solve(const ScalarField& b, ScalarField& u) const;
  ScalarField solve(const ScalarField& b) const;
  VectorField solve(const VectorField& b) const;

 private:
  Mesh mesh_;
  std::size_t n_;
  std::vector<double> lu_;      // row-major factorization in place
  std::vector<std::size_t> piv_;
};

}  // namespace gspm

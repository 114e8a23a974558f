#pragma once

#include <cstdint>
#include <memory>

#include "gspm/fields.hpp"
#include "gspm/mesh.hpp"

namespace gspm {

namespace newell {

/// Self-demagnetization factor N_xx of a rectangular prism with edge
/// lengths (dx,dy,dz); N_xx + N_yy + N_zz = 1.
double self_nxx(double dx, double dy, double dz);

/// Cell-averaged demagnetization tensor entries between two congruent
/// prisms whose centers are offset by (x,y,z). The field at the target due
/// to unit magnetization in the source is h_a = -sum_b N_ab m_b.
double nxx(double x, double y, double z, double dx, double dy, double dz);
double nxy(double x, double y, double z, double dx, double dy, double dz);

}  // namespace newell

/// Demagnetization kernel of a mesh: the six tensor components stored on
/// the zero-padded (2nx)x(2ny)x(2nz) grid for aperiodic convolution, with
/// cached forward transforms. Built once per mesh; immutable afterwards.
class DemagTensor {
 public:
  explicit DemagTensor(const Mesh& mesh);
  ~DemagTensor();
  DemagTensor(DemagTensor&&) noexcept;
  DemagTensor& operator=(DemagTensor&&) noexcept;
  DemagTensor(const DemagTensor&) = delete;
  DemagTensor& operator=(const DemagTensor&) = delete;

  const Mesh& mesh() const;

  /// Kernel entry K_ab = -N_ab for a cell offset (in cells, each axis in
  /// (-n, n)); gives h_a += K_ab(p - q) m_b(q).
  double kernel(int a, int b, long ox, long oy, long oz) const;

  friend VectorField stray_field(const DemagTensor&, const VectorField&, std::int64_t*);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

DemagTensor build_demag_tensor(const Mesh& mesh);

/// h_s = K * m by zero-padded FFT convolution. One call counts as one FFT
/// execution (bumps *fft_counter by 1 when given). Throws MeshMismatchError.
VectorField stray_field(const DemagTensor& tensor, const VectorField& m,
                        std::int64_t* fft_counter = nullptr);

/// O(n^2) direct-summation reference using the same kernel entries.
VectorField stray_field_direct(const DemagTensor& tensor, const VectorField& m);

}  // namespace gspm

#include "gspm/stray_field.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gspm/errors.hpp"

namespace gspm {

namespace newell {

namespace {

// The 27-point prism sums suffer heavy cancellation; accumulate with
// Neumaier compensation in extended precision (OOMMF does the same).
long double compensated_sum(const long double* arr, int n) {
  long double sum = 0.0L, comp = 0.0L;
  for (int i = 0; i < n; ++i) {
    const long double t = sum + arr[i];
    if (std::fabs(sum) >= std::fabs(arr[i])) {
      comp += (sum - t) + arr[i];
    } else {
      comp += (arr[i] - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

long double newell_f(long double x, long double y, long double z) {
  x = std::fabs(x);
  y = std::fabs(y);
  z = std::fabs(z);
  const long double xsq = x * x, ysq = y * y, zsq = z * z;
  long double r = xsq + ysq + zsq;
  if (r <= 0.0L) return 0.0L;
  r = std::sqrt(r);

  long double piece[8];
  int count = 0;
  if (z > 0.0L) {
    piece[count++] = 2.0L * (2.0L * xsq - ysq - zsq) * r;
    const long double xyz = x * y * z;
    if (xyz > 0.0L) piece[count++] = -12.0L * xyz * std::atan2(y * z, x * r);
    if (y > 0.0L && xsq + zsq > 0.0L) {
      const long double lg = std::log(((y + r) * (y + r)) / (xsq + zsq));
      piece[count++] = 3.0L * y * zsq * lg;
      piece[count++] = -3.0L * y * xsq * lg;
    }
    if (xsq + ysq > 0.0L) {
      const long double lg = std::log(((z + r) * (z + r)) / (xsq + ysq));
      piece[count++] = 3.0L * z * ysq * lg;
      piece[count++] = -3.0L * z * xsq * lg;
    }
  } else {
    if (x == y) {
      const long double k = 2.0L * std::sqrt(2.0L) - 6.0L * std::log(1.0L + std::sqrt(2.0L));
      piece[count++] = k * xsq * x;
    } else {
      piece[count++] = 2.0L * (2.0L * xsq - ysq) * r;
      if (y > 0.0L && x > 0.0L) piece[count++] = -6.0L * y * xsq * std::log((y + r) / x);
    }
  }
  return compensated_sum(piece, count) / 12.0L;
}

long double newell_g(long double x, long double y, long double z) {
  long double sign = 1.0L;
  if (x < 0.0L) sign = -sign;
  if (y < 0.0L) sign = -sign;
  x = std::fabs(x);
  y = std::fabs(y);
  z = std::fabs(z);

  const long double xsq = x * x, ysq = y * y, zsq = z * z;
  long double r = xsq + ysq + zsq;
  if (r <= 0.0L) return 0.0L;
  r = std::sqrt(r);

  long double piece[7];
  int count = 0;
  piece[count++] = -2.0L * x * y * r;
  if (z > 0.0L) {
    piece[count++] = -z * zsq * std::atan2(x * y, z * r);
    piece[count++] = -3.0L * z * ysq * std::atan2(x * z, y * r);
    piece[count++] = -3.0L * z * xsq * std::atan2(y * z, x * r);
    if (xsq + ysq > 0.0L)
      piece[count++] = 6.0L * x * y * z * std::log((z + r) / std::sqrt(xsq + ysq));
    if (ysq + zsq > 0.0L)
      piece[count++] = y * (3.0L * zsq - ysq) * std::log((x + r) / std::sqrt(ysq + zsq));
    if (xsq + zsq > 0.0L)
      piece[count++] = x * (3.0L * zsq - xsq) * std::log((y + r) / std::sqrt(xsq + zsq));
  } else {
    if (y > 0.0L) piece[count++] = -y * ysq * std::log((x + r) / y);
    if (x > 0.0L) piece[count++] = -x * xsq * std::log((y + r) / x);
  }
  return sign * compensated_sum(piece, count) / 6.0L;
}

long double sda00(long double x, long double y, long double z, long double dx, long double dy,
                  long double dz) {
  // Nxx * 4*pi*dx*dy*dz, collapsed 27-point difference of newell_f.
  long double arr[27];
  arr[0] = -newell_f(x + dx, y + dy, z + dz);
  arr[1] = -newell_f(x + dx, y - dy, z + dz);
  arr[2] = -newell_f(x + dx, y - dy, z - dz);
  arr[3] = -newell_f(x + dx, y + dy, z - dz);
  arr[4] = -newell_f(x - dx, y + dy, z - dz);
  arr[5] = -newell_f(x - dx, y + dy, z + dz);
  arr[6] = -newell_f(x - dx, y - dy, z + dz);
  arr[7] = -newell_f(x - dx, y - dy, z - dz);
  arr[8] = 2.0L * newell_f(x, y - dy, z - dz);
  arr[9] = 2.0L * newell_f(x, y - dy, z + dz);
  arr[10] = 2.0L * newell_f(x, y + dy, z + dz);
  arr[11] = 2.0L * newell_f(x, y + dy, z - dz);
  arr[12] = 2.0L * newell_f(x + dx, y + dy, z);
  arr[13] = 2.0L * newell_f(x + dx, y, z + dz);
  arr[14] = 2.0L * newell_f(x + dx, y, z - dz);
  arr[15] = 2.0L * newell_f(x + dx, y - dy, z);
  arr[16] = 2.0L * newell_f(x - dx, y - dy, z);
  arr[17] = 2.0L * newell_f(x - dx, y, z + dz);
  arr[18] = 2.0L * newell_f(x - dx, y, z - dz);
  arr[19] = 2.0L * newell_f(x - dx, y + dy, z);
  arr[20] = -4.0L * newell_f(x, y - dy, z);
  arr[21] = -4.0L * newell_f(x, y + dy, z);
  arr[22] = -4.0L * newell_f(x, y, z - dz);
  arr[23] = -4.0L * newell_f(x, y, z + dz);
  arr[24] = -4.0L * newell_f(x + dx, y, z);
  arr[25] = -4.0L * newell_f(x - dx, y, z);
  arr[26] = 8.0L * newell_f(x, y, z);
  return compensated_sum(arr, 27);
}

long double sda01(long double x, long double y, long double z, long double l, long double h,
                  long double e) {
  // Nxy * 4*pi*l*h*e, collapsed 27-point difference of newell_g.
  long double arr[27];
  arr[0] = -newell_g(x - l, y - h, z - e);
  arr[1] = -newell_g(x - l, y - h, z + e);
  arr[2] = -newell_g(x + l, y - h, z + e);
  arr[3] = -newell_g(x + l, y - h, z - e);
  arr[4] = -newell_g(x + l, y + h, z - e);
  arr[5] = -newell_g(x + l, y + h, z + e);
  arr[6] = -newell_g(x - l, y + h, z + e);
  arr[7] = -newell_g(x - l, y + h, z - e);
  arr[8] = 2.0L * newell_g(x, y + h, z - e);
  arr[9] = 2.0L * newell_g(x, y + h, z + e);
  arr[10] = 2.0L * newell_g(x, y - h, z + e);
  arr[11] = 2.0L * newell_g(x, y - h, z - e);
  arr[12] = 2.0L * newell_g(x - l, y - h, z);
  arr[13] = 2.0L * newell_g(x - l, y + h, z);
  arr[14] = 2.0L * newell_g(x - l, y, z - e);
  arr[15] = 2.0L * newell_g(x - l, y, z + e);
  arr[16] = 2.0L * newell_g(x + l, y, z + e);
  arr[17] = 2.0L * newell_g(x + l, y, z - e);
  arr[18] = 2.0L * newell_g(x + l, y - h, z);
  arr[19] = 2.0L * newell_g(x + l, y + h, z);
  arr[20] = -4.0L * newell_g(x - l, y, z);
  arr[21] = -4.0L * newell_g(x + l, y, z);
  arr[22] = -4.0L * newell_g(x, y, z + e);
  arr[23] = -4.0L * newell_g(x, y, z - e);
  arr[24] = -4.0L * newell_g(x, y - h, z);
  arr[25] = -4.0L * newell_g(x, y + h, z);
  arr[26] = 8.0L * newell_g(x, y, z);
  return compensated_sum(arr, 27);
}

}  // namespace

double self_nxx(double dx, double dy, double dz) {
  if (dx <= 0.0 || dy <= 0.0 || dz <= 0.0) return 0.0;
  if (dx == dy && dy == dz) return 1.0 / 3.0;
  const long double x = dx, y = dy, z = dz;
  const long double xsq = x * x, ysq = y * y, zsq = z * z;
  const long double diag = std::sqrt(xsq + ysq + zsq);
  const long double mpxy = (x - y) * (x + y);
  const long double mpxz = (x - z) * (x + z);

  long double arr[15];
  arr[0] = -4.0L * (2.0L * xsq * x - ysq * y - zsq * z);
  arr[1] = 4.0L * (xsq + mpxy) * std::sqrt(xsq + ysq);
  arr[2] = 4.0L * (xsq + mpxz) * std::sqrt(xsq + zsq);
  arr[3] = -4.0L * (ysq + zsq) * std::sqrt(ysq + zsq);
  arr[4] = -4.0L * diag * (mpxy + mpxz);
  arr[5] = 24.0L * x * y * z * std::atan(y * z / (x * diag));
  arr[6] = 12.0L * (z + y) * xsq * std::log(x);
  arr[7] = 12.0L * z * ysq * std::log((std::sqrt(ysq + zsq) + z) / y);
  arr[8] = -12.0L * z * xsq * std::log(std::sqrt(xsq + zsq) + z);
  arr[9] = 12.0L * z * mpxy * std::log(diag + z);
  arr[10] = -6.0L * z * mpxy * std::log(xsq + ysq);
  arr[11] = 12.0L * y * zsq * std::log((std::sqrt(ysq + zsq) + y) / z);
  arr[12] = -12.0L * y * xsq * std::log(std::sqrt(xsq + ysq) + y);
  arr[13] = 12.0L * y * mpxz * std::log(diag + y);
  arr[14] = -6.0L * y * mpxz * std::log(xsq + zsq);

  const long double pi = std::numbers::pi_v<long double>;
  return static_cast<double>(compensated_sum(arr, 15) / (12.0L * pi * x * y * z));
}

double nxx(double x, double y, double z, double dx, double dy, double dz) {
  const long double pi = std::numbers::pi_v<long double>;
  const long double tau = static_cast<long double>(dx) * dy * dz;
  if (x == 0.0 && y == 0.0 && z == 0.0) return self_nxx(dx, dy, dz);
  return static_cast<double>(sda00(x, y, z, dx, dy, dz) / (4.0L * pi * tau));
}

double nxy(double x, double y, double z, double dx, double dy, double dz) {
  const long double pi = std::numbers::pi_v<long double>;
  const long double tau = static_cast<long double>(dx) * dy * dz;
  return static_cast<double>(sda01(x, y, z, dx, dy, dz) / (4.0L * pi * tau));
}

}  // namespace newell

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// index of tensor pair (a,b) in {xx, xy, xz, yy, yz, zz}
constexpr int pair_index[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};

}  // namespace

struct DemagTensor::Impl {
  Mesh mesh;
  std::size_t px = 1, py = 1, pz = 1;   // padded extents
  std::size_t pcells = 1;               // px*py*pz
  std::size_t csize = 1;                // pz*py*(px/2+1)
  std::array<std::vector<double>, 6> kernel;              // padded, circular offsets
  std::array<std::vector<std::complex<double>>, 6> khat;  // scaled by 1/pcells
  double* rbuf = nullptr;
  fftw_complex* cbuf = nullptr;
  fftw_plan fwd = nullptr;  // r2c rbuf -> cbuf
  fftw_plan bwd = nullptr;  // c2r cbuf -> rbuf
  mutable std::mutex guard;
  mutable std::vector<std::complex<double>> mhat[3];

  std::size_t pindex(std::size_t i, std::size_t j, std::size_t k) const {
    return i + px * (j + py * k);
  }

  ~Impl() {
    std::lock_guard<std::mutex> lk(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (rbuf) fftw_free(rbuf);
    if (cbuf) fftw_free(cbuf);
  }
};

DemagTensor::DemagTensor(const Mesh& mesh) : impl_(new Impl) {
  validate(mesh);
  Impl& im = *impl_;
  im.mesh = mesh;
  im.px = mesh.nx > 1 ? 2 * mesh.nx : 1;
  im.py = mesh.ny > 1 ? 2 * mesh.ny : 1;
  im.pz = mesh.nz > 1 ? 2 * mesh.nz : 1;
  im.pcells = im.px * im.py * im.pz;
  im.csize = im.pz * im.py * (im.px / 2 + 1);

  // Fill one octant of offsets with the Newell prism entries and mirror by
  // parity: diagonal entries are even per axis, N_ab is odd in a and b.
  const double dx = mesh.dx, dy = mesh.dy, dz = mesh.dz;
  for (auto& k : im.kernel) k.assign(im.pcells, 0.0);
  for (std::size_t oz = 0; oz < mesh.nz; ++oz) {
    for (std::size_t oy = 0; oy < mesh.ny; ++oy) {
      for (std::size_t ox = 0; ox < mesh.nx; ++ox) {
        const double x = static_cast<double>(ox) * dx;
        const double y = static_cast<double>(oy) * dy;
        const double z = static_cast<double>(oz) * dz;
        // K = -N so that h_a = sum K_ab m_b
        const double kxx = -newell::nxx(x, y, z, dx, dy, dz);
        const double kyy = -newell::nxx(y, x, z, dy, dx, dz);
        const double kzz = -newell::nxx(z, y, x, dz, dy, dx);
        const double kxy = -newell::nxy(x, y, z, dx, dy, dz);
        const double kxz = -newell::nxy(x, z, y, dx, dz, dy);
        const double kyz = -newell::nxy(y, z, x, dy, dz, dx);
        for (int sz = -1; sz <= 1; sz += 2) {
          if (oz == 0 && sz < 0) continue;
          for (int sy = -1; sy <= 1; sy += 2) {
            if (oy == 0 && sy < 0) continue;
            for (int sx = -1; sx <= 1; sx += 2) {
              if (ox == 0 && sx < 0) continue;
              const std::size_t ix = sx > 0 ? ox : im.px - ox;
              const std::size_t iy = sy > 0 ? oy : im.py - oy;
              const std::size_t iz = sz > 0 ? oz : im.pz - oz;
              const std::size_t at = im.pindex(ix, iy, iz);
              im.kernel[0][at] = kxx;
              im.kernel[3][at] = kyy;
              im.kernel[5][at] = kzz;
              im.kernel[1][at] = kxy * sx * sy;
              im.kernel[2][at] = kxz * sx * sz;
              im.kernel[4][at] = kyz * sy * sz;
            }
          }
        }
      }
    }
  }

  im.rbuf = fftw_alloc_real(im.pcells);
  im.cbuf = fftw_alloc_complex(im.csize);
  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    im.fwd = fftw_plan_dft_r2c_3d(static_cast<int>(im.pz), static_cast<int>(im.py),
                                  static_cast<int>(im.px), im.rbuf, im.cbuf, FFTW_ESTIMATE);
    im.bwd = fftw_plan_dft_c2r_3d(static_cast<int>(im.pz), static_cast<int>(im.py),
                                  static_cast<int>(im.px), im.cbuf, im.rbuf, FFTW_ESTIMATE);
  }
  if (!im.fwd || !im.bwd) throw std::runtime_error("fftw plan creation failed");

  // Cache kernel spectra with the inverse-transform normalization folded in.
  const double scale = 1.0 / static_cast<double>(im.pcells);
  for (int t = 0; t < 6; ++t) {
    std::memcpy(im.rbuf, im.kernel[t].data(), im.pcells * sizeof(double));
    fftw_execute(im.fwd);
    im.khat[t].resize(im.csize);
    for (std::size_t i = 0; i < im.csize; ++i) {
      im.khat[t][i] = std::complex<double>(im.cbuf[i][0] * scale, im.cbuf[i][1] * scale);
    }
  }
  for (auto& mh : im.mhat) mh.resize(im.csize);
}

DemagTensor::~DemagTensor() = default;
DemagTensor::DemagTensor(DemagTensor&&) noexcept = default;
DemagTensor& DemagTensor::operator=(DemagTensor&&) noexcept = default;

const Mesh& DemagTensor::mesh() const { return impl_->mesh; }

double DemagTensor::kernel(int a, int b, long ox, long oy, long oz) const {
  const Impl& im = *impl_;
  const long nx = static_cast<long>(im.mesh.nx);
  const long ny = static_cast<long>(im.mesh.ny);
  const long nz = static_cast<long>(im.mesh.nz);
  if (std::labs(ox) >= nx || std::labs(oy) >= ny || std::labs(oz) >= nz) {
    throw ValidationError("kernel offset out of range");
  }
  const std::size_t ix = ox >= 0 ? static_cast<std::size_t>(ox) : im.px - static_cast<std::size_t>(-ox);
  const std::size_t iy = oy >= 0 ? static_cast<std::size_t>(oy) : im.py - static_cast<std::size_t>(-oy);
  const std::size_t iz = oz >= 0 ? static_cast<std::size_t>(oz) : im.pz - static_cast<std::size_t>(-oz);
  return im.kernel[pair_index[a][b]][im.pindex(ix, iy, iz)];
}

DemagTensor build_demag_tensor(const Mesh& mesh) { return DemagTensor(mesh); }

VectorField stray_field(const DemagTensor& tensor, const VectorField& m,
                        std::int64_t* fft_counter) {
  const DemagTensor::Impl& im = *tensor.impl_;
  if (m.mesh != im.mesh) throw MeshMismatchError("stray_field");
  const Mesh& mesh = im.mesh;
  VectorField h(mesh);

  std::lock_guard<std::mutex> lk(im.guard);
  auto* self = const_cast<DemagTensor::Impl*>(&im);

  // forward transforms of the zero-padded magnetization components
  for (int c = 0; c < 3; ++c) {
    std::memset(self->rbuf, 0, im.pcells * sizeof(double));
    for (std::size_t k = 0; k < mesh.nz; ++k) {
      for (std::size_t j = 0; j < mesh.ny; ++j) {
        std::memcpy(self->rbuf + im.pindex(0, j, k), m.comp[c].data() + mesh.index(0, j, k),
                    mesh.nx * sizeof(double));
      }
    }
    fftw_execute(self->fwd);
    std::memcpy(self->mhat[c].data(), self->cbuf, im.csize * sizeof(fftw_complex));
  }

  // multiply by the cached tensor spectra and transform back
  for (int a = 0; a < 3; ++a) {
    auto* acc = reinterpret_cast<std::complex<double>*>(self->cbuf);
    const auto& k0 = im.khat[pair_index[a][0]];
    const auto& k1 = im.khat[pair_index[a][1]];
    const auto& k2 = im.khat[pair_index[a][2]];
    for (std::size_t i = 0; i < im.csize; ++i) {
      acc[i] = k0[i] * im.mhat[0][i] + k1[i] * im.mhat[1][i] + k2[i] * im.mhat[2][i];
    }
    fftw_execute(self->bwd);
    for (std::size_t k = 0; k < mesh.nz; ++k) {
      for (std::size_t j = 0; j < mesh.ny; ++j) {
        std::memcpy(h.comp[a].data() + mesh.index(0, j, k), self->rbuf + im.pindex(0, j, k),
                    mesh.nx * sizeof(double));
      }
    }
  }

  if (fft_counter) ++*fft_counter;
  return h;
}

VectorField stray_field_direct(const DemagTensor& tensor, const VectorField& m) {
  const Mesh& mesh = tensor.mesh();
  if (m.mesh != mesh) throw MeshMismatchError("stray_field_direct");
  VectorField h(mesh);
  const long nx = static_cast<long>(mesh.nx);
  const long ny = static_cast<long>(mesh.ny);
  const long nz = static_cast<long>(mesh.nz);
  for (long pk = 0; pk < nz; ++pk) {
    for (long pj = 0; pj < ny; ++pj) {
      for (long pi = 0; pi < nx; ++pi) {
        double acc[3] = {0.0, 0.0, 0.0};
        for (long qk = 0; qk < nz; ++qk) {
          for (long qj = 0; qj < ny; ++qj) {
            for (long qi = 0; qi < nx; ++qi) {
              const std::size_t q = mesh.index(static_cast<std::size_t>(qi),
                                               static_cast<std::size_t>(qj),
                                               static_cast<std::size_t>(qk));
              const double m0 = m.comp[0][q], m1 = m.comp[1][q], m2 = m.comp[2][q];
              for (int a = 0; a < 3; ++a) {
                acc[a] += tensor.kernel(a, 0, pi - qi, pj - qj, pk - qk) * m0 +
                          tensor.kernel(a, 1, pi - qi, pj - qj, pk - qk) * m1 +
                          tensor.kernel(a, 2, pi - qi, pj - qj, pk - qk) * m2;
              }
            }
          }
        }
        const std::size_t p = mesh.index(static_cast<std::size_t>(pi),
                                         static_cast<std::size_t>(pj),
                                         static_cast<std::size_t>(pk));
        for (int a = 0; a < 3; ++a) h.comp[a][p] = acc[a];
      }
    }
  }
  return h;
}

}  // namespace gspm

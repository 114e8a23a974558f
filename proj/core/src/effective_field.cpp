#include "gspm/effective_field.hpp"

#include <algorithm>
#include <cmath>

#include "gspm/errors.hpp"
#include "gspm/heat_solver.hpp"

namespace gspm {

void validate(const FieldContext& ctx) {
  validate(ctx.mesh);
  if (ctx.stray_on) {
    if (!ctx.demag) throw ValidationError("stray term enabled without a demag tensor");
    if (ctx.demag->mesh() != ctx.mesh) throw MeshMismatchError("field context demag tensor");
  }
  if (ctx.Q < 0.0) throw ValidationError("Q must be >= 0");
  if (!(ctx.eps > 0.0)) throw ValidationError("eps must be > 0");
}

void local_field_fhat(const FieldContext& ctx, const VectorField& m, VectorField& out,
                      std::int64_t* fft_counter) {
  if (m.mesh != ctx.mesh) throw MeshMismatchError("local_field_fhat");
  if (out.mesh != ctx.mesh) out = VectorField(ctx.mesh);
  const std::size_t n = m.size();
  if (ctx.stray_on) {
    out = stray_field(*ctx.demag, m, fft_counter);
  } else {
    for (auto& plane : out.comp) std::fill(plane.begin(), plane.end(), 0.0);
    if (fft_counter) ++*fft_counter;  // structural update point, no stray term
  }
  out.unit = false;
  if (ctx.anisotropy_on && ctx.Q != 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      out.comp[1][i] -= ctx.Q * m.comp[1][i];
      out.comp[2][i] -= ctx.Q * m.comp[2][i];
    }
  }
  if (ctx.external_on) {
    for (int c = 0; c < 3; ++c) {
      const double he = ctx.h_ext[c];
      if (he == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) out.comp[c][i] += he;
    }
  }
}

VectorField local_field_fhat(const FieldContext& ctx, const VectorField& m,
                             std::int64_t* fft_counter) {
  VectorField f(ctx.mesh);
  local_field_fhat(ctx, m, f, fft_counter);
  return f;
}

VectorField full_field_h(const FieldContext& ctx, const VectorField& m,
                         std::int64_t* fft_counter) {
  VectorField h = local_field_fhat(ctx, m, fft_counter);
  ScalarField mc(ctx.mesh), lap(ctx.mesh);
  for (int c = 0; c < 3; ++c) {
    mc.data = m.comp[c];
    apply_laplacian(mc, lap);
    for (std::size_t i = 0; i < m.size(); ++i) h.comp[c][i] += ctx.eps * lap.data[i];
  }
  return h;
}

double total_energy(const FieldContext& ctx, const VectorField& m) {
  if (m.mesh != ctx.mesh) throw MeshMismatchError("total_energy");
  const Mesh& mesh = ctx.mesh;
  const std::size_t nx = mesh.nx, ny = mesh.ny, nz = mesh.nz;
  const std::size_t n = m.size();

  // Exchange: sum of squared differences across interior faces; faces on
  // the boundary carry zero flux. This is the discrete energy whose first
  // variation is -eps*Lap_h with the clamped-ghost closure.
  double exch = 0.0;
  if (ctx.eps != 0.0) {
    const double ax = 1.0 / (mesh.dx * mesh.dx);
    const double ay = 1.0 / (mesh.dy * mesh.dy);
    const double az = 1.0 / (mesh.dz * mesh.dz);
    for (int c = 0; c < 3; ++c) {
      const double* v = m.comp[c].data();
      for (std::size_t k = 0; k < nz; ++k) {
        for (std::size_t j = 0; j < ny; ++j) {
          for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t at = mesh.index(i, j, k);
            if (i + 1 < nx) {
              const double d = v[at + 1] - v[at];
              exch += ax * d * d;
            }
            if (j + 1 < ny) {
              const double d = v[at + nx] - v[at];
              exch += ay * d * d;
            }
            if (k + 1 < nz) {
              const double d = v[at + nx * ny] - v[at];
              exch += az * d * d;
            }
          }
        }
      }
    }
    exch *= ctx.eps;
  }

  double aniso = 0.0;
  if (ctx.anisotropy_on && ctx.Q != 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      aniso += m.comp[1][i] * m.comp[1][i] + m.comp[2][i] * m.comp[2][i];
    }
    aniso *= ctx.Q;
  }

  double zeeman = 0.0;
  if (ctx.external_on) {
    for (int c = 0; c < 3; ++c) {
      const double he = ctx.h_ext[c];
      if (he == 0.0) continue;
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += m.comp[c][i];
      zeeman -= 2.0 * he * s;
    }
  }

  double stray = 0.0;
  if (ctx.stray_on) {
    const VectorField hs = stray_field(*ctx.demag, m, nullptr);
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < n; ++i) stray -= hs.comp[c][i] * m.comp[c][i];
    }
  }

  return 0.5 * (exch + aniso + zeeman + stray) / static_cast<double>(n);
}

}  // namespace gspm

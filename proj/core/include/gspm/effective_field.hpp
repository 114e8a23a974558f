#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "gspm/fields.hpp"
#include "gspm/mesh.hpp"
#include "gspm/stray_field.hpp"

namespace gspm {

/// Evaluates a time-dependent source f(x,t) onto a field (used by the
/// manufactured-solution studies; zero for physical runs).
using ForcingFn = std::function<void(const Mesh&, double t, VectorField& out)>;

/// Dimensionless field assembly context. Immutable after construction;
/// disabled terms contribute exactly zero.
struct FieldContext {
  Mesh mesh;
  double Q = 0.0;    // uniaxial anisotropy strength, easy axis e_1
  double eps = 1.0;  // exchange strength
  Vec3 h_ext{};      // spatially uniform applied field
  std::shared_ptr<const DemagTensor> demag;
  ForcingFn forcing;  // manufactured source hook; fed by the steppers

  bool anisotropy_on = false;
  bool external_on = false;
  bool stray_on = false;
};

/// Throws ValidationError if stray_on without a demag tensor, or if the
/// tensor's mesh differs.
void validate(const FieldContext& ctx);

/// Local field f_hat = -Q(m2 e2 + m3 e3) + h_e + h_s(m), enabled terms
/// only. Each call is one stray-field update point: with the stray term
/// enabled it routes through stray_field (one FFT-backed update); either
/// way *fft_counter is bumped by exactly 1, so per-step counts stay the
/// scheme-structural values of the cost table. The manufactured source is
/// applied by the steppers, not here.
VectorField local_field_fhat(const FieldContext& ctx, const VectorField& m,
                             std::int64_t* fft_counter = nullptr);

/// In-place variant writing into a caller-owned field (steppers use this
/// to avoid per-stage allocations).
void local_field_fhat(const FieldContext& ctx, const VectorField& m, VectorField& out,
                      std::int64_t* fft_counter);

/// Full effective field h = eps*Lap_h(m) + f_hat(m).
VectorField full_field_h(const FieldContext& ctx, const VectorField& m,
                         std::int64_t* fft_counter = nullptr);

/// Dimensionless Landau-Lifshitz energy per unit volume:
///   (1/2) mean[ eps|grad_h m|^2 + Q(m2^2+m3^2) - 2 h_e.m - h_s(m).m ]
/// with face differences and zero-flux boundary faces. Stray evaluations
/// here are diagnostics and do not count toward per-step FFT stats.
double total_energy(const FieldContext& ctx, const VectorField& m);

}  // namespace gspm

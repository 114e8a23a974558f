#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "gspm/effective_field.hpp"
#include "gspm/fields.hpp"
#include "gspm/material.hpp"
#include "gspm/schemes.hpp"

namespace gspm {

/// Exact solution m_e = (cos(u) sin t, sin(u) sin t, cos t) with
/// u = prod of p(s) = s^2(1-s)^2 over the active axes, plus the derived
/// source f = m_et + m_e x Lap(m_e) + alpha m_e x (m_e x Lap(m_e)) that
/// makes m_e solve the simplified equation exactly.
class ManufacturedCase {
 public:
  int dimension = 1;
  double alpha = 1e-5;
  double T = 5e-2;
  std::array<double, 3> box{1.0, 1.0, 1.0};

  static ManufacturedCase case_1d(double alpha = 1e-5, double T = 5e-2);
  static ManufacturedCase case_3d(double alpha = 0.01, double T = 1e-5);

  Vec3 exact(const std::array<double, 3>& x, double t) const;
  Vec3 exact_dt(const std::array<double, 3>& x, double t) const;
  Vec3 exact_lap(const std::array<double, 3>& x, double t) const;
  Vec3 forcing_at(const std::array<double, 3>& x, double t) const;

  /// Field-level evaluation (precomputed spatial tables; cheap per step).
  VectorField exact_field(const Mesh& mesh, double t) const;

  /// Source hook bound to a mesh for use as FieldContext::forcing.
  ForcingFn forcing(const Mesh& mesh) const;

  /// Default desk-scale mesh for this case (1D: nx=100; 3D: 32x16x4).
  Mesh default_mesh() const;

  /// Mesh with a uniform target spacing over this case's box.
  Mesh mesh_for_spacing(double spacing) const;
};

enum class Vary { Time, Space };

struct ConvergencePoint {
  double h = 0.0;        // dt or dx
  double error = 0.0;    // max-norm error at final time
  double seconds = 0.0;  // stepping wall-clock
  std::int64_t steps = 0;
};

struct ConvergenceStudy {
  SchemeKind scheme{};
  Vary vary{};
  std::vector<ConvergencePoint> points;
  double slope = 0.0;  // least-squares log(error) vs log(h)
  double max_unit_deviation = 0.0;
  bool counters_ok = true;
};

ConvergenceStudy temporal_convergence(const ManufacturedCase& mc, SchemeKind scheme,
                                      const Mesh& mesh, const std::vector<double>& dts);
ConvergenceStudy spatial_convergence(const ManufacturedCase& mc, SchemeKind scheme,
                                     const std::vector<Mesh>& meshes, double dt);

struct RatioRow {
  double dt = 0.0;
  double seconds_gspm = 0.0, seconds_a = 0.0, seconds_b = 0.0;
  double ratio_a = 0.0, ratio_b = 0.0;
};

struct RatioTable {
  std::vector<RatioRow> rows;
  double total_gspm = 0.0, total_a = 0.0, total_b = 0.0;
  double ratio_a = 0.0, ratio_b = 0.0;  // from the totals
};

/// Times all three schemes on the same workload; ratio-i =
/// (Time(GSPM) - Time(Scheme i)) / Time(GSPM).
RatioTable efficiency_ratios(const ManufacturedCase& mc, const Mesh& mesh,
                             const std::vector<double>& dts);

struct StabilityCell {
  SchemeKind scheme{};
  double alpha = 0.0, dt = 0.0;
  std::int64_t steps = 0;
  bool stable = false;
  double max_unit_deviation = 0.0;
  double energy_initial = 0.0, energy_final = 0.0;
  double max_energy_excess = 0.0;  // max over steps of E - E_initial
};

/// Long runs from seeded random smooth unit data, no forcing or external
/// field; stable = all components finite and energy bounded by its initial
/// value (+1e-8) throughout. Failures are data, not errors.
std::vector<StabilityCell> stability_sweep(SchemeKind scheme, const std::vector<double>& alphas,
                                           const std::vector<double>& dts, const Mesh& mesh,
                                           std::int64_t n_steps, std::uint64_t seed);

/// Superposition of low-frequency Neumann-compatible cosine modes with
/// seeded coefficients, projected to unit length. Deterministic per seed.
VectorField random_smooth_unit_field(const Mesh& mesh, std::uint64_t seed);

struct HysteresisProtocol {
  double H0 = 0.0;  // dimensionless field amplitude
  double dH = 0.0;  // dimensionless field step
  Vec3 axis{1.0, 0.0, 0.0};
  double energy_rtol = 1e-7;
  std::int64_t max_steps_per_field = 10000;
  SchemeKind scheme = SchemeKind::SchemeA;
  double alpha = 0.1;
  double dt = 0.0;  // dimensionless
};

struct HysteresisPoint {
  double h = 0.0;  // signed field magnitude along the axis
  Vec3 avg_m{};
  std::int64_t steps = 0;
  double energy = 0.0;
  bool converged = false;
};

struct HysteresisResult {
  std::vector<HysteresisPoint> points;  // +H0 -> -H0 -> +H0 inclusive
  std::size_t descending_count = 0;     // first branch length
  bool counters_ok = true;
  double max_unit_deviation = 0.0;
  double max_energy_rise_per_step = 0.0;  // during fixed-field relaxations
  std::int64_t total_steps = 0;
  double wall_seconds = 0.0;
};

/// Field sweep +H0 -> -H0 -> +H0 with relaxation to the energy-stationary
/// state at each value. base_ctx carries material terms (anisotropy/stray);
/// the external term is driven by the protocol.
HysteresisResult hysteresis_loop(const HysteresisProtocol& protocol, FieldContext base_ctx,
                                 VectorField m0);

struct SwitchFields {
  double descending = 0.0, ascending = 0.0;
  bool found_descending = false, found_ascending = false;
};

/// First sign change of avg_m.axis along each branch.
SwitchFields find_switch_fields(const HysteresisResult& loop);

/// Enclosed loop area from the two branches (positive for a real loop).
double loop_area(const HysteresisResult& loop);

/// Piecewise initial state of the zero-field relaxation: m = (0,1,0) for
/// x in the outer fifths of the x-extent, (1,0,0) otherwise.
VectorField profile_initial_state(const Mesh& mesh);

struct ProfileResult {
  RunReport report;
  VectorField final_m;
  double rate_probe = 0.0;  // max |dm|/dt at the probe step (10% of run)
  double rate_final = 0.0;  // same at the last step
};

/// Zero-field relaxation of the piecewise initial state; emits angle-map
/// and centered-slice snapshots under outdir when non-empty.
ProfileResult profile_relaxation(SchemeKind scheme, double alpha, const FieldContext& ctx,
                                 double dt, std::int64_t n_steps,
                                 const std::filesystem::path& outdir);

/// Centered z-slice of a field as a one-layer field (for arrow plots).
VectorField centered_slice(const VectorField& f);

// CSV emitters (17 significant digits; wall-clock columns are isolated so
// determinism checks can ignore them).
void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<ConvergenceStudy>& studies);
void write_ratios_csv(const std::filesystem::path& path, const RatioTable& table);
void write_stability_csv(const std::filesystem::path& path,
                         const std::vector<StabilityCell>& cells);
void write_loop_csv(const std::filesystem::path& path, const HysteresisResult& loop,
                    double tesla_per_unit);

}  // namespace gspm

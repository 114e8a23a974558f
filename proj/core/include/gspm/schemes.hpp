#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "gspm/effective_field.hpp"
#include "gspm/fields.hpp"
#include "gspm/heat_solver.hpp"

namespace gspm {

enum class SchemeKind { GspmOriginal, SchemeA, SchemeB };

const char* to_string(SchemeKind kind);
std::optional<SchemeKind> scheme_from_string(std::string_view name);

/// Structural per-step cost of a scheme: {linear solves, stray update points}.
/// GspmOriginal (7,4), SchemeA (5,3), SchemeB (3,3).
std::pair<int, int> expected_counts(SchemeKind kind);

struct SolveStats {
  std::int64_t steps = 0;
  std::int64_t solves_last_step = 0;
  std::int64_t ffts_last_step = 0;
  std::int64_t solves_total = 0;
  std::int64_t ffts_total = 0;
  double seconds_last_step = 0.0;
  double seconds_total = 0.0;
};

struct RunObservers {
  std::int64_t energy_stride = 0;  // 0 = off
  std::function<void(std::int64_t step, double t, double energy)> on_energy;
  std::int64_t snapshot_stride = 0;  // 0 = off
  std::function<void(std::int64_t step, double t, const VectorField& m)> on_snapshot;
  /// Called after every step; useful for custom stopping/recording.
  std::function<void(std::int64_t step, double t, const VectorField& m)> on_step;
};

struct RunReport {
  std::int64_t steps = 0;
  double final_time = 0.0;
  double wall_seconds = 0.0;
  double max_unit_deviation = 0.0;
  bool counters_constant = true;  // per-step counts matched expected_counts every step
  SolveStats stats;
};

/// One simulation advancing a unit field by dt per step. Owned by a single
/// thread; distinct steppers run concurrently without coordination.
class Stepper {
 public:
  /// For SchemeB this initializes g0 = (I - dt*eps*Lap)^-1(m0 + dt*fhat0),
  /// a one-time cost not counted in per-step stats.
  Stepper(SchemeKind kind, FieldContext ctx, VectorField m0, double dt, double alpha);

  void step();
  RunReport run(std::int64_t n_steps, const RunObservers& obs = {});

  const VectorField& m() const { return m_; }
  double time() const { return t_; }
  double dt() const { return dt_; }
  double alpha() const { return alpha_; }
  SchemeKind kind() const { return kind_; }
  const FieldContext& context() const { return ctx_; }
  const SolveStats& stats() const { return stats_; }

 private:
  void step_gspm();
  void step_scheme_a();
  void step_scheme_b();
  void eval_forcing(VectorField& out) const;  // raw source f(x, t_) or zero
  void init_scheme_b();

  SchemeKind kind_;
  FieldContext ctx_;
  VectorField m_;
  double dt_;
  double alpha_;
  double t_ = 0.0;
  HeatOperator heat_;                      // lambda = dt*eps
  std::optional<HeatOperator> heat_damp_;  // lambda = alpha*dt*eps (GSPM heat-flow)
  VectorField g_;                          // SchemeB carried approximate set
  SolveStats stats_;

  // scratch reused across steps
  VectorField fhat_, partial_, work_, src_, mstar_, gn_;
  std::vector<double> rhs_, ga_, gb_, gc_;
};

}  // namespace gspm

// Per-step cost of the three steppers plus the two solver primitives they
// are built from. The per-step ratios here are what the efficiency tables
// measure at experiment scale.

#include <benchmark/benchmark.h>

#include <memory>

#include "gspm/effective_field.hpp"
#include "gspm/experiments.hpp"
#include "gspm/heat_solver.hpp"
#include "gspm/schemes.hpp"
#include "gspm/stray_field.hpp"

namespace {

using namespace gspm;

SchemeKind kind_of(int v) {
  return v == 0 ? SchemeKind::GspmOriginal : (v == 1 ? SchemeKind::SchemeA : SchemeKind::SchemeB);
}

void bm_step_1d(benchmark::State& state) {
  const Mesh mesh = make_mesh_1d(100, 0.01);
  FieldContext ctx;
  ctx.mesh = mesh;
  const ManufacturedCase mc = ManufacturedCase::case_1d();
  ctx.forcing = mc.forcing(mesh);
  Stepper stepper(kind_of(static_cast<int>(state.range(0))), ctx,
                  random_smooth_unit_field(mesh, 1), 4e-5, mc.alpha);
  for (auto _ : state) {
    stepper.step();
    benchmark::DoNotOptimize(stepper.m().comp[0].data());
  }
}
BENCHMARK(bm_step_1d)->Arg(0)->Arg(1)->Arg(2);

void bm_step_film(benchmark::State& state) {
  const Mesh mesh = make_mesh_3d(64, 64, 1, 0.011, 0.011, 0.011);
  FieldContext ctx;
  ctx.mesh = mesh;
  ctx.Q = 1.2e-4;
  ctx.eps = 1.2e-4;
  ctx.anisotropy_on = true;
  ctx.stray_on = true;
  ctx.demag = std::make_shared<DemagTensor>(mesh);
  Stepper stepper(kind_of(static_cast<int>(state.range(0))), ctx,
                  random_smooth_unit_field(mesh, 2), 0.18, 0.1);
  for (auto _ : state) {
    stepper.step();
    benchmark::DoNotOptimize(stepper.m().comp[0].data());
  }
}
BENCHMARK(bm_step_film)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void bm_heat_solve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Mesh mesh = make_mesh_1d(n, 1.0 / static_cast<double>(n));
  const HeatOperator op(mesh, 1e-4);
  ScalarField b(mesh, 1.0);
  ScalarField u(mesh);
  for (auto _ : state) {
    op.solve(b, u);
    benchmark::DoNotOptimize(u.data.data());
  }
}
BENCHMARK(bm_heat_solve)->Arg(100)->Arg(1000);

void bm_stray_update(benchmark::State& state) {
  const Mesh mesh = make_mesh_3d(64, 64, 1, 0.011, 0.011, 0.011);
  const DemagTensor tensor(mesh);
  const VectorField m = random_smooth_unit_field(mesh, 3);
  for (auto _ : state) {
    const VectorField h = stray_field(tensor, m);
    benchmark::DoNotOptimize(h.comp[0].data());
  }
}
BENCHMARK(bm_stray_update)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

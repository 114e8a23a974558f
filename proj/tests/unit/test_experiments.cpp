#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "gspm/experiments.hpp"
#include "gspm/field_ops.hpp"

using namespace gspm;

namespace {

// 7-point sixth-order central differences for the forcing self-check
double d1_6th(const std::array<double, 7>& v, double h) {
  return (-v[0] + 9 * v[1] - 45 * v[2] + 45 * v[4] - 9 * v[5] + v[6]) / (60.0 * h);
}

double d2_6th(const std::array<double, 7>& v, double h) {
  return (2 * v[0] - 27 * v[1] + 270 * v[2] - 490 * v[3] + 270 * v[4] - 27 * v[5] + 2 * v[6]) /
         (180.0 * h * h);
}

}  // namespace

TEST_CASE("manufactured solutions are unit length everywhere") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (const auto& mc : {ManufacturedCase::case_1d(), ManufacturedCase::case_3d()}) {
    for (int s = 0; s < 20; ++s) {
      const std::array<double, 3> x = {uni(rng) * mc.box[0], uni(rng) * mc.box[1],
                                       uni(rng) * mc.box[2]};
      const double t = uni(rng);
      CHECK(mc.exact(x, t).norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("forcing satisfies the manufactured identity against finite differences") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> uni(0.1, 0.9);
  const double h = 1e-2;

  for (const auto& mc : {ManufacturedCase::case_1d(), ManufacturedCase::case_3d()}) {
    CAPTURE(mc.dimension);
    for (int s = 0; s < 20; ++s) {
      std::array<double, 3> x = {uni(rng) * mc.box[0], uni(rng) * mc.box[1],
                                 uni(rng) * mc.box[2]};
      if (mc.dimension == 1) x[1] = x[2] = 0.5;
      const double t = 0.2 + 0.6 * uni(rng);

      // m_t by finite differences in t
      Vec3 mt{};
      for (int c = 0; c < 3; ++c) {
        std::array<double, 7> v{};
        for (int o = -3; o <= 3; ++o) v[o + 3] = mc.exact(x, t + o * h)[c];
        mt[c] = d1_6th(v, h);
      }

      // Laplacian by finite differences along the active axes
      Vec3 lap{};
      const int axes = mc.dimension == 1 ? 1 : 3;
      for (int ax = 0; ax < axes; ++ax) {
        for (int c = 0; c < 3; ++c) {
          std::array<double, 7> v{};
          for (int o = -3; o <= 3; ++o) {
            std::array<double, 3> xx = x;
            xx[ax] += o * h;
            v[o + 3] = mc.exact(xx, t)[c];
          }
          lap[c] += d2_6th(v, h);
        }
      }

      const Vec3 me = mc.exact(x, t);
      const Vec3 rhs_cross = cross(me, lap);
      const Vec3 rhs = mt + rhs_cross + mc.alpha * cross(me, rhs_cross);
      const Vec3 f = mc.forcing_at(x, t);
      CHECK(std::abs(f.x - rhs.x) <= 1e-10);
      CHECK(std::abs(f.y - rhs.y) <= 1e-10);
      CHECK(std::abs(f.z - rhs.z) <= 1e-10);

      // analytic Laplacian agrees with the finite-difference one
      const Vec3 la = mc.exact_lap(x, t);
      CHECK(std::abs(la.x - lap.x) <= 1e-9);
      CHECK(std::abs(la.y - lap.y) <= 1e-9);
    }
  }
}

TEST_CASE("field-level evaluation matches the pointwise analytics") {
  const ManufacturedCase mc = ManufacturedCase::case_3d();
  const Mesh mesh = make_mesh_3d(6, 3, 2, mc.box[0] / 6, mc.box[1] / 3, mc.box[2] / 2);
  const double t = 0.37;

  const VectorField field = mc.exact_field(mesh, t);
  VectorField forcing_field(mesh);
  mc.forcing(mesh)(mesh, t, forcing_field);

  for (std::size_t k = 0; k < mesh.nz; ++k) {
    for (std::size_t j = 0; j < mesh.ny; ++j) {
      for (std::size_t i = 0; i < mesh.nx; ++i) {
        const auto x = mesh.center(i, j, k);
        const std::size_t at = mesh.index(i, j, k);
        const Vec3 me = mc.exact(x, t);
        const Vec3 f = mc.forcing_at(x, t);
        for (int c = 0; c < 3; ++c) {
          CHECK(field.cell(at)[c] == doctest::Approx(me[c]).epsilon(1e-14));
          CHECK(forcing_field.cell(at)[c] == doctest::Approx(f[c]).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("global error halves when dt halves") {
  const ManufacturedCase mc = ManufacturedCase::case_1d();
  const Mesh mesh = mc.default_mesh();
  const ConvergenceStudy study =
      temporal_convergence(mc, SchemeKind::SchemeA, mesh, {mc.T / 1250, mc.T / 2500});
  const double ratio = study.points[0].error / study.points[1].error;
  CHECK(ratio >= 1.7);
  CHECK(ratio <= 2.3);
  CHECK(study.counters_ok);
  CHECK(study.max_unit_deviation <= 1e-14);
}

TEST_CASE("random smooth unit fields are reproducible and unit") {
  const Mesh mesh = make_mesh_3d(8, 4, 2, 0.125, 0.25, 0.5);
  const VectorField a = random_smooth_unit_field(mesh, 42);
  const VectorField b = random_smooth_unit_field(mesh, 42);
  const VectorField c = random_smooth_unit_field(mesh, 43);
  CHECK(max_norm_error(a, b) == 0.0);
  CHECK(max_norm_error(a, c) > 1e-3);
  CHECK(a.max_unit_deviation() <= 1e-14);
}

TEST_CASE("stability sweep smoke run") {
  const Mesh mesh = make_mesh_1d(16, 1.0 / 16.0);
  const auto cells =
      stability_sweep(SchemeKind::SchemeB, {0.1}, {mesh.dx, 10.0 * mesh.dx * mesh.dx}, mesh,
                      200, 99);
  REQUIRE(cells.size() == 2);
  for (const auto& cell : cells) {
    CHECK(cell.stable);
    CHECK(cell.max_unit_deviation <= 1e-14);
    CHECK(cell.max_energy_excess <= 1e-8);
  }
}

TEST_CASE("gyromagnetic-only runs stay finite and unit") {
  const Mesh mesh = make_mesh_1d(32, 1.0 / 32.0);
  const auto cells = stability_sweep(SchemeKind::SchemeA, {0.0}, {0.01}, mesh, 1000, 7);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].max_unit_deviation <= 1e-14);
  // alpha = 0 conserves energy up to roundoff; finiteness is the claim here
  CHECK(std::isfinite(cells[0].energy_final));
}

TEST_CASE("profile initial state matches the piecewise definition") {
  const Mesh mesh = make_mesh_3d(10, 4, 1, 0.1, 0.25, 1.0);
  const VectorField m = profile_initial_state(mesh);
  for (std::size_t j = 0; j < mesh.ny; ++j) {
    for (std::size_t i = 0; i < mesh.nx; ++i) {
      const double x = mesh.center(i, j, 0)[0];
      const bool outer = x <= 0.2 || x >= 0.8;
      const Vec3 v = m.cell(mesh.index(i, j, 0));
      CHECK(v.x == (outer ? 0.0 : 1.0));
      CHECK(v.y == (outer ? 1.0 : 0.0));
      CHECK(v.z == 0.0);
    }
  }
}

TEST_CASE("centered slice picks the middle layer") {
  const Mesh mesh = make_mesh_3d(3, 2, 5, 1.0, 1.0, 1.0);
  VectorField f(mesh);
  for (std::size_t k = 0; k < 5; ++k) {
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t i = 0; i < 3; ++i) {
        f.comp[0][mesh.index(i, j, k)] = static_cast<double>(k);
      }
    }
  }
  const VectorField slice = centered_slice(f);
  CHECK(slice.mesh.nz == 1);
  for (double v : slice.comp[0]) CHECK(v == 2.0);
}

TEST_CASE("hysteresis sweep structure on a tiny film") {
  const Mesh mesh = make_mesh_3d(8, 8, 1, 0.1, 0.1, 0.02);
  FieldContext ctx;
  ctx.mesh = mesh;
  ctx.eps = 1e-3;
  ctx.stray_on = true;
  ctx.demag = std::make_shared<DemagTensor>(mesh);

  HysteresisProtocol protocol;
  protocol.H0 = 0.02;
  protocol.dH = 0.01;
  protocol.dt = 0.2;
  protocol.alpha = 0.5;
  protocol.scheme = SchemeKind::SchemeB;
  protocol.max_steps_per_field = 400;
  protocol.axis = {std::cos(0.02), std::sin(0.02), 0.0};

  const VectorField m0(mesh, {1.0, 0.0, 0.0});
  const HysteresisResult loop = hysteresis_loop(protocol, ctx, m0);

  REQUIRE(loop.descending_count == 5);
  REQUIRE(loop.points.size() == 9);
  CHECK(loop.points.front().h == doctest::Approx(protocol.H0));
  CHECK(loop.points[4].h == doctest::Approx(-protocol.H0));
  CHECK(loop.points.back().h == doctest::Approx(protocol.H0));
  // branches mirror in field values
  for (std::size_t i = 0; i + 1 < loop.descending_count; ++i) {
    CHECK(loop.points[i].h ==
          doctest::Approx(loop.points[loop.points.size() - 1 - i].h).epsilon(1e-12));
  }
  CHECK(loop.counters_ok);
  CHECK(loop.max_unit_deviation <= 1e-14);
}

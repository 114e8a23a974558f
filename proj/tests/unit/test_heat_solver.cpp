#include <doctest.h>

#include <cmath>
#include <random>

#include "gspm/heat_solver.hpp"
#include "gspm/mesh.hpp"

using namespace gspm;

namespace {

ScalarField random_scalar(const Mesh& mesh, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ScalarField f(mesh);
  for (auto& v : f.data) v = dist(rng);
  return f;
}

double dot(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.data[i] * b.data[i];
  return s;
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("laplacian annihilates constants") {
  const Mesh mesh = make_mesh_3d(4, 3, 2, 0.5, 0.7, 0.9);
  const ScalarField lap = apply_laplacian(ScalarField(mesh, 3.25));
  for (double v : lap.data) CHECK(v == 0.0);
}

TEST_CASE("laplacian hand-checked 1D stencils") {
  {
    const Mesh mesh = make_mesh_1d(3, 1.0);
    ScalarField f(mesh);
    f.data = {0.0, 1.0, 0.0};
    const ScalarField lap = apply_laplacian(f);
    CHECK(lap.data[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lap.data[1] == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(lap.data[2] == doctest::Approx(1.0).epsilon(1e-15));
  }
  {
    const Mesh mesh = make_mesh_1d(4, 0.5);
    ScalarField f(mesh);
    f.data = {1.0, 2.0, 3.0, 4.0};
    const ScalarField lap = apply_laplacian(f);
    CHECK(lap.data[0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(lap.data[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(lap.data[2] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(lap.data[3] == doctest::Approx(-4.0).epsilon(1e-14));
  }
}

TEST_CASE("cross-axis terms vanish on 1D meshes") {
  const Mesh mesh = make_mesh_1d(6, 0.25);
  const ScalarField f = random_scalar(mesh, 42);
  const ScalarField lap = apply_laplacian(f);
  // only the x-stencil contributes; compare against a direct 1D evaluation
  for (std::size_t i = 0; i < 6; ++i) {
    const double left = i > 0 ? f.data[i - 1] : f.data[i];
    const double right = i + 1 < 6 ? f.data[i + 1] : f.data[i];
    const double expect = (left - 2.0 * f.data[i] + right) / (0.25 * 0.25);
    CHECK(lap.data[i] == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("solve with lambda = 0 is the identity") {
  const Mesh mesh = make_mesh_1d(8, 0.125);
  const HeatOperator op(mesh, 0.0);
  const ScalarField b = random_scalar(mesh, 7);
  const ScalarField u = op.solve(b);
  CHECK(max_abs_diff(u, b) <= 1e-13);
}

TEST_CASE("constants are fixed points of the solve") {
  const Mesh mesh = make_mesh_3d(4, 4, 2, 0.3, 0.4, 0.5);
  const HeatOperator op(mesh, 2.75);
  const ScalarField u = op.solve(ScalarField(mesh, -1.6));
  for (double v : u.data) CHECK(v == doctest::Approx(-1.6).epsilon(1e-13));
}

TEST_CASE("fast solve matches the dense factorization") {
  {
    const Mesh mesh = make_mesh_1d(4, 1.0);
    ScalarField b(mesh);
    b.data = {0.0, 1.0, 0.0, 0.0};
    const HeatOperator op(mesh, 1.0);
    const DenseHeatSolver dense(mesh, 1.0);
    CHECK(max_abs_diff(op.solve(b), dense.solve(b)) <= 1e-12);
  }
  struct Case {
    Mesh mesh;
    double lambda;
  };
  const Case cases[] = {
      {make_mesh_1d(8, 0.2), 0.37},
      {make_mesh_1d(100, 0.01), 1e-4},
      {make_mesh_3d(12, 5, 3, 0.3, 0.25, 0.4), 0.9},
      {make_mesh_3d(7, 6, 1, 0.1, 0.2, 1.0), 4.2},
      {make_mesh_3d(8, 8, 8, 0.125, 0.125, 0.125), 0.05},
  };
  std::uint64_t seed = 100;
  for (const auto& c : cases) {
    const HeatOperator op(c.mesh, c.lambda);
    const DenseHeatSolver dense(c.mesh, c.lambda);
    const ScalarField b = random_scalar(c.mesh, seed++);
    const ScalarField fast = op.solve(b);
    const ScalarField ref = dense.solve(b);
    double scale = 0.0;
    for (double v : ref.data) scale = std::max(scale, std::abs(v));
    CHECK(max_abs_diff(fast, ref) <= 1e-12 * std::max(scale, 1.0));
  }
}

TEST_CASE("residual of the fast solve is at machine level") {
  const Mesh mesh = make_mesh_3d(10, 4, 2, 0.2, 0.3, 0.5);
  const double lambda = 0.8;
  const HeatOperator op(mesh, lambda);
  const ScalarField b = random_scalar(mesh, 5);
  const ScalarField u = op.solve(b);
  const ScalarField lap = apply_laplacian(u);
  double worst = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    worst = std::max(worst, std::abs(u.data[i] - lambda * lap.data[i] - b.data[i]));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("vector solve is component-wise and counts by three") {
  const Mesh mesh = make_mesh_1d(8, 0.125);
  const HeatOperator op(mesh, 0.5);
  VectorField b(mesh);
  for (std::size_t i = 0; i < 8; ++i) b.comp[1][i] = std::sin(0.3 * static_cast<double>(i));

  std::int64_t solves = 0;
  const VectorField u = op.solve(b, &solves);
  CHECK(solves == 3);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(u.comp[0][i] == 0.0);
    CHECK(u.comp[2][i] == 0.0);
  }

  const DenseHeatSolver dense(mesh, 0.5);
  ScalarField b1(mesh);
  b1.data = b.comp[1];
  CHECK(max_abs_diff(dense.solve(b1), [&] {
          ScalarField s(mesh);
          s.data = u.comp[1];
          return s;
        }()) <= 1e-12);

  std::int64_t scalar_solves = 0;
  op.solve(b1, &scalar_solves);
  CHECK(scalar_solves == 1);
}

TEST_CASE("multipliers: constant mode is exactly one, all in (0,1]") {
  const Mesh mesh = make_mesh_3d(5, 3, 2, 0.2, 0.4, 0.7);
  const HeatOperator op(mesh, 3.3);
  CHECK(op.multiplier(0, 0, 0) == 1.0);
  for (std::size_t k = 0; k < mesh.nz; ++k) {
    for (std::size_t j = 0; j < mesh.ny; ++j) {
      for (std::size_t i = 0; i < mesh.nx; ++i) {
        const double m = op.multiplier(i, j, k);
        CHECK(m > 0.0);
        CHECK(m <= 1.0);
      }
    }
  }
}

TEST_CASE("discrete self-adjointness and negative semidefiniteness") {
  const Mesh mesh = make_mesh_3d(6, 5, 2, 0.3, 0.2, 0.6);
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    const ScalarField f = random_scalar(mesh, seed);
    const ScalarField g = random_scalar(mesh, seed + 50);
    const double lhs = dot(apply_laplacian(f), g);
    const double rhs = dot(f, apply_laplacian(g));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    CHECK(dot(apply_laplacian(f), f) <= 1e-12);
  }
}

TEST_CASE("solve contracts perturbations around a constant") {
  const Mesh mesh = make_mesh_1d(32, 1.0 / 32.0);
  const HeatOperator op(mesh, 0.7);
  const double c = 0.4;
  for (std::uint64_t seed : {31u, 32u}) {
    ScalarField b = random_scalar(mesh, seed);
    for (auto& v : b.data) v += c;
    const ScalarField u = op.solve(b);
    double in = 0.0, out = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      in = std::max(in, std::abs(b.data[i] - c));
      out = std::max(out, std::abs(u.data[i] - c));
    }
    CHECK(out <= in + 1e-14);
  }
}

TEST_CASE("solve preserves the cell average") {
  const Mesh mesh = make_mesh_3d(6, 4, 3, 0.2, 0.3, 0.4);
  const HeatOperator op(mesh, 1.9);
  const ScalarField b = random_scalar(mesh, 77);
  const ScalarField u = op.solve(b);
  double mb = 0.0, mu = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    mb += b.data[i];
    mu += u.data[i];
  }
  CHECK(mu / static_cast<double>(b.size()) ==
        doctest::Approx(mb / static_cast<double>(b.size())).epsilon(1e-12));
}

TEST_CASE("negative lambda is rejected") {
  const Mesh mesh = make_mesh_1d(4, 1.0);
  CHECK_THROWS(HeatOperator(mesh, -0.1));
}

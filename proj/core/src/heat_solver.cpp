#include "gspm/heat_solver.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "gspm/errors.hpp"

namespace gspm {

namespace {

// FFTW's planner is not thread-safe; executions of distinct plans are.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void apply_laplacian(const ScalarField& f, ScalarField& out) {
  const Mesh& m = f.mesh;
  if (out.mesh != m) out = ScalarField(m);
  const std::size_t nx = m.nx, ny = m.ny, nz = m.nz;
  const double ax = 1.0 / (m.dx * m.dx);
  const double ay = 1.0 / (m.dy * m.dy);
  const double az = 1.0 / (m.dz * m.dz);
  const double* v = f.data.data();
  double* o = out.data.data();
  for (std::size_t k = 0; k < nz; ++k) {
    for (std::size_t j = 0; j < ny; ++j) {
      const std::size_t row = m.index(0, j, k);
      for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t c = row + i;
        const double vc = v[c];
        // clamped ghost: the out-of-range neighbor equals the cell itself
        const double xl = (i > 0) ? v[c - 1] : vc;
        const double xr = (i + 1 < nx) ? v[c + 1] : vc;
        const double yl = (j > 0) ? v[c - nx] : vc;
        const double yr = (j + 1 < ny) ? v[c + nx] : vc;
        const double zl = (k > 0) ? v[c - nx * ny] : vc;
        const double zr = (k + 1 < nz) ? v[c + nx * ny] : vc;
        o[c] = ax * (xl - 2.0 * vc + xr) + ay * (yl - 2.0 * vc + yr) +
               az * (zl - 2.0 * vc + zr);
      }
    }
  }
}

ScalarField apply_laplacian(const ScalarField& f) {
  ScalarField out(f.mesh);
  apply_laplacian(f, out);
  return out;
}

struct HeatOperator::Impl {
  Mesh mesh;
  double lambda = 0.0;
  std::vector<double> mult;  // (1 + lambda*mu_k)^-1 / normalization, x-fastest mode order
  double* buf = nullptr;     // fftw-aligned scratch, cells()
  fftw_plan fwd = nullptr;   // in-place REDFT10 along every axis
  fftw_plan bwd = nullptr;   // in-place REDFT01 along every axis
  mutable std::mutex guard;

  ~Impl() {
    std::lock_guard<std::mutex> lk(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (buf) fftw_free(buf);
  }
};

HeatOperator::HeatOperator(const Mesh& mesh, double lambda) : impl_(new Impl) {
  validate(mesh);
  if (lambda < 0.0) throw ValidationError("heat solve requires lambda >= 0");
  impl_->mesh = mesh;
  impl_->lambda = lambda;

  const std::size_t nx = mesh.nx, ny = mesh.ny, nz = mesh.nz;
  const std::size_t n = mesh.cells();
  impl_->buf = fftw_alloc_real(n);

  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    const fftw_r2r_kind fk[3] = {FFTW_REDFT10, FFTW_REDFT10, FFTW_REDFT10};
    const fftw_r2r_kind bk[3] = {FFTW_REDFT01, FFTW_REDFT01, FFTW_REDFT01};
    // FFTW is row-major: slowest dimension first (z, y, x).
    impl_->fwd = fftw_plan_r2r_3d(static_cast<int>(nz), static_cast<int>(ny),
                                  static_cast<int>(nx), impl_->buf, impl_->buf, fk[0], fk[1],
                                  fk[2], FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_r2r_3d(static_cast<int>(nz), static_cast<int>(ny),
                                  static_cast<int>(nx), impl_->buf, impl_->buf, bk[0], bk[1],
                                  bk[2], FFTW_ESTIMATE);
  }
  if (!impl_->fwd || !impl_->bwd) throw std::runtime_error("fftw plan creation failed");

  // -eigenvalues of Lap_h per axis: mu_k = (2 - 2cos(pi k / n)) / h^2 >= 0.
  auto axis_mu = [](std::size_t nax, double h) {
    std::vector<double> mu(nax);
    for (std::size_t k = 0; k < nax; ++k) {
      mu[k] = (2.0 - 2.0 * std::cos(std::numbers::pi * static_cast<double>(k) /
                                    static_cast<double>(nax))) /
              (h * h);
    }
    mu[0] = 0.0;
    return mu;
  };
  const auto mux = axis_mu(nx, mesh.dx);
  const auto muy = axis_mu(ny, mesh.dy);
  const auto muz = axis_mu(nz, mesh.dz);

  // REDFT10 followed by REDFT01 scales by 2n per axis.
  const double norm = 8.0 * static_cast<double>(nx) * static_cast<double>(ny) *
                      static_cast<double>(nz);
  impl_->mult.resize(n);
  for (std::size_t k = 0; k < nz; ++k) {
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        const double denom = 1.0 + lambda * (mux[i] + muy[j] + muz[k]);
        impl_->mult[mesh.index(i, j, k)] = 1.0 / (denom * norm);
      }
    }
  }
}

HeatOperator::~HeatOperator() = default;
HeatOperator::HeatOperator(HeatOperator&&) noexcept = default;
HeatOperator& HeatOperator::operator=(HeatOperator&&) noexcept = default;

const Mesh& HeatOperator::mesh() const { return impl_->mesh; }
double HeatOperator::lambda() const { return impl_->lambda; }

double HeatOperator::multiplier(std::size_t kx, std::size_t ky, std::size_t kz) const {
  const Mesh& m = impl_->mesh;
  const double norm = 8.0 * static_cast<double>(m.nx) * static_cast<double>(m.ny) *
                      static_cast<double>(m.nz);
  return impl_->mult[m.index(kx, ky, kz)] * norm;
}

void HeatOperator::solve_raw(const double* b, double* u, std::int64_t* solve_counter) const {
  Impl& im = *impl_;
  const std::size_t n = im.mesh.cells();
  std::lock_guard<std::mutex> lk(im.guard);
  std::memcpy(im.buf, b, n * sizeof(double));
  fftw_execute(im.fwd);
  const double* mult = im.mult.data();
  for (std::size_t i = 0; i < n; ++i) im.buf[i] *= mult[i];
  fftw_execute(im.bwd);
  std::memcpy(u, im.buf, n * sizeof(double));
  if (solve_counter) ++*solve_counter;
}

void HeatOperator::solve(const ScalarField& b, ScalarField& u,
                         std::int64_t* solve_counter) const {
  if (b.mesh != impl_->mesh) throw MeshMismatchError("heat solve");
  if (u.mesh != impl_->mesh) u = ScalarField(impl_->mesh);
  solve_raw(b.data.data(), u.data.data(), solve_counter);
}

ScalarField HeatOperator::solve(const ScalarField& b, std::int64_t* solve_counter) const {
  ScalarField u(impl_->mesh);
  solve(b, u, solve_counter);
  return u;
}

VectorField HeatOperator::solve(const VectorField& b, std::int64_t* solve_counter) const {
  if (b.mesh != impl_->mesh) throw MeshMismatchError("heat solve");
  VectorField u(impl_->mesh);
  for (int c = 0; c < 3; ++c) {
    solve_raw(b.comp[c].data(), u.comp[c].data(), solve_counter);
  }
  return u;
}

namespace {

// Row-major dense matrix of (I - lambda*Lap_h) built column by column by
// applying the stencil to unit vectors.
std::vector<double> dense_operator(const Mesh& mesh, double lambda) {
  const std::size_t n = mesh.cells();
  std::vector<double> a(n * n, 0.0);
  ScalarField e(mesh), col(mesh);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.data.begin(), e.data.end(), 0.0);
    e.data[j] = 1.0;
    apply_laplacian(e, col);
    for (std::size_t i = 0; i < n; ++i) {
      a[i * n + j] = (i == j ? 1.0 : 0.0) - lambda * col.data[i];
    }
  }
  return a;
}

}  // namespace

DenseHeatSolver::DenseHeatSolver(const Mesh& mesh, double lambda)
    : mesh_(mesh), n_(mesh.cells()), lu_(dense_operator(mesh, lambda)), piv_(n_) {
  // LU with partial pivoting, factored in place.
  for (std::size_t i = 0; i < n_; ++i) piv_[i] = i;
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_[k * n_ + k]);
    for (std::size_t i = k + 1; i < n_; ++i) {
      const double v = std::abs(lu_[i * n_ + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) throw std::runtime_error("singular dense heat operator");
    if (p != k) {
      for (std::size_t c = 0; c < n_; ++c) std::swap(lu_[k * n_ + c], lu_[p * n_ + c]);
      std::swap(piv_[k], piv_[p]);
    }
    const double inv = 1.0 / lu_[k * n_ + k];
    for (std::size_t i = k + 1; i < n_; ++i) {
      const double f = lu_[i * n_ + k] * inv;
      lu_[i * n_ + k] = f;
      for (std::size_t c = k + 1; c < n_; ++c) lu_[i * n_ + c] -= f * lu_[k * n_ + c];
    }
  }
}

void DenseHeatSolver::solve(const ScalarField& b, ScalarField& u) const {
  if (b.mesh != mesh_) throw MeshMismatchError("dense heat solve");
  if (u.mesh != mesh_) u = ScalarField(mesh_);
  std::vector<double> y(n_);
  for (std::size_t i = 0; i < n_; ++i) y[i] = b.data[piv_[i]];
  for (std::size_t i = 0; i < n_; ++i) {
    double s = y[i];
    for (std::size_t c = 0; c < i; ++c) s -= lu_[i * n_ + c] * y[c];
    y[i] = s;
  }
  for (std::size_t ii = n_; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t c = ii + 1; c < n_; ++c) s -= lu_[ii * n_ + c] * y[c];
    y[ii] = s / lu_[ii * n_ + ii];
  }
  u.data.assign(y.begin(), y.end());
}

ScalarField DenseHeatSolver::solve(const ScalarField& b) const {
  ScalarField u(mesh_);
  solve(b, u);
  return u;
}

VectorField DenseHeatSolver::solve(const VectorField& b) const {
  if (b.mesh != mesh_) throw MeshMismatchError("dense heat solve");
  VectorField u(mesh_);
  ScalarField bc(mesh_), uc(mesh_);
  for (int c = 0; c < 3; ++c) {
    bc.data = b.comp[c];
    solve(bc, uc);
    u.comp[c] = uc.data;
  }
  return u;
}

}  // namespace gspm

#include "gspm/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <random>

#include "gspm/errors.hpp"
#include "gspm/field_ops.hpp"
#include "gspm/snapshot.hpp"

namespace gspm {

namespace {

// p(s) = s^2 (1-s)^2 and derivatives
inline double prof(double s) { return s * s * (1.0 - s) * (1.0 - s); }
inline double prof_d1(double s) { return 2.0 * s * (1.0 - s) * (1.0 - 2.0 * s); }
inline double prof_d2(double s) { return 2.0 - 12.0 * s + 12.0 * s * s; }

struct ProfilePoint {
  double u = 0.0;      // u(x)
  double grad2 = 0.0;  // |grad u|^2
  double lap = 0.0;    // Lap u
};

ProfilePoint profile_at(int dimension, const std::array<double, 3>& x) {
  ProfilePoint p;
  if (dimension == 1) {
    p.u = prof(x[0]);
    const double d1 = prof_d1(x[0]);
    p.grad2 = d1 * d1;
    p.lap = prof_d2(x[0]);
  } else {
    const double px = prof(x[0]), py = prof(x[1]), pz = prof(x[2]);
    const double gx = prof_d1(x[0]) * py * pz;
    const double gy = px * prof_d1(x[1]) * pz;
    const double gz = px * py * prof_d1(x[2]);
    p.u = px * py * pz;
    p.grad2 = gx * gx + gy * gy + gz * gz;
    p.lap = prof_d2(x[0]) * py * pz + px * prof_d2(x[1]) * pz + px * py * prof_d2(x[2]);
  }
  return p;
}

Vec3 exact_from(const ProfilePoint& p, double t) {
  return {std::cos(p.u) * std::sin(t), std::sin(p.u) * std::sin(t), std::cos(t)};
}

Vec3 lap_from(const ProfilePoint& p, double t) {
  const double st = std::sin(t);
  const double cu = std::cos(p.u), su = std::sin(p.u);
  return {(-cu * p.grad2 - su * p.lap) * st, (-su * p.grad2 + cu * p.lap) * st, 0.0};
}

Vec3 forcing_from(const ProfilePoint& p, double t, double alpha) {
  const Vec3 me = exact_from(p, t);
  const Vec3 met{std::cos(p.u) * std::cos(t), std::sin(p.u) * std::cos(t), -std::sin(t)};
  const Vec3 lap = lap_from(p, t);
  const Vec3 mxl = cross(me, lap);
  return met + mxl + alpha * cross(me, mxl);
}

// spatial tables for fast field-level evaluation
struct CaseTables {
  std::vector<double> cu, su, grad2, lap;
};

CaseTables build_tables(const ManufacturedCase& mc, const Mesh& mesh) {
  CaseTables t;
  const std::size_t n = mesh.cells();
  t.cu.resize(n);
  t.su.resize(n);
  t.grad2.resize(n);
  t.lap.resize(n);
  for (std::size_t k = 0; k < mesh.nz; ++k) {
    for (std::size_t j = 0; j < mesh.ny; ++j) {
      for (std::size_t i = 0; i < mesh.nx; ++i) {
        const auto p = profile_at(mc.dimension, mesh.center(i, j, k));
        const std::size_t at = mesh.index(i, j, k);
        t.cu[at] = std::cos(p.u);
        t.su[at] = std::sin(p.u);
        t.grad2[at] = p.grad2;
        t.lap[at] = p.lap;
      }
    }
  }
  return t;
}

void forcing_into(const CaseTables& tab, double alpha, double t, VectorField& out) {
  const double st = std::sin(t), ct = std::cos(t);
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double cu = tab.cu[i], su = tab.su[i];
    const double m1 = cu * st, m2 = su * st, m3 = ct;
    const double l1 = (-cu * tab.grad2[i] - su * tab.lap[i]) * st;
    const double l2 = (-su * tab.grad2[i] + cu * tab.lap[i]) * st;
    // c = m x lap(m), lap3 = 0
    const double c1 = m2 * 0.0 - m3 * l2;
    const double c2 = m3 * l1 - m1 * 0.0;
    const double c3 = m1 * l2 - m2 * l1;
    // d = m x c
    const double d1 = m2 * c3 - m3 * c2;
    const double d2 = m3 * c1 - m1 * c3;
    const double d3 = m1 * c2 - m2 * c1;
    out.comp[0][i] = cu * ct + c1 + alpha * d1;
    out.comp[1][i] = su * ct + c2 + alpha * d2;
    out.comp[2][i] = -st + c3 + alpha * d3;
  }
}

double fit_slope(const std::vector<ConvergencePoint>& pts) {
  // least squares of log(error) against log(h)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& p : pts) {
    const double x = std::log(p.h), y = std::log(p.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergencePoint run_case(const ManufacturedCase& mc, SchemeKind scheme, const Mesh& mesh,
                          double dt, double h, ConvergenceStudy& study) {
  FieldContext ctx;
  ctx.mesh = mesh;
  ctx.eps = 1.0;
  ctx.forcing = mc.forcing(mesh);
  VectorField m0 = mc.exact_field(mesh, 0.0);
  m0.unit = true;

  Stepper stepper(scheme, ctx, std::move(m0), dt, mc.alpha);
  const auto n_steps = static_cast<std::int64_t>(std::llround(mc.T / dt));
  const RunReport rep = stepper.run(n_steps);

  study.max_unit_deviation = std::max(study.max_unit_deviation, rep.max_unit_deviation);
  study.counters_ok = study.counters_ok && rep.counters_constant;

  ConvergencePoint pt;
  pt.h = h;
  pt.steps = n_steps;
  pt.seconds = rep.wall_seconds;
  pt.error = max_norm_error(stepper.m(), mc.exact_field(mesh, stepper.time()));
  return pt;
}

}  // namespace

ManufacturedCase ManufacturedCase::case_1d(double alpha, double T) {
  ManufacturedCase mc;
  mc.dimension = 1;
  mc.alpha = alpha;
  mc.T = T;
  mc.box = {1.0, 1.0, 1.0};
  return mc;
}

ManufacturedCase ManufacturedCase::case_3d(double alpha, double T) {
  ManufacturedCase mc;
  mc.dimension = 3;
  mc.alpha = alpha;
  mc.T = T;
  mc.box = {2.0, 1.0, 0.2};
  return mc;
}

Vec3 ManufacturedCase::exact(const std::array<double, 3>& x, double t) const {
  return exact_from(profile_at(dimension, x), t);
}

Vec3 ManufacturedCase::exact_dt(const std::array<double, 3>& x, double t) const {
  const auto p = profile_at(dimension, x);
  return {std::cos(p.u) * std::cos(t), std::sin(p.u) * std::cos(t), -std::sin(t)};
}

Vec3 ManufacturedCase::exact_lap(const std::array<double, 3>& x, double t) const {
  return lap_from(profile_at(dimension, x), t);
}

Vec3 ManufacturedCase::forcing_at(const std::array<double, 3>& x, double t) const {
  return forcing_from(profile_at(dimension, x), t, alpha);
}

VectorField ManufacturedCase::exact_field(const Mesh& mesh, double t) const {
  VectorField f(mesh);
  const double st = std::sin(t), ct = std::cos(t);
  for (std::size_t k = 0; k < mesh.nz; ++k) {
    for (std::size_t j = 0; j < mesh.ny; ++j) {
      for (std::size_t i = 0; i < mesh.nx; ++i) {
        const auto p = profile_at(dimension, mesh.center(i, j, k));
        const std::size_t at = mesh.index(i, j, k);
        f.comp[0][at] = std::cos(p.u) * st;
        f.comp[1][at] = std::sin(p.u) * st;
        f.comp[2][at] = ct;
      }
    }
  }
  return f;
}

ForcingFn ManufacturedCase::forcing(const Mesh& mesh) const {
  auto tables = std::make_shared<CaseTables>(build_tables(*this, mesh));
  const double a = alpha;
  const Mesh bound = mesh;
  return [tables, a, bound](const Mesh& m, double t, VectorField& out) {
    if (m != bound) throw MeshMismatchError("manufactured forcing");
    if (out.mesh != bound) out = VectorField(bound);
    forcing_into(*tables, a, t, out);
  };
}

Mesh ManufacturedCase::default_mesh() const {
  if (dimension == 1) return make_mesh_1d(100, 1.0 / 100.0);
  return make_mesh_3d(32, 16, 4, box[0] / 32.0, box[1] / 16.0, box[2] / 4.0);
}

Mesh ManufacturedCase::mesh_for_spacing(double spacing) const {
  if (dimension == 1) {
    const auto nx = static_cast<std::size_t>(std::max(1.0, std::round(box[0] / spacing)));
    return make_mesh_1d(nx, box[0] / static_cast<double>(nx));
  }
  return mesh_from_uniform_spacing(box, spacing);
}

ConvergenceStudy temporal_convergence(const ManufacturedCase& mc, SchemeKind scheme,
                                      const Mesh& mesh, const std::vector<double>& dts) {
  ConvergenceStudy study;
  study.scheme = scheme;
  study.vary = Vary::Time;
  for (const double dt : dts) {
    study.points.push_back(run_case(mc, scheme, mesh, dt, dt, study));
  }
  study.slope = fit_slope(study.points);
  return study;
}

ConvergenceStudy spatial_convergence(const ManufacturedCase& mc, SchemeKind scheme,
                                     const std::vector<Mesh>& meshes, double dt) {
  ConvergenceStudy study;
  study.scheme = scheme;
  study.vary = Vary::Space;
  for (const Mesh& mesh : meshes) {
    study.points.push_back(run_case(mc, scheme, mesh, dt, mesh.dx, study));
  }
  study.slope = fit_slope(study.points);
  return study;
}

RatioTable efficiency_ratios(const ManufacturedCase& mc, const Mesh& mesh,
                             const std::vector<double>& dts) {
  RatioTable table;
  for (const double dt : dts) {
    RatioRow row;
    row.dt = dt;
    ConvergenceStudy scratch;
    row.seconds_gspm = run_case(mc, SchemeKind::GspmOriginal, mesh, dt, dt, scratch).seconds;
    row.seconds_a = run_case(mc, SchemeKind::SchemeA, mesh, dt, dt, scratch).seconds;
    row.seconds_b = run_case(mc, SchemeKind::SchemeB, mesh, dt, dt, scratch).seconds;
    row.ratio_a = (row.seconds_gspm - row.seconds_a) / row.seconds_gspm;
    row.ratio_b = (row.seconds_gspm - row.seconds_b) / row.seconds_gspm;
    table.total_gspm += row.seconds_gspm;
    table.total_a += row.seconds_a;
    table.total_b += row.seconds_b;
    table.rows.push_back(row);
  }
  table.ratio_a = (table.total_gspm - table.total_a) / table.total_gspm;
  table.ratio_b = (table.total_gspm - table.total_b) / table.total_gspm;
  return table;
}

VectorField random_smooth_unit_field(const Mesh& mesh, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  constexpr int kmax = 3;

  // Neumann-compatible cosine modes per axis and component.
  const double lx = static_cast<double>(mesh.nx) * mesh.dx;
  const double ly = static_cast<double>(mesh.ny) * mesh.dy;
  const double lz = static_cast<double>(mesh.nz) * mesh.dz;
  struct Mode {
    int c;
    double amp, kx, ky, kz;
  };
  std::vector<Mode> modes;
  for (int c = 0; c < 3; ++c) {
    for (int ax = 0; ax <= kmax; ++ax) {
      for (int ay = 0; ay <= (mesh.ny > 1 ? kmax : 0); ++ay) {
        for (int az = 0; az <= (mesh.nz > 1 ? kmax : 0); ++az) {
          const double damp = 1.0 / (1.0 + ax + ay + az);
          modes.push_back({c, 0.5 * damp * coef(rng), std::numbers::pi * ax / lx,
                           std::numbers::pi * ay / ly, std::numbers::pi * az / lz});
        }
      }
    }
  }

  VectorField f(mesh, {0.3, 0.3, 0.3});  // bias away from zero cells
  for (std::size_t k = 0; k < mesh.nz; ++k) {
    for (std::size_t j = 0; j < mesh.ny; ++j) {
      for (std::size_t i = 0; i < mesh.nx; ++i) {
        const auto x = mesh.center(i, j, k);
        const std::size_t at = mesh.index(i, j, k);
        for (const auto& mode : modes) {
          f.comp[mode.c][at] += mode.amp * std::cos(mode.kx * (x[0] - mesh.origin[0])) *
                                std::cos(mode.ky * (x[1] - mesh.origin[1])) *
                                std::cos(mode.kz * (x[2] - mesh.origin[2]));
        }
      }
    }
  }
  return project_onto_sphere(f);
}

std::vector<StabilityCell> stability_sweep(SchemeKind scheme, const std::vector<double>& alphas,
                                           const std::vector<double>& dts, const Mesh& mesh,
                                           std::int64_t n_steps, std::uint64_t seed) {
  std::vector<StabilityCell> cells;
  const VectorField m0 = random_smooth_unit_field(mesh, seed);

  FieldContext ctx;
  ctx.mesh = mesh;
  ctx.eps = 1.0;

  for (const double alpha : alphas) {
    for (const double dt : dts) {
      StabilityCell cell;
      cell.scheme = scheme;
      cell.alpha = alpha;
      cell.dt = dt;
      cell.steps = n_steps;
      cell.energy_initial = total_energy(ctx, m0);

      try {
        Stepper stepper(scheme, ctx, m0, dt, alpha);
        double max_excess = 0.0;
        double final_energy = cell.energy_initial;
        RunObservers obs;
        obs.on_step = [&](std::int64_t, double, const VectorField& m) {
          final_energy = total_energy(ctx, m);
          max_excess = std::max(max_excess, final_energy - cell.energy_initial);
        };
        const RunReport rep = stepper.run(n_steps, obs);
        cell.max_unit_deviation = rep.max_unit_deviation;
        cell.energy_final = final_energy;
        cell.max_energy_excess = max_excess;
        cell.stable = max_excess <= 1e-8;
      } catch (const DivergedError&) {
        cell.stable = false;
        cell.max_energy_excess = std::numeric_limits<double>::infinity();
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

HysteresisResult hysteresis_loop(const HysteresisProtocol& protocol, FieldContext base_ctx,
                                 VectorField m0) {
  if (!(protocol.H0 > 0.0) || !(protocol.dH > 0.0)) {
    throw ValidationError("hysteresis protocol requires H0 > 0 and dH > 0");
  }
  if (!(protocol.dt > 0.0)) throw ValidationError("hysteresis protocol requires dt > 0");

  const auto n_down = static_cast<std::int64_t>(std::llround(2.0 * protocol.H0 / protocol.dH));
  std::vector<double> fields;
  for (std::int64_t s = 0; s <= n_down; ++s) {
    fields.push_back(protocol.H0 - static_cast<double>(s) * protocol.dH);
  }
  for (std::int64_t s = n_down - 1; s >= 0; --s) {
    fields.push_back(protocol.H0 - static_cast<double>(s) * protocol.dH);
  }

  HysteresisResult result;
  result.descending_count = static_cast<std::size_t>(n_down) + 1;

  const auto t0 = std::chrono::steady_clock::now();
  VectorField m = std::move(m0);
  base_ctx.external_on = true;

  for (const double h : fields) {
    FieldContext ctx = base_ctx;
    ctx.h_ext = protocol.axis * h;

    Stepper stepper(protocol.scheme, ctx, std::move(m), protocol.dt, protocol.alpha);
    double prev_energy = total_energy(ctx, stepper.m());
    bool converged = false;
    std::int64_t steps = 0;
    while (steps < protocol.max_steps_per_field) {
      stepper.step();
      ++steps;
      const double dev = stepper.m().max_unit_deviation();
      if (!std::isfinite(dev)) throw DivergedError(steps);
      result.max_unit_deviation = std::max(result.max_unit_deviation, dev);
      const auto [want_solves, want_ffts] = expected_counts(protocol.scheme);
      if (stepper.stats().solves_last_step != want_solves ||
          stepper.stats().ffts_last_step != want_ffts) {
        result.counters_ok = false;
      }
      const double energy = total_energy(ctx, stepper.m());
      result.max_energy_rise_per_step =
          std::max(result.max_energy_rise_per_step, energy - prev_energy);
      const double denom = std::max(std::abs(prev_energy), 1e-300);
      const bool stationary = std::abs(energy - prev_energy) < protocol.energy_rtol * denom;
      prev_energy = energy;
      if (stationary) {
        converged = true;
        break;
      }
    }

    HysteresisPoint pt;
    pt.h = h;
    pt.avg_m = average_magnetization(stepper.m());
    pt.steps = steps;
    pt.energy = prev_energy;
    pt.converged = converged;
    result.points.push_back(pt);
    result.total_steps += steps;
    m = stepper.m();
  }

  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

SwitchFields find_switch_fields(const HysteresisResult& loop) {
  SwitchFields sw;
  const auto& pts = loop.points;
  const std::size_t nd = loop.descending_count;
  // descending branch: +H0 .. -H0; axis-projection starts positive
  for (std::size_t i = 1; i < nd; ++i) {
    if (pts[i].avg_m.x <= 0.0 && pts[i - 1].avg_m.x > 0.0) {
      sw.descending = pts[i].h;
      sw.found_descending = true;
      break;
    }
  }
  for (std::size_t i = nd; i < pts.size(); ++i) {
    const double prev = (i == nd) ? pts[nd - 1].avg_m.x : pts[i - 1].avg_m.x;
    if (pts[i].avg_m.x >= 0.0 && prev < 0.0) {
      sw.ascending = pts[i].h;
      sw.found_ascending = true;
      break;
    }
  }
  return sw;
}

double loop_area(const HysteresisResult& loop) {
  // trapezoid of (m_desc - m_asc) over the shared field grid; the turning
  // point at -H0 and the endpoint at +H0 belong to both branches
  const auto& pts = loop.points;
  const std::size_t n_down = loop.descending_count - 1;
  auto asc_at = [&](std::size_t i) -> const HysteresisPoint& { return pts[2 * n_down - i]; };
  double area = 0.0;
  for (std::size_t i = 0; i + 1 <= n_down; ++i) {
    const double gap1 = pts[i].avg_m.x - asc_at(i).avg_m.x;
    const double gap2 = pts[i + 1].avg_m.x - asc_at(i + 1).avg_m.x;
    area += 0.5 * (gap1 + gap2) * (pts[i].h - pts[i + 1].h);
  }
  return area;
}

VectorField profile_initial_state(const Mesh& mesh) {
  VectorField m(mesh);
  const double lx = static_cast<double>(mesh.nx) * mesh.dx;
  for (std::size_t k = 0; k < mesh.nz; ++k) {
    for (std::size_t j = 0; j < mesh.ny; ++j) {
      for (std::size_t i = 0; i < mesh.nx; ++i) {
        const double x = mesh.center(i, j, k)[0] - mesh.origin[0];
        const std::size_t at = mesh.index(i, j, k);
        const bool outer = (x <= lx / 5.0) || (x >= 4.0 * lx / 5.0);
        m.comp[0][at] = outer ? 0.0 : 1.0;
        m.comp[1][at] = outer ? 1.0 : 0.0;
        m.comp[2][at] = 0.0;
      }
    }
  }
  m.unit = true;
  return m;
}

VectorField centered_slice(const VectorField& f) {
  const Mesh& m = f.mesh;
  const std::size_t k = m.nz / 2;
  Mesh slice = m;
  slice.nz = 1;
  slice.origin[2] = m.origin[2] + static_cast<double>(k) * m.dz;
  VectorField out(slice);
  for (std::size_t j = 0; j < m.ny; ++j) {
    for (std::size_t i = 0; i < m.nx; ++i) {
      for (int c = 0; c < 3; ++c) {
        out.comp[c][slice.index(i, j, 0)] = f.comp[c][m.index(i, j, k)];
      }
    }
  }
  return out;
}

ProfileResult profile_relaxation(SchemeKind scheme, double alpha, const FieldContext& ctx,
                                 double dt, std::int64_t n_steps,
                                 const std::filesystem::path& outdir) {
  VectorField m0 = profile_initial_state(ctx.mesh);
  const bool emit = !outdir.empty();
  if (emit) {
    write_field_csv(outdir / "profile_initial_slice.csv", centered_slice(m0));
    write_angle_csv(outdir / "profile_initial_angle.csv",
                    in_plane_angle_map(centered_slice(m0)));
  }

  ProfileResult result;
  Stepper stepper(scheme, ctx, std::move(m0), dt, alpha);

  const std::int64_t probe = std::max<std::int64_t>(1, n_steps / 10);
  VectorField prev = stepper.m();
  RunObservers obs;
  obs.on_step = [&](std::int64_t step, double, const VectorField& m) {
    if (step == probe || step == n_steps) {
      const double rate = max_norm_error(m, prev) / dt;
      if (step == probe) result.rate_probe = rate;
      if (step == n_steps) result.rate_final = rate;
    }
    prev = m;
  };
  result.report = stepper.run(n_steps, obs);
  result.final_m = stepper.m();

  if (emit) {
    const VectorField slice = centered_slice(result.final_m);
    write_field_csv(outdir / "profile_final_slice.csv", slice);
    write_angle_csv(outdir / "profile_final_angle.csv", in_plane_angle_map(slice));
  }
  return result;
}

namespace {

const char* vary_name(Vary v) { return v == Vary::Time ? "time" : "space"; }

std::ofstream open_csv(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::out | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<ConvergenceStudy>& studies) {
  auto out = open_csv(path);
  out << "scheme,vary,stepsize,error,seconds,slope\n";
  for (const auto& st : studies) {
    for (const auto& p : st.points) {
      out << to_string(st.scheme) << ',' << vary_name(st.vary) << ',' << format_g17(p.h) << ','
          << format_g17(p.error) << ',' << format_g17(p.seconds) << ',' << format_g17(st.slope)
          << '\n';
    }
  }
}

void write_ratios_csv(const std::filesystem::path& path, const RatioTable& table) {
  auto out = open_csv(path);
  out << "dt,seconds_gspm,seconds_a,seconds_b,ratio_a,ratio_b\n";
  for (const auto& r : table.rows) {
    out << format_g17(r.dt) << ',' << format_g17(r.seconds_gspm) << ',' << format_g17(r.seconds_a)
        << ',' << format_g17(r.seconds_b) << ',' << format_g17(r.ratio_a) << ','
        << format_g17(r.ratio_b) << '\n';
  }
  out << "total," << format_g17(table.total_gspm) << ',' << format_g17(table.total_a) << ','
      << format_g17(table.total_b) << ',' << format_g17(table.ratio_a) << ','
      << format_g17(table.ratio_b) << '\n';
}

void write_stability_csv(const std::filesystem::path& path,
                         const std::vector<StabilityCell>& cells) {
  auto out = open_csv(path);
  out << "scheme,alpha,dt,steps,stable,max_unit_dev,energy_initial,energy_final,max_energy_excess\n";
  for (const auto& c : cells) {
    out << to_string(c.scheme) << ',' << format_g17(c.alpha) << ',' << format_g17(c.dt) << ','
        << c.steps << ',' << (c.stable ? 1 : 0) << ',' << format_g17(c.max_unit_deviation) << ','
        << format_g17(c.energy_initial) << ',' << format_g17(c.energy_final) << ','
        << format_g17(c.max_energy_excess) << '\n';
  }
}

void write_loop_csv(const std::filesystem::path& path, const HysteresisResult& loop,
                    double tesla_per_unit) {
  auto out = open_csv(path);
  out << "H,H_mT,m1,m2,m3,steps,energy,converged\n";
  for (const auto& p : loop.points) {
    out << format_g17(p.h) << ',' << format_g17(p.h * tesla_per_unit * 1e3) << ','
        << format_g17(p.avg_m.x) << ',' << format_g17(p.avg_m.y) << ',' << format_g17(p.avg_m.z)
        << ',' << p.steps << ',' << format_g17(p.energy) << ',' << (p.converged ? 1 : 0) << '\n';
  }
}

}  // namespace gspm

// Acceptance suite: one pass/fail line per criterion, exit 0 only if every
// gated criterion passes. Criterion selection: --criterion N (1..10),
// "all" (default), or "9full" for the opt-in full-scale hysteresis job
// that is excluded from the regular test run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "../support/dense_oracle.hpp"
#include "gspm/effective_field.hpp"
#include "gspm/errors.hpp"
#include "gspm/experiments.hpp"
#include "gspm/field_ops.hpp"
#include "gspm/heat_solver.hpp"
#include "gspm/material.hpp"
#include "gspm/schemes.hpp"
#include "gspm/snapshot.hpp"
#include "gspm/stray_field.hpp"

using namespace gspm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  bool warn = false;
  std::string detail;
};

const std::vector<SchemeKind> kAll = {SchemeKind::GspmOriginal, SchemeKind::SchemeA,
                                      SchemeKind::SchemeB};

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

// shared bookkeeping so criterion 6 can gate the norm deviations of the
// convergence runs of criteria 1-3
double g_worst_norm_dev = 0.0;
bool g_counters_ok = true;

void absorb(const ConvergenceStudy& st) {
  g_worst_norm_dev = std::max(g_worst_norm_dev, st.max_unit_deviation);
  g_counters_ok = g_counters_ok && st.counters_ok;
}

// --------------------------------------------------------------- criterion 1
Outcome criterion1() {
  Outcome out;
  const ManufacturedCase mc = ManufacturedCase::case_1d();  // alpha = 1e-5, T = 5e-2
  const Mesh mesh = make_mesh_1d(100, 0.01);
  std::vector<double> dts;
  for (const double div : {1250.0, 2500.0, 5000.0, 10000.0}) dts.push_back(mc.T / div);

  std::ostringstream detail;
  for (const auto kind : kAll) {
    const ConvergenceStudy st = temporal_convergence(mc, kind, mesh, dts);
    absorb(st);
    detail << to_string(kind) << ": " << fmt(st.slope) << "  ";
    if (st.slope < 0.85 || st.slope > 1.15) out.pass = false;
  }
  out.detail = "temporal slopes (want [0.85,1.15]): " + detail.str();
  return out;
}

// --------------------------------------------------------------- criterion 2
Outcome criterion2() {
  Outcome out;
  ManufacturedCase mc = ManufacturedCase::case_1d();
  mc.T = 1e-3;
  const double dt = 2e-8;
  std::vector<Mesh> meshes;
  for (const std::size_t nx : {40u, 80u, 160u}) {
    meshes.push_back(make_mesh_1d(nx, 1.0 / static_cast<double>(nx)));
  }

  std::ostringstream detail;
  for (const auto kind : kAll) {
    const ConvergenceStudy st = spatial_convergence(mc, kind, meshes, dt);
    absorb(st);
    detail << to_string(kind) << ": " << fmt(st.slope) << "  ";
    if (st.slope < 1.8 || st.slope > 2.2) out.pass = false;
  }
  out.detail = "spatial slopes (want [1.8,2.2]): " + detail.str();
  return out;
}

// --------------------------------------------------------------- criterion 3
Outcome criterion3() {
  Outcome out;
  const ManufacturedCase mc = ManufacturedCase::case_3d();  // alpha = 0.01, T = 1e-5
  const Mesh mesh = mc.default_mesh();                      // 32x16x4
  std::vector<double> dts;
  for (const double div : {10.0, 20.0, 40.0, 80.0}) dts.push_back(mc.T / div);

  std::ostringstream detail;
  detail << "temporal: ";
  for (const auto kind : kAll) {
    const ConvergenceStudy st = temporal_convergence(mc, kind, mesh, dts);
    absorb(st);
    detail << to_string(kind) << ": " << fmt(st.slope) << "  ";
    if (st.slope < 0.85 || st.slope > 1.15) out.pass = false;
  }

  ManufacturedCase spatial_case = mc;
  spatial_case.T = 1e-6;
  const double dt_space = 1e-9;
  std::vector<Mesh> meshes;
  for (const double spacing : {0.1, 1.0 / 15.0, 0.05}) {
    meshes.push_back(spatial_case.mesh_for_spacing(spacing));
  }
  detail << " spatial: ";
  for (const auto kind : kAll) {
    const ConvergenceStudy st = spatial_convergence(spatial_case, kind, meshes, dt_space);
    absorb(st);
    detail << to_string(kind) << ": " << fmt(st.slope) << "  ";
    if (st.slope < 1.8 || st.slope > 2.2) out.pass = false;
  }
  out.detail = detail.str();
  return out;
}

// --------------------------------------------------------------- criterion 4
Outcome criterion4() {
  Outcome out;
  std::ostringstream detail;

  // terms off and full-physics contexts both must hit the table exactly
  const Mesh mesh1 = make_mesh_1d(16, 1.0 / 16.0);
  const Mesh mesh2 = make_mesh_3d(8, 8, 1, 0.05, 0.05, 0.02);
  FieldContext plain;
  plain.mesh = mesh1;
  FieldContext film;
  film.mesh = mesh2;
  film.eps = 1e-3;
  film.Q = 0.05;
  film.anisotropy_on = true;
  film.external_on = true;
  film.h_ext = {0.01, 0.005, 0.0};
  film.stray_on = true;
  film.demag = std::make_shared<DemagTensor>(mesh2);

  for (const auto kind : kAll) {
    const auto [want_solves, want_ffts] = expected_counts(kind);
    for (const FieldContext* ctx : {&plain, &film}) {
      Stepper s(kind, *ctx, random_smooth_unit_field(ctx->mesh, 17), 1e-3, 0.1);
      for (int n = 0; n < 10; ++n) {
        s.step();
        if (s.stats().solves_last_step != want_solves ||
            s.stats().ffts_last_step != want_ffts) {
          out.pass = false;
        }
      }
    }
    detail << to_string(kind) << ": (" << want_solves << "," << want_ffts << ") ";
  }

  if (!g_counters_ok) out.pass = false;
  out.detail = "per-step (solves, stray updates) " + detail.str() +
               (g_counters_ok ? "constant on all experiment runs" : "VARIED during experiments");
  return out;
}

// --------------------------------------------------------------- criterion 5
Outcome criterion5() {
  Outcome out;
  std::ostringstream detail;

  // schemes vs dense transcriptions
  const Mesh mesh = make_mesh_1d(8, 1.0 / 8.0);
  const double dt = 1e-4, alpha = 0.1;
  const VectorField m0 = random_smooth_unit_field(mesh, 2024);
  const oracle::Dense dense(mesh, dt, alpha);
  FieldContext ctx;
  ctx.mesh = mesh;

  {
    Stepper s(SchemeKind::GspmOriginal, ctx, m0, dt, alpha);
    s.step();
    const double err = max_norm_error(s.m(), dense.step_gspm(m0));
    detail << "gspm " << fmt(err) << "  ";
    if (err > 1e-12) out.pass = false;
  }
  {
    Stepper s(SchemeKind::SchemeA, ctx, m0, dt, alpha);
    s.step();
    const double err = max_norm_error(s.m(), dense.step_a(m0));
    detail << "a " << fmt(err) << "  ";
    if (err > 1e-12) out.pass = false;
  }
  {
    Stepper s(SchemeKind::SchemeB, ctx, m0, dt, alpha);
    auto st = dense.init_b(m0);
    s.step();
    dense.step_b(st);
    const double err = max_norm_error(s.m(), st.m);
    detail << "b " << fmt(err) << "  ";
    if (err > 1e-12) out.pass = false;
  }

  // stray field: fft vs direct on 8x8x4
  {
    const Mesh film = make_mesh_3d(8, 8, 4, 1.0, 1.0, 1.0);
    const DemagTensor tensor(film);
    const VectorField m = random_smooth_unit_field(film, 31);
    const VectorField fft = stray_field(tensor, m);
    const VectorField direct = stray_field_direct(tensor, m);
    double scale = 0.0;
    for (int c = 0; c < 3; ++c) {
      for (double v : direct.comp[c]) scale = std::max(scale, std::abs(v));
    }
    const double rel = max_norm_error(fft, direct) / std::max(scale, 1e-300);
    detail << "stray " << fmt(rel) << "  ";
    if (rel > 1e-12) out.pass = false;
  }

  // heat: fast vs dense
  {
    const Mesh hm = make_mesh_3d(10, 5, 3, 0.2, 0.3, 0.4);
    const HeatOperator fast(hm, 0.63);
    const DenseHeatSolver slow(hm, 0.63);
    ScalarField b(hm);
    const VectorField r = random_smooth_unit_field(hm, 32);
    b.data = r.comp[0];
    const ScalarField uf = fast.solve(b);
    const ScalarField ud = slow.solve(b);
    double err = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      err = std::max(err, std::abs(uf.data[i] - ud.data[i]));
    }
    detail << "heat " << fmt(err);
    if (err > 1e-12) out.pass = false;
  }

  out.detail = "oracle gaps (want <= 1e-12): " + detail.str();
  return out;
}

// --------------------------------------------------------------- criterion 6
Outcome criterion6() {
  Outcome out;
  out.pass = g_worst_norm_dev <= 1e-14;
  out.detail = "worst max||m|-1| over criteria 1-3 runs: " + fmt(g_worst_norm_dev) +
               " (want <= 1e-14)";
  return out;
}

// --------------------------------------------------------------- criterion 7
Outcome criterion7() {
  Outcome out;
  const Mesh mesh = make_mesh_1d(100, 0.01);
  const std::vector<double> alphas = {0.01, 0.1, 1.0};
  const std::vector<double> dts = {mesh.dx, 10.0 * mesh.dx * mesh.dx};
  std::ostringstream detail;
  for (const auto kind : kAll) {
    const auto cells = stability_sweep(kind, alphas, dts, mesh, 10000, 424242);
    int stable = 0;
    for (const auto& c : cells) {
      if (c.stable) ++stable;
      g_worst_norm_dev = std::max(g_worst_norm_dev, c.max_unit_deviation);
    }
    detail << to_string(kind) << ": " << stable << "/" << cells.size() << "  ";
    if (stable != static_cast<int>(cells.size())) out.pass = false;
  }
  out.detail = "stable cells (alpha x dt grid, 1e4 steps): " + detail.str();
  return out;
}

// --------------------------------------------------------------- criterion 8
Outcome criterion8() {
  Outcome out;
  const ManufacturedCase mc = ManufacturedCase::case_1d();
  const Mesh mesh = make_mesh_1d(100, 0.01);
  std::vector<double> dts;
  for (const double div : {1250.0, 2500.0, 5000.0, 10000.0}) dts.push_back(mc.T / div);

  const RatioTable table = efficiency_ratios(mc, mesh, dts);
  const double a_lo = 2.0 / 7.0 - 0.15, a_hi = 2.0 / 7.0 + 0.15;
  const double b_lo = 4.0 / 7.0 - 0.15, b_hi = 4.0 / 7.0 + 0.15;

  out.detail = "measured ratio-A " + fmt(table.ratio_a) + " (band [" + fmt(a_lo) + "," +
               fmt(a_hi) + "]), ratio-B " + fmt(table.ratio_b) + " (band [" + fmt(b_lo) + "," +
               fmt(b_hi) + "])";
  if (table.ratio_a <= 0.0 || table.ratio_b <= 0.0) {
    out.pass = false;  // improved scheme slower than the original
  } else if (table.ratio_a < a_lo || table.ratio_a > a_hi || table.ratio_b < b_lo ||
             table.ratio_b > b_hi) {
    out.warn = true;  // informational on exotic hardware
  }
  return out;
}

// --------------------------------------------------------------- criterion 9
struct FilmSetup {
  MaterialParams material;
  Mesh mesh;
  FieldContext ctx;
  double dt = 0.0;
};

FilmSetup desk_film(std::size_t nx, std::size_t ny, std::size_t nz, double cell_m) {
  FilmSetup f;
  const std::array<double, 3> size = {static_cast<double>(nx) * cell_m,
                                      static_cast<double>(ny) * cell_m,
                                      static_cast<double>(nz) * cell_m};
  f.material.L = std::sqrt(size[0] * size[0] + size[1] * size[1] + size[2] * size[2]);
  f.mesh.nx = nx;
  f.mesh.ny = ny;
  f.mesh.nz = nz;
  f.mesh.dx = size[0] / f.material.L / static_cast<double>(nx);
  f.mesh.dy = size[1] / f.material.L / static_cast<double>(ny);
  f.mesh.dz = size[2] / f.material.L / static_cast<double>(nz);
  f.dt = f.material.seconds_to_dimensionless(1e-12);
  f.ctx.mesh = f.mesh;
  f.ctx.Q = f.material.Q();
  f.ctx.eps = f.material.eps();
  f.ctx.anisotropy_on = true;
  f.ctx.stray_on = true;
  f.ctx.demag = std::make_shared<DemagTensor>(f.mesh);
  return f;
}

Outcome criterion9(bool full_scale) {
  Outcome out;
  const FilmSetup film = full_scale ? desk_film(250, 250, 5, 4e-9) : desk_film(64, 64, 1, 4e-9);

  const double h0_mt = full_scale ? 20.0 : 30.0;
  const double dh_mt = full_scale ? h0_mt / 25.0 : 3.0;

  HysteresisProtocol protocol;
  protocol.H0 = film.material.tesla_to_dimensionless(h0_mt * 1e-3);
  protocol.dH = film.material.tesla_to_dimensionless(dh_mt * 1e-3);
  protocol.dt = film.dt;
  protocol.alpha = 0.1;
  protocol.max_steps_per_field = full_scale ? 100000 : 20000;
  const double tilt = 1.0 * std::numbers::pi / 180.0;
  protocol.axis = {std::cos(tilt), std::sin(tilt), 0.0};

  const VectorField m0(film.mesh, {1.0, 0.0, 0.0});

  std::ostringstream detail;
  std::map<SchemeKind, SwitchFields> switches;
  for (const auto kind : kAll) {
    protocol.scheme = kind;
    const HysteresisResult loop = hysteresis_loop(protocol, film.ctx, m0);
    g_worst_norm_dev = std::max(g_worst_norm_dev, loop.max_unit_deviation);
    g_counters_ok = g_counters_ok && loop.counters_ok;

    const double area = loop_area(loop);
    const SwitchFields sw = find_switch_fields(loop);
    switches[kind] = sw;
    detail << to_string(kind) << ": area " << fmt(area) << " switch "
           << fmt(std::abs(film.material.dimensionless_to_tesla(sw.descending)) * 1e3) << "/"
           << fmt(std::abs(film.material.dimensionless_to_tesla(sw.ascending)) * 1e3)
           << " mT  ";

    if (!(area > 0.0)) out.pass = false;
    if (!sw.found_descending || !sw.found_ascending) {
      out.pass = false;
      continue;
    }
    // antisymmetry within one field step
    if (std::abs(std::abs(sw.descending) - std::abs(sw.ascending)) > protocol.dH * 1.000001) {
      out.pass = false;
    }
    if (full_scale && kind == SchemeKind::GspmOriginal) {
      const double sw_mt = std::abs(film.material.dimensionless_to_tesla(sw.descending)) * 1e3;
      if (sw_mt < 8.0 || sw_mt > 10.0) out.pass = false;
    }
  }

  // cross-scheme agreement within one field step
  const auto& ref = switches[SchemeKind::GspmOriginal];
  for (const auto kind : {SchemeKind::SchemeA, SchemeKind::SchemeB}) {
    const auto& sw = switches[kind];
    if (!ref.found_descending || !sw.found_descending ||
        std::abs(sw.descending - ref.descending) > protocol.dH * 1.000001) {
      out.pass = false;
    }
  }
  out.detail = detail.str();
  return out;
}

// -------------------------------------------------------------- criterion 10
Outcome criterion10(const fs::path& outdir) {
  Outcome out;
  const FilmSetup film = desk_film(64, 64, 1, 4e-9);
  const double t_total = film.material.seconds_to_dimensionless(1e-9);
  const auto n_steps = static_cast<std::int64_t>(std::llround(t_total / film.dt));

  std::ostringstream detail;
  for (const auto kind : {SchemeKind::SchemeA, SchemeKind::SchemeB}) {
    for (const double alpha : {0.1, 0.01}) {
      FieldContext ctx = film.ctx;
      ctx.external_on = false;
      const double e0 = total_energy(ctx, profile_initial_state(film.mesh));

      std::ostringstream tag;
      tag << to_string(kind) << "_alpha" << alpha;
      const fs::path dir = outdir / ("profile_" + tag.str());
      const ProfileResult res = profile_relaxation(kind, alpha, ctx, film.dt, n_steps, dir);

      g_worst_norm_dev = std::max(g_worst_norm_dev, res.report.max_unit_deviation);
      g_counters_ok = g_counters_ok && res.report.counters_constant;

      const double e_final = total_energy(ctx, res.final_m);
      const bool norm_ok = res.report.max_unit_deviation <= 1e-14;
      const bool energy_ok = e_final <= e0 + 1e-8;
      const bool files_ok = fs::exists(dir / "profile_final_angle.csv") &&
                            fs::exists(dir / "profile_final_slice.csv");
      if (!norm_ok || !energy_ok || !files_ok) out.pass = false;
      detail << tag.str() << (norm_ok && energy_ok && files_ok ? " ok" : " FAIL") << "  ";
    }
  }
  out.detail = detail.str();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string which = "all";
  fs::path outdir = "acceptance_out";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      which = argv[++i];
    } else if (arg == "--out" && i + 1 < argc) {
      outdir = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--criterion N|all|9full] [--out DIR]\n";
      return 2;
    }
  }

  const std::map<std::string, std::string> titles = {
      {"1", "temporal order, 1D manufactured case"},
      {"2", "spatial order, 1D manufactured case"},
      {"3", "temporal and spatial order, 3D manufactured case"},
      {"4", "per-step solve and stray-update counters"},
      {"5", "dense-oracle equivalence (schemes, stray field, heat solves)"},
      {"6", "unit-norm preservation across experiment runs"},
      {"7", "numerical unconditional stability sweep"},
      {"8", "efficiency ratios vs the original scheme"},
      {"9", "desk-scale hysteresis loops"},
      {"9full", "full-scale hysteresis switch field (opt-in long job)"},
      {"10", "zero-field profile relaxation"},
  };

  std::vector<std::string> selected;
  if (which == "all") {
    selected = {"1", "2", "3", "4", "5", "6", "7", "8", "9", "10"};
  } else if (titles.count(which)) {
    if (which == "6") {
      // norm gate covers the runs of criteria 1-3; execute them first
      selected = {"1", "2", "3", "6"};
    } else {
      selected = {which};
    }
  } else {
    std::cerr << "unknown criterion '" << which << "'\n";
    return 2;
  }

  bool all_pass = true;
  for (const std::string& id : selected) {
    const bool report_only_last = selected.size() > 1 && which != "all" && id != which;
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (id == "1") out = criterion1();
      else if (id == "2") out = criterion2();
      else if (id == "3") out = criterion3();
      else if (id == "4") out = criterion4();
      else if (id == "5") out = criterion5();
      else if (id == "6") out = criterion6();
      else if (id == "7") out = criterion7();
      else if (id == "8") out = criterion8();
      else if (id == "9") out = criterion9(false);
      else if (id == "9full") out = criterion9(true);
      else if (id == "10") out = criterion10(outdir);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (report_only_last) continue;  // silent prerequisite run
    const char* verdict = out.pass ? (out.warn ? "WARN" : "PASS") : "FAIL";
    std::cout << "[" << verdict << "] criterion " << id << ": " << titles.at(id) << " - "
              << out.detail << " (" << fmt(secs) << " s)" << std::endl;
    if (!out.pass) all_pass = false;
  }
  return all_pass ? 0 : 1;
}

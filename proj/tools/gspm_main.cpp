// Command-line front end: experiment drivers, field-sweep simulations and a
// single-step debug hook over the solver library.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gspm/config.hpp"
#include "gspm/errors.hpp"
#include "gspm/experiments.hpp"
#include "gspm/field_ops.hpp"
#include "gspm/schemes.hpp"
#include "gspm/snapshot.hpp"
#include "gspm/stray_field.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailure = 1;
constexpr int kExitConfigError = 2;

fs::path resolve_outdir(const std::string& flag_value) {
  if (const char* env = std::getenv("GSPM_OUT_DIR"); env && *env) return fs::path(env);
  return fs::path(flag_value);
}

gspm::SchemeKind parse_scheme_or_throw(const std::string& name) {
  const auto k = gspm::scheme_from_string(name);
  if (!k) throw gspm::ValidationError("unknown scheme '" + name + "' (use gspm, a or b)");
  return *k;
}

std::vector<gspm::SchemeKind> scheme_set(const std::string& name) {
  if (name == "all") {
    return {gspm::SchemeKind::GspmOriginal, gspm::SchemeKind::SchemeA, gspm::SchemeKind::SchemeB};
  }
  return {parse_scheme_or_throw(name)};
}

void write_report(const fs::path& outdir, const json& body) {
  fs::create_directories(outdir);
  std::ofstream out(outdir / "report.json");
  out << body.dump(2) << '\n';
}

json stats_json(const gspm::SolveStats& st) {
  return json{{"steps", st.steps},
              {"solves_per_step", st.solves_last_step},
              {"fft_updates_per_step", st.ffts_last_step},
              {"solves_total", st.solves_total},
              {"fft_updates_total", st.ffts_total},
              {"seconds_total", st.seconds_total}};
}

// ---------------------------------------------------------------------------
// converge / ratios

struct StudyPlan {
  gspm::ManufacturedCase mc;
  gspm::Mesh mesh;                // temporal studies
  std::vector<double> dts;        // temporal studies
  std::vector<gspm::Mesh> meshes; // spatial studies
  double dt_space = 0.0;          // spatial studies
};

StudyPlan temporal_plan(const std::string& which) {
  StudyPlan p;
  if (which == "1d") {
    p.mc = gspm::ManufacturedCase::case_1d();
    p.mesh = p.mc.default_mesh();
    for (const double div : {1250.0, 2500.0, 5000.0, 10000.0}) p.dts.push_back(p.mc.T / div);
  } else {
    p.mc = gspm::ManufacturedCase::case_3d();
    p.mesh = p.mc.default_mesh();
    for (const double div : {10.0, 20.0, 40.0, 80.0}) p.dts.push_back(p.mc.T / div);
  }
  return p;
}

StudyPlan spatial_plan(const std::string& which) {
  StudyPlan p;
  if (which == "1d") {
    p.mc = gspm::ManufacturedCase::case_1d();
    p.mc.T = 1e-3;
    p.dt_space = 2e-8;
    for (const std::size_t nx : {40u, 80u, 160u}) {
      p.meshes.push_back(gspm::make_mesh_1d(nx, 1.0 / static_cast<double>(nx)));
    }
  } else {
    p.mc = gspm::ManufacturedCase::case_3d();
    p.mc.T = 1e-6;
    p.dt_space = 1e-9;
    for (const double spacing : {1.0 / 10.0, 1.0 / 15.0, 1.0 / 20.0}) {
      p.meshes.push_back(p.mc.mesh_for_spacing(spacing));
    }
  }
  return p;
}

int run_converge(const std::string& which, const std::string& scheme, const std::string& vary,
                 const fs::path& outdir) {
  std::vector<gspm::ConvergenceStudy> studies;
  for (const auto kind : scheme_set(scheme)) {
    if (vary == "time") {
      const StudyPlan p = temporal_plan(which);
      studies.push_back(gspm::temporal_convergence(p.mc, kind, p.mesh, p.dts));
    } else {
      const StudyPlan p = spatial_plan(which);
      studies.push_back(gspm::spatial_convergence(p.mc, kind, p.meshes, p.dt_space));
    }
  }
  fs::create_directories(outdir);
  gspm::write_convergence_csv(outdir / "convergence.csv", studies);

  json rep;
  rep["command"] = "converge";
  rep["case"] = which;
  rep["vary"] = vary;
  for (const auto& st : studies) {
    json entry;
    entry["scheme"] = gspm::to_string(st.scheme);
    entry["slope"] = st.slope;
    entry["max_unit_deviation"] = st.max_unit_deviation;
    entry["counters_constant"] = st.counters_ok;
    for (const auto& pt : st.points) {
      entry["points"].push_back(json{{"stepsize", pt.h},
                                     {"error", pt.error},
                                     {"seconds", pt.seconds},
                                     {"steps", pt.steps}});
    }
    rep["studies"].push_back(entry);
    std::cout << "scheme " << gspm::to_string(st.scheme) << " " << vary
              << " slope: " << st.slope << '\n';
  }
  rep["outputs"] = json::array({"convergence.csv"});
  write_report(outdir, rep);
  return kExitOk;
}

int run_ratios(const std::string& which, const fs::path& outdir) {
  const StudyPlan p = temporal_plan(which);
  const gspm::RatioTable table = gspm::efficiency_ratios(p.mc, p.mesh, p.dts);
  fs::create_directories(outdir);
  gspm::write_ratios_csv(outdir / "ratios.csv", table);

  json rep;
  rep["command"] = "ratios";
  rep["case"] = which;
  rep["ratio_a"] = table.ratio_a;
  rep["ratio_b"] = table.ratio_b;
  rep["outputs"] = json::array({"ratios.csv"});
  write_report(outdir, rep);
  std::cout << "ratio-A " << table.ratio_a << " (ideal 2/7 = " << 2.0 / 7.0 << ")\n";
  std::cout << "ratio-B " << table.ratio_b << " (ideal 4/7 = " << 4.0 / 7.0 << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stability

int run_stability(const std::string& scheme, std::vector<double> alphas, std::vector<double> dts,
                  std::size_t nx, std::int64_t steps, std::uint64_t seed, const fs::path& outdir) {
  const gspm::Mesh mesh = gspm::make_mesh_1d(nx, 1.0 / static_cast<double>(nx));
  if (alphas.empty()) alphas = {0.01, 0.1, 1.0};
  if (dts.empty()) dts = {mesh.dx, 10.0 * mesh.dx * mesh.dx};

  std::vector<gspm::StabilityCell> cells;
  for (const auto kind : scheme_set(scheme)) {
    const auto more = gspm::stability_sweep(kind, alphas, dts, mesh, steps, seed);
    cells.insert(cells.end(), more.begin(), more.end());
  }
  fs::create_directories(outdir);
  gspm::write_stability_csv(outdir / "stability.csv", cells);

  bool all_stable = true;
  json rep;
  rep["command"] = "stability";
  for (const auto& c : cells) {
    all_stable = all_stable && c.stable;
    rep["cells"].push_back(json{{"scheme", gspm::to_string(c.scheme)},
                                {"alpha", c.alpha},
                                {"dt", c.dt},
                                {"stable", c.stable},
                                {"max_energy_excess", c.max_energy_excess}});
    std::cout << "scheme " << gspm::to_string(c.scheme) << " alpha " << c.alpha << " dt " << c.dt
              << (c.stable ? " stable" : " UNSTABLE") << '\n';
  }
  rep["outputs"] = json::array({"stability.csv"});
  write_report(outdir, rep);
  return all_stable ? kExitOk : kExitRunFailure;
}

// ---------------------------------------------------------------------------
// hysteresis / profile shared setup

struct FilmSetup {
  gspm::MaterialParams material;
  gspm::Mesh mesh;
  double dt = 0.0;     // dimensionless
  double alpha = 0.1;
  gspm::FieldContext ctx;  // anisotropy + stray enabled, no external
};

FilmSetup film_from_config(const gspm::RunConfig& cfg) {
  FilmSetup setup;
  setup.material = cfg.material;
  setup.mesh = cfg.mesh;
  setup.dt = cfg.dt;
  setup.alpha = cfg.alpha;
  setup.ctx.mesh = cfg.mesh;
  setup.ctx.Q = cfg.q;
  setup.ctx.eps = cfg.eps;
  setup.ctx.anisotropy_on = cfg.anisotropy;
  setup.ctx.external_on = cfg.external;
  setup.ctx.h_ext = cfg.h_ext;
  setup.ctx.stray_on = cfg.stray;
  if (cfg.stray) setup.ctx.demag = std::make_shared<gspm::DemagTensor>(cfg.mesh);
  return setup;
}

FilmSetup default_film(bool full_scale) {
  // thin permalloy-like film, 4 nm cells, dt = 1 ps
  const double cell = 4e-9;
  const std::array<double, 3> size = full_scale
                                         ? std::array<double, 3>{1e-6, 1e-6, 0.02e-6}
                                         : std::array<double, 3>{256e-9, 256e-9, 4e-9};
  FilmSetup setup;
  setup.material.L = std::sqrt(size[0] * size[0] + size[1] * size[1] + size[2] * size[2]);
  setup.alpha = setup.material.alpha;

  gspm::Mesh mesh;
  mesh.nx = static_cast<std::size_t>(std::llround(size[0] / cell));
  mesh.ny = static_cast<std::size_t>(std::llround(size[1] / cell));
  mesh.nz = static_cast<std::size_t>(std::llround(size[2] / cell));
  mesh.dx = size[0] / setup.material.L / static_cast<double>(mesh.nx);
  mesh.dy = size[1] / setup.material.L / static_cast<double>(mesh.ny);
  mesh.dz = size[2] / setup.material.L / static_cast<double>(mesh.nz);
  setup.mesh = mesh;
  setup.dt = setup.material.seconds_to_dimensionless(1e-12);

  setup.ctx.mesh = mesh;
  setup.ctx.Q = setup.material.Q();
  setup.ctx.eps = setup.material.eps();
  setup.ctx.anisotropy_on = true;
  setup.ctx.stray_on = true;
  setup.ctx.demag = std::make_shared<gspm::DemagTensor>(mesh);
  return setup;
}

int run_hysteresis(const std::optional<std::string>& config_path, const std::string& scheme,
                   double h0_mt, double dh_mt, double tilt_deg, std::int64_t max_steps,
                   bool full_scale, const fs::path& outdir) {
  FilmSetup setup = config_path ? film_from_config(gspm::parse_config_file(*config_path))
                                : default_film(full_scale);

  gspm::HysteresisProtocol protocol;
  protocol.scheme = parse_scheme_or_throw(scheme);
  protocol.alpha = setup.alpha;
  protocol.dt = setup.dt;
  protocol.max_steps_per_field = max_steps;
  protocol.H0 = setup.material.tesla_to_dimensionless(h0_mt * 1e-3);
  protocol.dH = setup.material.tesla_to_dimensionless(dh_mt * 1e-3);
  const double tilt = tilt_deg * std::numbers::pi / 180.0;
  protocol.axis = {std::cos(tilt), std::sin(tilt), 0.0};

  const gspm::VectorField m0(setup.mesh, {1.0, 0.0, 0.0});
  const gspm::HysteresisResult loop = gspm::hysteresis_loop(protocol, setup.ctx, m0);

  fs::create_directories(outdir);
  gspm::write_loop_csv(outdir / "loop.csv", loop,
                       setup.material.dimensionless_to_tesla(1.0));

  const gspm::SwitchFields sw = gspm::find_switch_fields(loop);
  json rep;
  rep["command"] = "hysteresis";
  rep["scheme"] = scheme;
  rep["H0_mT"] = h0_mt;
  rep["dH_mT"] = dh_mt;
  rep["tilt_deg"] = tilt_deg;
  rep["full_scale"] = full_scale;
  rep["counters_constant"] = loop.counters_ok;
  rep["max_unit_deviation"] = loop.max_unit_deviation;
  rep["total_steps"] = loop.total_steps;
  rep["wall_seconds"] = loop.wall_seconds;
  rep["loop_area"] = gspm::loop_area(loop);
  if (sw.found_descending) {
    rep["switch_descending_mT"] =
        std::abs(setup.material.dimensionless_to_tesla(sw.descending)) * 1e3;
  }
  if (sw.found_ascending) {
    rep["switch_ascending_mT"] =
        std::abs(setup.material.dimensionless_to_tesla(sw.ascending)) * 1e3;
  }
  rep["outputs"] = json::array({"loop.csv"});
  write_report(outdir, rep);

  std::cout << "loop points: " << loop.points.size() << ", area: " << gspm::loop_area(loop)
            << '\n';
  if (sw.found_descending) {
    std::cout << "switch field (descending): "
              << std::abs(setup.material.dimensionless_to_tesla(sw.descending)) * 1e3 << " mT\n";
  }
  return kExitOk;
}

int run_profile(const std::optional<std::string>& config_path, const std::string& scheme,
                double alpha, double t_ns, bool full_scale, const fs::path& outdir) {
  FilmSetup setup = config_path ? film_from_config(gspm::parse_config_file(*config_path))
                                : default_film(full_scale);
  setup.ctx.external_on = false;

  const double t_total = setup.material.seconds_to_dimensionless(t_ns * 1e-9);
  const auto n_steps = static_cast<std::int64_t>(std::llround(t_total / setup.dt));

  const auto kind = parse_scheme_or_throw(scheme);
  fs::create_directories(outdir);
  const gspm::ProfileResult result =
      gspm::profile_relaxation(kind, alpha, setup.ctx, setup.dt, n_steps, outdir);

  json rep;
  rep["command"] = "profile";
  rep["scheme"] = scheme;
  rep["alpha"] = alpha;
  rep["T_ns"] = t_ns;
  rep["steps"] = result.report.steps;
  rep["max_unit_deviation"] = result.report.max_unit_deviation;
  rep["counters_constant"] = result.report.counters_constant;
  rep["rate_probe"] = result.rate_probe;
  rep["rate_final"] = result.rate_final;
  rep["stats"] = stats_json(result.report.stats);
  rep["outputs"] = json::array({"profile_initial_slice.csv", "profile_initial_angle.csv",
                                "profile_final_slice.csv", "profile_final_angle.csv"});
  write_report(outdir, rep);
  std::cout << "profile done: " << result.report.steps
            << " steps, max norm deviation " << result.report.max_unit_deviation << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// step-debug

int run_step_debug(const std::string& scheme, const std::string& in_path,
                   const std::string& out_path, double dt, double alpha, double eps, double q,
                   const std::vector<double>& he, bool aniso, bool external, bool stray) {
  gspm::VectorField m = gspm::read_field_auto(in_path);
  gspm::FieldContext ctx;
  ctx.mesh = m.mesh;
  ctx.eps = eps;
  ctx.Q = q;
  ctx.anisotropy_on = aniso;
  ctx.external_on = external;
  ctx.stray_on = stray;
  if (!he.empty()) {
    if (he.size() != 3) throw gspm::ValidationError("--he needs three components");
    ctx.h_ext = {he[0], he[1], he[2]};
  }
  if (stray) ctx.demag = std::make_shared<gspm::DemagTensor>(m.mesh);

  m = gspm::project_onto_sphere(m);
  gspm::Stepper stepper(parse_scheme_or_throw(scheme), ctx, std::move(m), dt, alpha);
  stepper.step();

  json rep;
  rep["command"] = "step-debug";
  rep["scheme"] = scheme;
  rep["dt"] = dt;
  rep["alpha"] = alpha;
  rep["stats"] = stats_json(stepper.stats());
  rep["max_unit_deviation"] = stepper.m().max_unit_deviation();
  std::cout << rep.dump(2) << '\n';

  if (!out_path.empty()) gspm::write_field_auto(out_path, stepper.m());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gauss-Seidel projection solvers for magnetization dynamics"};
  app.require_subcommand(1);

  std::string scheme = "a";
  std::string which = "1d";
  std::string vary = "time";
  std::string outdir = "out";
  std::string config_path;

  auto* converge = app.add_subcommand("converge", "manufactured-solution convergence study");
  converge->add_option("--case", which)->check(CLI::IsMember({"1d", "3d"}));
  converge->add_option("--scheme", scheme);
  converge->add_option("--vary", vary)->check(CLI::IsMember({"time", "space"}));
  converge->add_option("--out", outdir);

  auto* ratios = app.add_subcommand("ratios", "efficiency ratios of the improved schemes");
  ratios->add_option("--case", which)->check(CLI::IsMember({"1d", "3d"}));
  ratios->add_option("--out", outdir);

  std::vector<double> alphas, dts, he;
  std::size_t nx = 100;
  std::int64_t steps = 10000;
  std::uint64_t seed = 20240901;
  auto* stability = app.add_subcommand("stability", "long-run stability sweep");
  stability->add_option("--scheme", scheme);
  stability->add_option("--alphas", alphas);
  stability->add_option("--dts", dts);
  stability->add_option("--nx", nx);
  stability->add_option("--steps", steps);
  stability->add_option("--seed", seed);
  stability->add_option("--out", outdir);

  double h0_mt = 30.0, dh_mt = 3.0, tilt_deg = 1.0;
  std::int64_t max_steps = 20000;
  bool full_scale = false;
  auto* hysteresis = app.add_subcommand("hysteresis", "field-sweep hysteresis loop");
  hysteresis->add_option("--config", config_path);
  hysteresis->add_option("--scheme", scheme);
  hysteresis->add_option("--H0-mT", h0_mt);
  hysteresis->add_option("--dH-mT", dh_mt);
  hysteresis->add_option("--tilt-deg", tilt_deg);
  hysteresis->add_option("--max-steps", max_steps);
  hysteresis->add_flag("--full-scale", full_scale);
  hysteresis->add_option("--out", outdir);

  double alpha = 0.1, t_ns = 1.0;
  auto* profile = app.add_subcommand("profile", "zero-field magnetization profile relaxation");
  profile->add_option("--config", config_path);
  profile->add_option("--scheme", scheme);
  profile->add_option("--alpha", alpha);
  profile->add_option("--T-ns", t_ns);
  profile->add_flag("--full-scale", full_scale);
  profile->add_option("--out", outdir);

  std::string in_path, out_path;
  double dt = 1e-4, eps = 1.0, q = 0.0;
  bool aniso = false, external = false, stray = false;
  auto* debug = app.add_subcommand("step-debug", "run one step on a snapshot");
  debug->add_option("--scheme", scheme);
  debug->add_option("--in", in_path)->required();
  debug->add_option("--out", out_path);
  debug->add_option("--dt", dt);
  debug->add_option("--alpha", alpha);
  debug->add_option("--eps", eps);
  debug->add_option("--Q", q);
  debug->add_option("--he", he);
  debug->add_flag("--anisotropy", aniso);
  debug->add_flag("--external", external);
  debug->add_flag("--stray", stray);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    const fs::path out = resolve_outdir(outdir);
    if (converge->parsed()) return run_converge(which, scheme, vary, out);
    if (ratios->parsed()) return run_ratios(which, out);
    if (stability->parsed()) return run_stability(scheme, alphas, dts, nx, steps, seed, out);
    if (hysteresis->parsed()) {
      return run_hysteresis(config_path.empty() ? std::nullopt
                                                : std::optional<std::string>(config_path),
                            scheme, h0_mt, dh_mt, tilt_deg, max_steps, full_scale, out);
    }
    if (profile->parsed()) {
      return run_profile(config_path.empty() ? std::nullopt
                                             : std::optional<std::string>(config_path),
                         scheme, alpha, t_ns, full_scale, out);
    }
    if (debug->parsed()) {
      return run_step_debug(scheme, in_path, out_path, dt, alpha, eps, q, he, aniso, external,
                            stray);
    }
  } catch (const gspm::DivergedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRunFailure;
  } catch (const gspm::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const gspm::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRunFailure;
  }
  return kExitConfigError;
}
